#ifndef CARFIR_FUZZIFIER_HPP
#define CARFIR_FUZZIFIER_HPP

#include <span>
#include <vector>

#include "carfir/dataset.hpp"

namespace carfir {

/// Class layout of one variable: n_classes + 1 strictly increasing
/// landmarks and one center strictly inside each class. Centers default to
/// the midpoints of adjacent landmarks but may be overridden.
struct Partition {
    std::vector<double> landmarks;
    std::vector<double> centers;

    int n_classes() const { return static_cast<int>(centers.size()); }
    double lo() const { return landmarks.front(); }
    double hi() const { return landmarks.back(); }
};

Partition make_partition(std::vector<double> landmarks);
Partition make_partition(std::vector<double> landmarks, std::vector<double> centers);

/// Equal-frequency partition: sorted values are split into n_classes groups
/// of equal count (+-1, larger groups first); interior landmark i is the
/// midpoint between the last value of group i and the first of group i+1,
/// outer landmarks are the extremes. Throws when the values cannot support
/// strictly increasing landmarks (e.g. fewer distinct values than classes).
Partition efp_landmarks(std::span<const double> values, int n_classes);

enum class Side { Left, Center, Right };

/// (class, membership, side) triple. membership == 1 iff side == Center;
/// membership is always in [0.5, 1].
struct QualitativeValue {
    int class_idx = 0;
    double membership = 1.0;
    Side side = Side::Center;
};

/// Clamps into [landmarks.front(), landmarks.back()].
double clamp_to(const Partition& p, double x);

/// Containing class after clamping. Classes are left-closed/right-open
/// except the last (closed), so a value exactly at an interior landmark
/// belongs to the upper class.
int class_of(const Partition& p, double x);

/// Gaussian bell of class `cls` evaluated at x: exp(-k (x - center)^2) with
/// k chosen per class half so the value is exactly 0.5 at either landmark
/// of the class. Defined (and positive) for x outside the class as well.
double class_membership(const Partition& p, int cls, double x);

QualitativeValue fuzzify(double x, const Partition& p);

/// Exact inverse of fuzzify on its own output: the unique x in the class,
/// on the given side, whose bell value equals the stored membership.
/// Throws on inconsistent triples (membership outside [0.5, 1], bad class).
double defuzzify(const QualitativeValue& q, const Partition& p);

std::vector<QualitativeValue> fuzzify_series(const TimeSeries& ts, const Partition& p);

} // namespace carfir

#endif
