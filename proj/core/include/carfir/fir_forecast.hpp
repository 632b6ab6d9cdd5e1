#ifndef CARFIR_FIR_FORECAST_HPP
#define CARFIR_FIR_FORECAST_HPP

#include <functional>
#include <span>
#include <vector>

#include "carfir/dataset.hpp"
#include "carfir/identification.hpp"

namespace carfir {

struct ScoredRule {
    std::size_t index = 0;
    double distance = 0.0;
};

/// The k rules with the smallest Euclidean distance between their
/// defuzzified antecedents and x, ascending; ties break toward the lower
/// rule index. Returns all rules when fewer than k exist.
std::vector<ScoredRule> nearest_rules(std::span<const double> x, const PatternRuleBase& prb,
                                      int k);

/// Pattern prediction: inverse-distance weighted mean (weights 1/(d + eps),
/// eps = 1e-9) of the k nearest consequent reals. An exact antecedent match
/// short-circuits to the first matching rule's consequent.
double fir_predict_one(std::span<const double> x, const PatternRuleBase& prb, int k = 5);

/// Autoregressive closed-loop simulation over `test`. The first depth-1
/// samples of the result are seeded from the test output; after that,
/// masked output lags come from prior predictions and masked input lags
/// from the test inputs. Each antecedent is clamped to its partition
/// before prediction. `horizon` counts predicted samples; pass -1 for the
/// whole remainder of the test set.
TimeSeries closed_loop_forecast(const Mask& mask,
                                std::span<const Partition> antecedent_partitions,
                                const Dataset& test, int horizon,
                                const std::function<double(std::span<const double>)>& predict);

TimeSeries fir_forecast(const PatternRuleBase& prb, const Dataset& test, int horizon,
                        int k = 5);

} // namespace carfir

#endif
