#include "carfir/fuzzifier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace carfir {

namespace {

void check_landmarks(const std::vector<double>& lm) {
    if (lm.size() < 3)
        throw std::invalid_argument("partition: needs at least 2 classes (3 landmarks)");
    for (std::size_t i = 1; i < lm.size(); ++i)
        if (!(lm[i] > lm[i - 1]))
            throw std::invalid_argument("partition: landmarks must be strictly increasing");
}

} // namespace

Partition make_partition(std::vector<double> landmarks) {
    check_landmarks(landmarks);
    std::vector<double> centers(landmarks.size() - 1);
    for (std::size_t i = 0; i + 1 < landmarks.size(); ++i)
        centers[i] = 0.5 * (landmarks[i] + landmarks[i + 1]);
    return Partition{std::move(landmarks), std::move(centers)};
}

Partition make_partition(std::vector<double> landmarks, std::vector<double> centers) {
    check_landmarks(landmarks);
    if (centers.size() + 1 != landmarks.size())
        throw std::invalid_argument("partition: need one center per class");
    for (std::size_t i = 0; i < centers.size(); ++i)
        if (!(centers[i] > landmarks[i] && centers[i] < landmarks[i + 1]))
            throw std::invalid_argument("partition: center " + std::to_string(i) +
                                        " not strictly inside its class");
    return Partition{std::move(landmarks), std::move(centers)};
}

Partition efp_landmarks(std::span<const double> values, int n_classes) {
    if (n_classes < 2)
        throw std::invalid_argument("efp_landmarks: need at least 2 classes");
    if (values.size() < static_cast<std::size_t>(n_classes))
        throw std::invalid_argument("efp_landmarks: fewer values than classes");

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    std::size_t distinct = 1;
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i] != sorted[i - 1])
            ++distinct;
    if (distinct < static_cast<std::size_t>(n_classes))
        throw std::invalid_argument("efp_landmarks: only " + std::to_string(distinct) +
                                    " distinct values for " + std::to_string(n_classes) +
                                    " classes");

    const std::size_t n = sorted.size();
    const std::size_t base = n / static_cast<std::size_t>(n_classes);
    const std::size_t extra = n % static_cast<std::size_t>(n_classes); // larger groups first

    std::vector<double> lm;
    lm.reserve(static_cast<std::size_t>(n_classes) + 1);
    lm.push_back(sorted.front());
    std::size_t pos = 0;
    for (int g = 0; g + 1 < n_classes; ++g) {
        pos += base + (static_cast<std::size_t>(g) < extra ? 1 : 0);
        lm.push_back(0.5 * (sorted[pos - 1] + sorted[pos]));
    }
    lm.push_back(sorted.back());

    for (std::size_t i = 1; i < lm.size(); ++i)
        if (!(lm[i] > lm[i - 1]))
            throw std::invalid_argument(
                "efp_landmarks: tied values at a group boundary yield non-increasing "
                "landmarks; use fewer classes");

    return make_partition(std::move(lm));
}

double clamp_to(const Partition& p, double x) {
    return std::clamp(x, p.landmarks.front(), p.landmarks.back());
}

int class_of(const Partition& p, double x) {
    x = clamp_to(p, x);
    auto it = std::upper_bound(p.landmarks.begin(), p.landmarks.end(), x);
    int idx = static_cast<int>(it - p.landmarks.begin()) - 1;
    return std::clamp(idx, 0, p.n_classes() - 1);
}

double class_membership(const Partition& p, int cls, double x) {
    if (cls < 0 || cls >= p.n_classes())
        throw std::invalid_argument("class_membership: class index out of range");
    const double c = p.centers[static_cast<std::size_t>(cls)];
    const double half = x < c ? c - p.landmarks[static_cast<std::size_t>(cls)]
                              : p.landmarks[static_cast<std::size_t>(cls) + 1] - c;
    const double k = std::numbers::ln2 / (half * half);
    const double d = x - c;
    return std::exp(-k * d * d);
}

QualitativeValue fuzzify(double x, const Partition& p) {
    if (!std::isfinite(x))
        throw std::invalid_argument("fuzzify: non-finite value");
    x = clamp_to(p, x);
    const int cls = class_of(p, x);
    const double c = p.centers[static_cast<std::size_t>(cls)];
    if (x == c)
        return {cls, 1.0, Side::Center};
    double mu = class_membership(p, cls, x);
    // rounding fringe at landmarks / next to centers
    if (mu >= 1.0)
        return {cls, 1.0, Side::Center};
    mu = std::max(mu, 0.5);
    return {cls, mu, x < c ? Side::Left : Side::Right};
}

double defuzzify(const QualitativeValue& q, const Partition& p) {
    if (q.class_idx < 0 || q.class_idx >= p.n_classes())
        throw std::invalid_argument("defuzzify: class index out of range");
    if (q.membership < 0.5 || q.membership > 1.0)
        throw std::invalid_argument("defuzzify: membership " + std::to_string(q.membership) +
                                    " outside [0.5, 1]");
    const std::size_t cls = static_cast<std::size_t>(q.class_idx);
    const double c = p.centers[cls];
    if (q.side == Side::Center || q.membership == 1.0)
        return c;
    const double half =
        q.side == Side::Left ? c - p.landmarks[cls] : p.landmarks[cls + 1] - c;
    const double k = std::numbers::ln2 / (half * half);
    const double d = std::sqrt(-std::log(q.membership) / k);
    return q.side == Side::Left ? c - d : c + d;
}

std::vector<QualitativeValue> fuzzify_series(const TimeSeries& ts, const Partition& p) {
    std::vector<QualitativeValue> out;
    out.reserve(ts.samples.size());
    for (double x : ts.samples)
        out.push_back(fuzzify(x, p));
    return out;
}

} // namespace carfir
