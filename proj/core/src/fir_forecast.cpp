#include "carfir/fir_forecast.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace carfir {

namespace {

constexpr double kWeightEps = 1e-9;

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

} // namespace

std::vector<ScoredRule> nearest_rules(std::span<const double> x, const PatternRuleBase& prb,
                                      int k) {
    if (prb.rules.empty())
        throw std::invalid_argument("nearest_rules: empty rule base");
    if (k < 1)
        throw std::invalid_argument("nearest_rules: k must be >= 1");
    if (x.size() != static_cast<std::size_t>(prb.mask.n_antec()))
        throw std::invalid_argument("nearest_rules: query length does not match antecedents");

    const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(k), prb.rules.size());
    std::vector<ScoredRule> best; // sorted by (distance, index)
    best.reserve(keep + 1);

    for (std::size_t i = 0; i < prb.rules.size(); ++i) {
        const double d2 = squared_distance(x, prb.rules[i].antecedent_reals);
        if (best.size() == keep && d2 >= best.back().distance)
            continue;
        const ScoredRule cand{i, d2};
        auto pos = std::upper_bound(best.begin(), best.end(), cand,
                                    [](const ScoredRule& a, const ScoredRule& b) {
                                        return a.distance < b.distance ||
                                               (a.distance == b.distance && a.index < b.index);
                                    });
        best.insert(pos, cand);
        if (best.size() > keep)
            best.pop_back();
    }
    for (auto& s : best)
        s.distance = std::sqrt(s.distance);
    return best;
}

double fir_predict_one(std::span<const double> x, const PatternRuleBase& prb, int k) {
    const auto neighbors = nearest_rules(x, prb, k);
    if (neighbors.front().distance == 0.0)
        return prb.rules[neighbors.front().index].consequent_real;
    double num = 0.0, den = 0.0;
    for (const auto& s : neighbors) {
        const double w = 1.0 / (s.distance + kWeightEps);
        num += w * prb.rules[s.index].consequent_real;
        den += w;
    }
    return num / den;
}

TimeSeries closed_loop_forecast(const Mask& mask,
                                std::span<const Partition> antecedent_partitions,
                                const Dataset& test, int horizon,
                                const std::function<double(std::span<const double>)>& predict) {
    mask.validate();
    if (mask.n_vars != static_cast<int>(test.n_vars()))
        throw std::invalid_argument("forecast: mask width does not match variable count");
    const auto antec = mask.antecedent_cells();
    if (antecedent_partitions.size() != antec.size())
        throw std::invalid_argument("forecast: need one partition per antecedent");

    const std::size_t n = test.n_samples();
    const std::size_t seed = static_cast<std::size_t>(mask.depth) - 1;
    if (n < static_cast<std::size_t>(mask.depth))
        throw std::invalid_argument("forecast: test set shorter than mask depth");
    const std::size_t max_horizon = n - seed;
    std::size_t steps;
    if (horizon < 0) {
        steps = max_horizon;
    } else {
        steps = static_cast<std::size_t>(horizon);
        if (steps > max_horizon)
            throw std::invalid_argument("forecast: horizon exceeds available test data");
    }

    const int out_var = mask.output_var();
    std::vector<double> yhat(test.output.samples.begin(),
                             test.output.samples.begin() + static_cast<std::ptrdiff_t>(seed));
    std::vector<double> x(antec.size());

    for (std::size_t s = 0; s < steps; ++s) {
        const std::size_t t = seed + s;
        const std::size_t t0 = t + 1 - static_cast<std::size_t>(mask.depth);
        for (std::size_t j = 0; j < antec.size(); ++j) {
            const auto [row, var] = antec[j];
            const std::size_t tau = t0 + static_cast<std::size_t>(row);
            const double raw = var == out_var
                                   ? yhat[tau]
                                   : test.series(static_cast<std::size_t>(var)).samples[tau];
            x[j] = clamp_to(antecedent_partitions[j], raw);
        }
        yhat.push_back(predict(x));
    }

    return TimeSeries{test.output.name, std::move(yhat), test.output.dt};
}

TimeSeries fir_forecast(const PatternRuleBase& prb, const Dataset& test, int horizon, int k) {
    const auto parts = prb.antecedent_partitions();
    return closed_loop_forecast(
        prb.mask, parts, test, horizon,
        [&](std::span<const double> x) { return fir_predict_one(x, prb, k); });
}

} // namespace carfir
