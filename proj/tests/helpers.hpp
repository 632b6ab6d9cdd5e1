#ifndef CARFIR_TEST_HELPERS_HPP
#define CARFIR_TEST_HELPERS_HPP

#include <algorithm>
#include <vector>

#include "carfir/identification.hpp"
#include "carfir/rng.hpp"
#include "carfir/sugeno.hpp"

namespace carfir::test {

inline Partition unit_partition(int classes) {
    std::vector<double> lm(static_cast<std::size_t>(classes) + 1);
    for (int i = 0; i <= classes; ++i)
        lm[static_cast<std::size_t>(i)] = double(i) / classes;
    return make_partition(lm);
}

inline Partition random_partition(Rng& rng, int classes) {
    std::vector<double> lm{0.0};
    for (int i = 1; i < classes; ++i)
        lm.push_back(rng.uniform(0.05, 0.95));
    lm.push_back(1.0);
    std::sort(lm.begin(), lm.end());
    for (std::size_t i = 1; i < lm.size(); ++i)
        lm[i] = std::max(lm[i], lm[i - 1] + 0.02);
    const double scale = lm.back();
    for (auto& v : lm)
        v /= scale;
    return make_partition(lm);
}

inline SugenoRuleBase random_grid(Rng& rng, int classes_a, int classes_b) {
    SugenoRuleBase srb;
    srb.partitions = {random_partition(rng, classes_a), random_partition(rng, classes_b)};
    srb.weights.resize(srb.shape().size());
    for (auto& w : srb.weights)
        w = rng.uniform01();
    return srb;
}

/// Pattern rule base over explicit (x, y) samples with the given antecedent
/// partitions. Consequent reals are stored verbatim (no clamping), so
/// hand-picked residuals survive exactly.
inline PatternRuleBase samples_prb(const std::vector<Partition>& antecedent_parts,
                                   const std::vector<std::vector<double>>& xs,
                                   const std::vector<double>& ys) {
    PatternRuleBase prb;
    const int m = static_cast<int>(antecedent_parts.size());
    prb.mask.depth = 2;
    prb.mask.n_vars = m + 1;
    prb.mask.cells.assign(static_cast<std::size_t>(2 * (m + 1)), 0);
    for (int j = 0; j < m; ++j)
        prb.mask.cells[static_cast<std::size_t>(j)] = -j - 1;
    prb.mask.cells.back() = 1;
    prb.partitions = antecedent_parts;
    prb.partitions.push_back(unit_partition(5));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        PatternRule r;
        for (int j = 0; j < m; ++j) {
            const Partition& p = antecedent_parts[static_cast<std::size_t>(j)];
            r.antecedents.push_back(fuzzify(xs[i][static_cast<std::size_t>(j)], p));
            r.antecedent_reals.push_back(clamp_to(p, xs[i][static_cast<std::size_t>(j)]));
        }
        r.consequent = fuzzify(std::clamp(ys[i], 0.0, 1.0), prb.partitions.back());
        r.consequent_real = ys[i];
        prb.rules.push_back(std::move(r));
    }
    return prb;
}

} // namespace carfir::test

#endif
