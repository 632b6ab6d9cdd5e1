#ifndef CARFIR_SUGENO_HPP
#define CARFIR_SUGENO_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "carfir/fuzzifier.hpp"
#include "carfir/identification.hpp"

namespace carfir {

/// Row-major indexing over an antecedent class grid.
struct GridShape {
    std::vector<int> dims;

    std::size_t size() const;
    std::size_t linear(std::span<const int> idx) const;
    std::vector<int> multi(std::size_t linear) const;
};

/// Zero-order Sugeno rule grid: one constant weight per antecedent class
/// combination. epoch_history[0] is the cost before tuning; each tuning
/// epoch appends the cost reached after it.
struct SugenoRuleBase {
    std::vector<Partition> partitions; // per antecedent
    std::vector<double> weights;       // row-major over the class grid
    std::vector<double> epoch_history;

    GridShape shape() const;
    std::size_t n_rules() const { return weights.size(); }
};

/// One rule per antecedent class combination. A cell's weight starts as
/// the mean consequent of the pattern rules falling in it; empty cells
/// copy the weight of the nearest nonempty cell (Euclidean over index
/// tuples, ties toward the lower linear index).
SugenoRuleBase init_rule_grid(const PatternRuleBase& prb);

/// Per-rule fire strengths at x: the product over dimensions of the class
/// bell memberships. Per dimension only the containing class and the class
/// across the nearest landmark are nonzero, so the vector always has
/// positive total mass for clamped inputs.
using FireVector = std::vector<double>;
FireVector fire_strengths(std::span<const double> x, const SugenoRuleBase& srb);

/// Fire-weighted average sum(mu_i w_i) / sum(mu_i).
double sugeno_infer(std::span<const double> x, const SugenoRuleBase& srb);

/// Quadratic error against the pattern rule base:
/// E = 1/2 sum_k (infer(x_k) - y_k)^2.
double cost(const SugenoRuleBase& srb, const PatternRuleBase& prb);

/// dE/dw_i = sum_k (y_k - y_k^r) mu_ik / sum_j mu_jk.
std::vector<double> cost_gradient(const SugenoRuleBase& srb, const PatternRuleBase& prb);

struct TuneOptions {
    double rate = 0.1;
    int epochs = 50;
    int max_halvings = 20;
};

/// Batch gradient descent on the rule weights. An epoch whose step would
/// raise the cost is retried at half the rate (the reduced rate persists);
/// after max_halvings the weights are left unchanged for that epoch, so
/// epoch_history is nonincreasing. Throws on non-finite cost.
SugenoRuleBase tune_weights(SugenoRuleBase srb, const PatternRuleBase& prb,
                            const TuneOptions& opt = {});
SugenoRuleBase tune_weights(SugenoRuleBase srb, const PatternRuleBase& prb, double rate,
                            int epochs);

} // namespace carfir

#endif
