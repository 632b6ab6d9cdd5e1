#include "carfir/sugeno.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace carfir {

std::size_t GridShape::size() const {
    std::size_t n = 1;
    for (int d : dims)
        n *= static_cast<std::size_t>(d);
    return n;
}

std::size_t GridShape::linear(std::span<const int> idx) const {
    std::size_t lin = 0;
    for (std::size_t j = 0; j < dims.size(); ++j)
        lin = lin * static_cast<std::size_t>(dims[j]) + static_cast<std::size_t>(idx[j]);
    return lin;
}

std::vector<int> GridShape::multi(std::size_t linear) const {
    std::vector<int> idx(dims.size());
    for (std::size_t j = dims.size(); j-- > 0;) {
        idx[j] = static_cast<int>(linear % static_cast<std::size_t>(dims[j]));
        linear /= static_cast<std::size_t>(dims[j]);
    }
    return idx;
}

GridShape SugenoRuleBase::shape() const {
    GridShape s;
    s.dims.reserve(partitions.size());
    for (const auto& p : partitions)
        s.dims.push_back(p.n_classes());
    return s;
}

SugenoRuleBase init_rule_grid(const PatternRuleBase& prb) {
    if (prb.rules.empty())
        throw std::invalid_argument("init_rule_grid: empty pattern rule base");

    SugenoRuleBase srb;
    srb.partitions = prb.antecedent_partitions();
    const GridShape shape = srb.shape();
    const std::size_t n = shape.size();

    std::vector<double> sum(n, 0.0);
    std::vector<std::size_t> count(n, 0);
    std::vector<int> idx(srb.partitions.size());
    for (const auto& rule : prb.rules) {
        for (std::size_t j = 0; j < idx.size(); ++j)
            idx[j] = rule.antecedents[j].class_idx;
        const std::size_t cell = shape.linear(idx);
        sum[cell] += rule.consequent_real;
        ++count[cell];
    }

    srb.weights.assign(n, 0.0);
    std::vector<std::size_t> occupied;
    for (std::size_t i = 0; i < n; ++i)
        if (count[i]) {
            srb.weights[i] = sum[i] / static_cast<double>(count[i]);
            occupied.push_back(i);
        }

    // empty cells copy the nearest nonempty cell's weight
    for (std::size_t i = 0; i < n; ++i) {
        if (count[i])
            continue;
        const auto here = shape.multi(i);
        std::size_t best = occupied.front();
        long best_d2 = std::numeric_limits<long>::max();
        for (std::size_t cell : occupied) {
            const auto there = shape.multi(cell);
            long d2 = 0;
            for (std::size_t j = 0; j < here.size(); ++j) {
                const long d = here[j] - there[j];
                d2 += d * d;
            }
            if (d2 < best_d2) { // ties keep the lower linear index
                best_d2 = d2;
                best = cell;
            }
        }
        srb.weights[i] = srb.weights[best];
    }
    return srb;
}

namespace {

struct DimSupport {
    int cls[2];
    double mu[2];
    int n;
};

DimSupport dim_support(const Partition& p, double x) {
    x = clamp_to(p, x);
    const int c = class_of(p, x);
    const double center = p.centers[static_cast<std::size_t>(c)];
    DimSupport s{};
    s.cls[0] = c;
    s.mu[0] = class_membership(p, c, x);
    s.n = 1;
    int neighbor = -1;
    if (x < center && c > 0)
        neighbor = c - 1;
    else if (x > center && c < p.n_classes() - 1)
        neighbor = c + 1;
    if (neighbor >= 0) {
        s.cls[1] = neighbor;
        s.mu[1] = class_membership(p, neighbor, x);
        s.n = 2;
    }
    return s;
}

/// Nonzero fires at x as (linear cell, mu) pairs, cell ascending.
void sparse_fires(std::span<const double> x, const SugenoRuleBase& srb,
                  std::vector<std::pair<std::size_t, double>>& out) {
    const GridShape shape = srb.shape();
    const std::size_t m = srb.partitions.size();
    out.clear();

    std::vector<DimSupport> supports(m);
    for (std::size_t j = 0; j < m; ++j) {
        supports[j] = dim_support(srb.partitions[j], x[j]);
        // ascending class order keeps cell ids sorted below
        if (supports[j].n == 2 && supports[j].cls[1] < supports[j].cls[0]) {
            std::swap(supports[j].cls[0], supports[j].cls[1]);
            std::swap(supports[j].mu[0], supports[j].mu[1]);
        }
    }

    std::vector<int> pick(m, 0);
    std::vector<int> idx(m);
    for (;;) {
        double mu = 1.0;
        for (std::size_t j = 0; j < m; ++j) {
            mu *= supports[j].mu[pick[j]];
            idx[j] = supports[j].cls[pick[j]];
        }
        out.emplace_back(shape.linear(idx), mu);
        std::size_t j = m;
        while (j-- > 0) {
            if (pick[j] + 1 < supports[j].n) {
                ++pick[j];
                break;
            }
            pick[j] = 0;
            if (j == 0)
                return;
        }
    }
}

void check_query(std::span<const double> x, const SugenoRuleBase& srb, const char* who) {
    if (x.size() != srb.partitions.size())
        throw std::invalid_argument(std::string(who) +
                                    ": query length does not match antecedent count");
}

} // namespace

FireVector fire_strengths(std::span<const double> x, const SugenoRuleBase& srb) {
    check_query(x, srb, "fire_strengths");
    FireVector fires(srb.n_rules(), 0.0);
    std::vector<std::pair<std::size_t, double>> sparse;
    sparse_fires(x, srb, sparse);
    for (const auto& [cell, mu] : sparse)
        fires[cell] = mu;
    return fires;
}

double sugeno_infer(std::span<const double> x, const SugenoRuleBase& srb) {
    check_query(x, srb, "sugeno_infer");
    std::vector<std::pair<std::size_t, double>> sparse;
    sparse_fires(x, srb, sparse);
    double num = 0.0, den = 0.0;
    for (const auto& [cell, mu] : sparse) {
        num += mu * srb.weights[cell];
        den += mu;
    }
    if (!(den > 0.0))
        throw std::runtime_error("sugeno_infer: no rule fires (coverage violated)");
    return num / den;
}

namespace {

/// Normalized fires per pattern rule, precomputed once: the memberships do
/// not depend on the weights being tuned.
struct TuningSamples {
    std::vector<std::vector<std::pair<std::size_t, double>>> phi; // (cell, mu/sum_mu)
    std::vector<double> target;
};

TuningSamples collect_samples(const SugenoRuleBase& srb, const PatternRuleBase& prb) {
    TuningSamples ts;
    ts.phi.reserve(prb.rules.size());
    ts.target.reserve(prb.rules.size());
    std::vector<std::pair<std::size_t, double>> sparse;
    for (const auto& rule : prb.rules) {
        sparse_fires(rule.antecedent_reals, srb, sparse);
        double den = 0.0;
        for (const auto& [cell, mu] : sparse)
            den += mu;
        auto& row = ts.phi.emplace_back();
        row.reserve(sparse.size());
        for (const auto& [cell, mu] : sparse)
            row.emplace_back(cell, mu / den);
        ts.target.push_back(rule.consequent_real);
    }
    return ts;
}

double cost_of(const std::vector<double>& w, const TuningSamples& ts) {
    double e = 0.0;
    for (std::size_t k = 0; k < ts.phi.size(); ++k) {
        double y = 0.0;
        for (const auto& [cell, phi] : ts.phi[k])
            y += phi * w[cell];
        const double r = y - ts.target[k];
        e += r * r;
    }
    return 0.5 * e;
}

void gradient_of(const std::vector<double>& w, const TuningSamples& ts,
                 std::vector<double>& grad) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t k = 0; k < ts.phi.size(); ++k) {
        double y = 0.0;
        for (const auto& [cell, phi] : ts.phi[k])
            y += phi * w[cell];
        const double r = y - ts.target[k];
        for (const auto& [cell, phi] : ts.phi[k])
            grad[cell] += r * phi;
    }
}

void check_compatible(const SugenoRuleBase& srb, const PatternRuleBase& prb, const char* who) {
    if (prb.rules.empty())
        throw std::invalid_argument(std::string(who) + ": empty pattern rule base");
    if (!prb.rules.empty() &&
        prb.rules.front().antecedent_reals.size() != srb.partitions.size())
        throw std::invalid_argument(std::string(who) +
                                    ": antecedent count mismatch between rule bases");
}

} // namespace

double cost(const SugenoRuleBase& srb, const PatternRuleBase& prb) {
    check_compatible(srb, prb, "cost");
    return cost_of(srb.weights, collect_samples(srb, prb));
}

std::vector<double> cost_gradient(const SugenoRuleBase& srb, const PatternRuleBase& prb) {
    check_compatible(srb, prb, "cost_gradient");
    const TuningSamples ts = collect_samples(srb, prb);
    std::vector<double> grad(srb.weights.size());
    gradient_of(srb.weights, ts, grad);
    return grad;
}

SugenoRuleBase tune_weights(SugenoRuleBase srb, const PatternRuleBase& prb,
                            const TuneOptions& opt) {
    check_compatible(srb, prb, "tune_weights");
    if (!(opt.rate > 0.0))
        throw std::invalid_argument("tune_weights: rate must be positive");
    if (opt.epochs < 0)
        throw std::invalid_argument("tune_weights: epochs must be >= 0");

    const TuningSamples ts = collect_samples(srb, prb);
    double current = cost_of(srb.weights, ts);
    if (!std::isfinite(current))
        throw std::runtime_error("tune_weights: non-finite cost before epoch 1");
    srb.epoch_history.clear();
    srb.epoch_history.push_back(current);

    double rate = opt.rate;
    std::vector<double> grad(srb.weights.size());
    std::vector<double> candidate(srb.weights.size());

    for (int epoch = 1; epoch <= opt.epochs; ++epoch) {
        gradient_of(srb.weights, ts, grad);
        bool accepted = false;
        for (int attempt = 0; attempt <= opt.max_halvings; ++attempt) {
            for (std::size_t i = 0; i < candidate.size(); ++i)
                candidate[i] = srb.weights[i] - rate * grad[i];
            const double next = cost_of(candidate, ts);
            if (std::isfinite(next) && next <= current) {
                srb.weights = candidate;
                current = next;
                accepted = true;
                break;
            }
            if (!std::isfinite(next) && attempt == opt.max_halvings)
                throw std::runtime_error("tune_weights: non-finite cost at epoch " +
                                         std::to_string(epoch));
            rate *= 0.5;
        }
        // not accepted: keep the weights, the epoch is a no-op
        (void)accepted;
        srb.epoch_history.push_back(current);
    }
    return srb;
}

SugenoRuleBase tune_weights(SugenoRuleBase srb, const PatternRuleBase& prb, double rate,
                            int epochs) {
    TuneOptions opt;
    opt.rate = rate;
    opt.epochs = epochs;
    return tune_weights(std::move(srb), prb, opt);
}

} // namespace carfir
