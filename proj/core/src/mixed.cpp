#include "carfir/mixed.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace carfir {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::G1: return "G1";
    case ErrorKind::G2: return "G2";
    case ErrorKind::G3: return "G3";
    }
    return "?";
}

ErrorKind error_kind_from_string(std::string_view name) {
    if (name == "G1" || name == "g1") return ErrorKind::G1;
    if (name == "G2" || name == "g2") return ErrorKind::G2;
    if (name == "G3" || name == "g3") return ErrorKind::G3;
    throw std::invalid_argument("unknown error model '" + std::string(name) +
                                "' (expected G1, G2 or G3)");
}

std::size_t region_of(std::span<const double> x, const SugenoRuleBase& srb) {
    if (x.size() != srb.partitions.size())
        throw std::invalid_argument("region_of: query length does not match antecedent count");
    const GridShape shape = srb.shape();
    std::vector<int> idx(x.size());
    for (std::size_t j = 0; j < x.size(); ++j)
        idx[j] = class_of(srb.partitions[j], x[j]);
    return shape.linear(idx);
}

ErrorModel build_error_model(ErrorKind kind, const PatternRuleBase& prb,
                             const SugenoRuleBase& srb, int k) {
    if (prb.rules.empty())
        throw std::invalid_argument("build_error_model: empty pattern rule base");

    ErrorModel em;
    em.kind = kind;
    em.regions.assign(srb.n_rules(), RegionStats{});
    em.rule_cells.reserve(prb.rules.size());

    for (const auto& rule : prb.rules) {
        const std::span<const double> x(rule.antecedent_reals);
        double err = 0.0;
        switch (kind) {
        case ErrorKind::G1: {
            const double d = fir_predict_one(x, prb, k) - rule.consequent_real;
            err = d * d;
            break;
        }
        case ErrorKind::G2: {
            const double d = sugeno_infer(x, srb) - rule.consequent_real;
            err = d * d;
            break;
        }
        case ErrorKind::G3: {
            const double d = fir_predict_one(x, prb, k) - sugeno_infer(x, srb);
            err = d * d;
            break;
        }
        }
        const std::size_t cell = region_of(x, srb);
        em.regions[cell].sse += err;
        ++em.regions[cell].count;
        em.rule_cells.push_back(cell);
    }

    for (std::size_t i = 0; i < em.regions.size(); ++i) {
        auto& r = em.regions[i];
        if (r.count) {
            r.mean = r.sse / static_cast<double>(r.count);
            em.ranking.push_back(i);
        }
    }
    std::stable_sort(em.ranking.begin(), em.ranking.end(),
                     [&](std::size_t a, std::size_t b) {
                         if (em.regions[a].mean != em.regions[b].mean)
                             return em.regions[a].mean > em.regions[b].mean;
                         return a < b;
                     });
    return em;
}

std::vector<RetainedRule> select_retained_rules(const ErrorModel& em,
                                                const PatternRuleBase& prb, double percent) {
    if (percent < 0.0 || percent > 100.0)
        throw std::invalid_argument("select_retained_rules: percent must be in [0, 100]");
    if (em.rule_cells.size() != prb.rules.size())
        throw std::invalid_argument(
            "select_retained_rules: error model built from a different rule base");

    std::vector<RetainedRule> retained;
    const std::size_t n = prb.rules.size();
    const std::size_t target =
        static_cast<std::size_t>(std::ceil(percent / 100.0 * static_cast<double>(n)));
    if (target == 0)
        return retained;

    // rule indices grouped by cell, walk order = ranking
    for (std::size_t cell : em.ranking) {
        for (std::size_t i = 0; i < n; ++i) {
            if (em.rule_cells[i] != cell)
                continue;
            const auto& rule = prb.rules[i];
            retained.push_back(RetainedRule{rule.antecedent_reals, rule.consequent_real,
                                            cell, i});
        }
        if (retained.size() >= target)
            break;
    }
    return retained;
}

double normalized_distance(std::span<const double> x,
                           std::span<const double> rule_antecedents) {
    if (x.size() != rule_antecedents.size())
        throw std::invalid_argument("normalized_distance: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - rule_antecedents[i];
        s += d * d;
    }
    return std::sqrt(s) / std::sqrt(static_cast<double>(x.size()));
}

double normalized_distance(std::span<const double> x, const PatternRule& rule) {
    return normalized_distance(x, rule.antecedent_reals);
}

double f_mix(double d_norm, const FmixParams& params) {
    if (d_norm < 0.0 || !std::isfinite(d_norm))
        throw std::invalid_argument("f_mix: distance must be finite and nonnegative");
    if (!(params.d_low < params.d_high))
        throw std::invalid_argument("f_mix: d_low must be below d_high");
    if (d_norm <= params.d_low)
        return 1.0;
    if (d_norm >= params.d_high)
        return 0.0;
    const auto h = [](double d) { return 1.0 / (1.0 - std::exp(-d)); };
    const double h_low = h(params.d_low);
    const double h_high = h(params.d_high);
    return (h(d_norm) - h_high) / (h_low - h_high);
}

MixedModel make_mixed_model(const PatternRuleBase& prb, SugenoRuleBase srb,
                            std::vector<RetainedRule> retained, FmixParams params) {
    MixedModel mm;
    mm.srb = std::move(srb);
    mm.retained = std::move(retained);
    mm.fmix = params;
    mm.mask = prb.mask;
    return mm;
}

double mixed_infer(std::span<const double> x, const MixedModel& mm) {
    const double y_sugeno = sugeno_infer(x, mm.srb);
    if (mm.retained.empty())
        return y_sugeno;

    const RetainedRule* closest = nullptr;
    double best = 0.0;
    for (const auto& rule : mm.retained) {
        const double d = normalized_distance(x, rule.antecedents);
        if (!closest || d < best ||
            (d == best && rule.original_index < closest->original_index)) {
            closest = &rule;
            best = d;
        }
    }
    const double f = f_mix(best, mm.fmix);
    return closest->consequent * f + y_sugeno * (1.0 - f);
}

TimeSeries mixed_forecast(const MixedModel& mm, const Dataset& test, int horizon) {
    return closed_loop_forecast(
        mm.mask, mm.srb.partitions, test, horizon,
        [&](std::span<const double> x) { return mixed_infer(x, mm); });
}

} // namespace carfir
