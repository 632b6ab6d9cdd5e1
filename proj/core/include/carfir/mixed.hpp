#ifndef CARFIR_MIXED_HPP
#define CARFIR_MIXED_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "carfir/fir_forecast.hpp"
#include "carfir/identification.hpp"
#include "carfir/sugeno.hpp"

namespace carfir {

/// Which squared discrepancy a region accumulates: pattern scheme vs real,
/// Sugeno scheme vs real, or pattern vs Sugeno.
enum class ErrorKind { G1, G2, G3 };

const char* to_string(ErrorKind kind);
ErrorKind error_kind_from_string(std::string_view name);

struct RegionStats {
    double sse = 0.0;
    std::size_t count = 0;
    double mean = 0.0;
};

/// Per-region uncertainty model over the Sugeno antecedent grid. `ranking`
/// lists the occupied cells by mean error, descending, ties toward the
/// lower cell id. `rule_cells` records each pattern rule's region so rule
/// retention does not need the grid again.
struct ErrorModel {
    ErrorKind kind = ErrorKind::G1;
    std::vector<RegionStats> regions;     // one per grid cell
    std::vector<std::size_t> ranking;     // occupied cells only
    std::vector<std::size_t> rule_cells;  // parallel to the source rules
};

/// The grid cell whose antecedent classes contain x (per-dimension
/// fuzzifier classification, so landmark points go to the upper class).
std::size_t region_of(std::span<const double> x, const SugenoRuleBase& srb);

/// Evaluates both schemes at every pattern rule's antecedent point and
/// accumulates the squared discrepancy of `kind` into the point's region.
ErrorModel build_error_model(ErrorKind kind, const PatternRuleBase& prb,
                             const SugenoRuleBase& srb, int k = 5);

struct RetainedRule {
    std::vector<double> antecedents;
    double consequent = 0.0;
    std::size_t cell = 0;
    std::size_t original_index = 0;
};

/// Walks the uncertainty ranking, keeping every pattern rule of each region
/// until at least ceil(percent/100 * N) rules are retained; whole regions
/// are kept, so the target may be exceeded.
std::vector<RetainedRule> select_retained_rules(const ErrorModel& em,
                                                const PatternRuleBase& prb, double percent);

/// d_norm = ||x - rule|| / sqrt(n_antec), in [0, 1] for unit-box points.
double normalized_distance(std::span<const double> x, std::span<const double> rule_antecedents);
double normalized_distance(std::span<const double> x, const PatternRule& rule);

struct FmixParams {
    double d_low = 0.01;
    double d_high = 0.25;
};

/// Pattern-rule weight as a function of the normalized distance: 1 at or
/// below d_low, 0 at or beyond d_high, and in between the logistic-derived
/// shape h(d) = 1 / (1 - exp(-d)) rescaled to hit both endpoints, which
/// keeps it continuous and strictly decreasing.
double f_mix(double d_norm, const FmixParams& params = {});

/// Self-contained mixed predictor. The mask is carried along so the model
/// can run closed-loop forecasts without the pattern rule base it was
/// built from.
struct MixedModel {
    SugenoRuleBase srb;
    std::vector<RetainedRule> retained;
    FmixParams fmix;
    Mask mask;

    int n_antec() const { return static_cast<int>(srb.partitions.size()); }
};

MixedModel make_mixed_model(const PatternRuleBase& prb, SugenoRuleBase srb,
                            std::vector<RetainedRule> retained, FmixParams params = {});

/// y_pattern * f_mix + y_sugeno * (1 - f_mix), where y_pattern comes from
/// the closest retained rule (ties toward the lower original index). An
/// empty retained set degrades to the pure Sugeno output.
double mixed_infer(std::span<const double> x, const MixedModel& mm);

TimeSeries mixed_forecast(const MixedModel& mm, const Dataset& test, int horizon);

} // namespace carfir

#endif
