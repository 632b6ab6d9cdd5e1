#ifndef CARFIR_IDENTIFICATION_HPP
#define CARFIR_IDENTIFICATION_HPP

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "carfir/dataset.hpp"
#include "carfir/fuzzifier.hpp"

namespace carfir {

/// Model structure: a depth x n_vars grid of integers over the time
/// offsets t-depth+1 .. t (one row per offset, oldest first). Cell values:
/// 0 unused, -j marks the j-th antecedent (numbered contiguously from -1
/// in row-major reading order), +1 the single output cell in the last row.
struct Mask {
    int depth = 0;
    int n_vars = 0;
    std::vector<int> cells; // row-major

    int at(int row, int var) const { return cells[static_cast<std::size_t>(row * n_vars + var)]; }
    int n_antec() const;
    int output_var() const;
    /// (row, var) per antecedent, ordered by antecedent number.
    std::vector<std::pair<int, int>> antecedent_cells() const;
    void validate() const;
};

/// Text form, one row per time offset: "0 0 / -1 0 / -2 +1".
std::string format_mask(const Mask& mask);
Mask parse_mask(std::string_view text);

/// Search space: 0 = cell not available, -1 = candidate input cell,
/// +1 = the fixed output cell (last row).
struct MaskTemplate {
    int depth = 0;
    int n_vars = 0;
    std::vector<int> cells;
};

/// All masks using between 1 and max_inputs of the template's candidate
/// cells, in lexicographic order over the chosen cell-index tuples.
std::vector<Mask> enumerate_masks(const MaskTemplate& tmpl, int max_inputs);

/// One behavior-matrix row: the qualitative triples read at the masked
/// offsets plus their defuzzified reals.
struct PatternRule {
    std::vector<QualitativeValue> antecedents;
    std::vector<double> antecedent_reals;
    QualitativeValue consequent;
    double consequent_real = 0.0;
};

struct PatternRuleBase {
    Mask mask;
    std::vector<Partition> partitions; // per variable, inputs then output
    std::vector<PatternRule> rules;

    const Partition& output_partition() const {
        return partitions[static_cast<std::size_t>(mask.output_var())];
    }
    /// Partition of the variable the j-th antecedent reads.
    const Partition& antecedent_partition(int j) const;
    std::vector<Partition> antecedent_partitions() const;
};

/// Slides the mask over the data: one rule per window position
/// (n_samples - depth + 1 in total), duplicates retained.
PatternRuleBase apply_mask(const Mask& mask, const Dataset& ds,
                           const std::vector<Partition>& partitions);

/// Determinism of the state-transition relation: 1 - H_m / H_max, where
/// H_m is the sample-weighted Shannon entropy (natural log) of the
/// consequent class conditioned on the antecedent class tuple and
/// H_max = ln(n_output_classes). 1 means fully deterministic.
double mask_quality(const PatternRuleBase& prb);

struct MaskSearchResult {
    Mask mask;
    PatternRuleBase rules;
    double quality = 0.0;
};

/// Evaluates every enumerated mask on the data and returns the best one.
/// Ties break toward fewer inputs, then enumeration order.
MaskSearchResult best_mask(const Dataset& ds, const std::vector<Partition>& partitions,
                           const MaskTemplate& tmpl, int max_inputs, int jobs = 1);

} // namespace carfir

#endif
