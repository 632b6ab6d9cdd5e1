#include "carfir/identification.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "carfir/parallel.hpp"

namespace carfir {

int Mask::n_antec() const {
    int m = 0;
    for (int c : cells)
        if (c < 0)
            ++m;
    return m;
}

int Mask::output_var() const {
    for (int v = 0; v < n_vars; ++v)
        if (at(depth - 1, v) > 0)
            return v;
    throw std::logic_error("mask: no output cell");
}

std::vector<std::pair<int, int>> Mask::antecedent_cells() const {
    std::vector<std::pair<int, int>> out(static_cast<std::size_t>(n_antec()));
    for (int r = 0; r < depth; ++r)
        for (int v = 0; v < n_vars; ++v) {
            const int c = at(r, v);
            if (c < 0)
                out[static_cast<std::size_t>(-c - 1)] = {r, v};
        }
    return out;
}

void Mask::validate() const {
    if (depth < 1 || n_vars < 1)
        throw std::invalid_argument("mask: depth and n_vars must be positive");
    if (cells.size() != static_cast<std::size_t>(depth * n_vars))
        throw std::invalid_argument("mask: cell count does not match depth x n_vars");
    int outputs = 0;
    std::vector<int> seen;
    for (int r = 0; r < depth; ++r)
        for (int v = 0; v < n_vars; ++v) {
            const int c = at(r, v);
            if (c > 0) {
                if (c != 1)
                    throw std::invalid_argument("mask: output cell must be +1");
                if (r != depth - 1)
                    throw std::invalid_argument("mask: output cell must sit in the last row");
                ++outputs;
            } else if (c < 0) {
                seen.push_back(-c);
            }
        }
    if (outputs != 1)
        throw std::invalid_argument("mask: exactly one output cell required");
    if (seen.empty())
        throw std::invalid_argument("mask: at least one antecedent required");
    std::sort(seen.begin(), seen.end());
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (seen[i] != static_cast<int>(i) + 1)
            throw std::invalid_argument("mask: antecedents must be numbered -1, -2, ... contiguously");
    // reading-order check: -1, -2, ... must appear in row-major order
    int expected = -1;
    for (int c : cells)
        if (c < 0) {
            if (c != expected)
                throw std::invalid_argument("mask: antecedent numbering must follow reading order");
            --expected;
        }
}

std::string format_mask(const Mask& mask) {
    std::ostringstream os;
    for (int r = 0; r < mask.depth; ++r) {
        if (r)
            os << " / ";
        for (int v = 0; v < mask.n_vars; ++v) {
            if (v)
                os << ' ';
            const int c = mask.at(r, v);
            if (c > 0)
                os << '+';
            os << c;
        }
    }
    return os.str();
}

Mask parse_mask(std::string_view text) {
    Mask mask;
    std::vector<std::vector<int>> rows;
    std::string row_text;
    std::string input(text);
    // rows separated by '/'
    std::stringstream ss(input);
    while (std::getline(ss, row_text, '/')) {
        std::vector<int> row;
        std::stringstream rs(row_text);
        std::string tok;
        while (rs >> tok) {
            try {
                row.push_back(std::stoi(tok));
            } catch (const std::exception&) {
                throw std::invalid_argument("parse_mask: bad cell '" + tok + "'");
            }
        }
        if (!row.empty())
            rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw std::invalid_argument("parse_mask: empty mask text");
    mask.depth = static_cast<int>(rows.size());
    mask.n_vars = static_cast<int>(rows.front().size());
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != mask.n_vars)
            throw std::invalid_argument("parse_mask: ragged rows");
        mask.cells.insert(mask.cells.end(), row.begin(), row.end());
    }
    mask.validate();
    return mask;
}

std::vector<Mask> enumerate_masks(const MaskTemplate& tmpl, int max_inputs) {
    if (max_inputs < 1)
        throw std::invalid_argument("enumerate_masks: max_inputs must be >= 1");

    std::vector<int> candidates; // flat cell indices of allowed input cells
    int output_cells = 0;
    for (std::size_t i = 0; i < tmpl.cells.size(); ++i) {
        if (tmpl.cells[i] < 0)
            candidates.push_back(static_cast<int>(i));
        else if (tmpl.cells[i] > 0)
            ++output_cells;
    }
    if (output_cells != 1)
        throw std::invalid_argument("enumerate_masks: template needs exactly one output cell");
    if (candidates.empty())
        throw std::invalid_argument("enumerate_masks: template has no candidate cells");

    std::vector<Mask> out;
    std::vector<int> chosen;

    auto emit = [&] {
        Mask m;
        m.depth = tmpl.depth;
        m.n_vars = tmpl.n_vars;
        m.cells.assign(tmpl.cells.size(), 0);
        for (std::size_t i = 0; i < tmpl.cells.size(); ++i)
            if (tmpl.cells[i] > 0)
                m.cells[i] = 1;
        int next = -1;
        for (int cell : chosen) // chosen is ascending == reading order
            m.cells[static_cast<std::size_t>(cell)] = next--;
        m.validate();
        out.push_back(std::move(m));
    };

    // lexicographic over cell-index tuples: each prefix is emitted before
    // its extensions
    auto recurse = [&](auto&& self, std::size_t from) -> void {
        for (std::size_t i = from; i < candidates.size(); ++i) {
            chosen.push_back(candidates[i]);
            emit();
            if (static_cast<int>(chosen.size()) < max_inputs)
                self(self, i + 1);
            chosen.pop_back();
        }
    };
    recurse(recurse, 0);
    return out;
}

const Partition& PatternRuleBase::antecedent_partition(int j) const {
    const auto cells = mask.antecedent_cells();
    return partitions[static_cast<std::size_t>(cells[static_cast<std::size_t>(j)].second)];
}

std::vector<Partition> PatternRuleBase::antecedent_partitions() const {
    std::vector<Partition> out;
    for (const auto& [row, var] : mask.antecedent_cells())
        out.push_back(partitions[static_cast<std::size_t>(var)]);
    return out;
}

PatternRuleBase apply_mask(const Mask& mask, const Dataset& ds,
                           const std::vector<Partition>& partitions) {
    mask.validate();
    if (mask.n_vars != static_cast<int>(ds.n_vars()))
        throw std::invalid_argument("apply_mask: mask width does not match variable count");
    if (partitions.size() != ds.n_vars())
        throw std::invalid_argument("apply_mask: need one partition per variable");
    const std::size_t n = ds.n_samples();
    if (n < static_cast<std::size_t>(mask.depth))
        throw std::invalid_argument("apply_mask: series shorter than mask depth");

    const auto antec = mask.antecedent_cells();
    const int out_var = mask.output_var();
    const Partition& out_part = partitions[static_cast<std::size_t>(out_var)];

    PatternRuleBase prb;
    prb.mask = mask;
    prb.partitions = partitions;
    prb.rules.reserve(n - static_cast<std::size_t>(mask.depth) + 1);

    for (std::size_t t0 = 0; t0 + static_cast<std::size_t>(mask.depth) <= n; ++t0) {
        PatternRule rule;
        rule.antecedents.reserve(antec.size());
        rule.antecedent_reals.reserve(antec.size());
        for (const auto& [row, var] : antec) {
            const Partition& p = partitions[static_cast<std::size_t>(var)];
            const double raw = ds.series(static_cast<std::size_t>(var))
                                   .samples[t0 + static_cast<std::size_t>(row)];
            rule.antecedents.push_back(fuzzify(raw, p));
            // clamp_to(raw) is the defuzzified value of the triple, exactly
            rule.antecedent_reals.push_back(clamp_to(p, raw));
        }
        const double raw_out =
            ds.series(static_cast<std::size_t>(out_var))
                .samples[t0 + static_cast<std::size_t>(mask.depth) - 1];
        rule.consequent = fuzzify(raw_out, out_part);
        rule.consequent_real = clamp_to(out_part, raw_out);
        prb.rules.push_back(std::move(rule));
    }
    return prb;
}

double mask_quality(const PatternRuleBase& prb) {
    if (prb.rules.empty())
        throw std::invalid_argument("mask_quality: empty rule base");

    // antecedent class tuple -> consequent class histogram; std::map keeps
    // the accumulation order deterministic
    std::map<std::vector<int>, std::map<int, std::size_t>> table;
    for (const auto& rule : prb.rules) {
        std::vector<int> key;
        key.reserve(rule.antecedents.size());
        for (const auto& q : rule.antecedents)
            key.push_back(q.class_idx);
        ++table[key][rule.consequent.class_idx];
    }

    const double nd = static_cast<double>(prb.rules.size());
    double h_mean = 0.0;
    for (const auto& [key, hist] : table) {
        std::size_t count = 0;
        for (const auto& [cls, c] : hist)
            count += c;
        double h = 0.0;
        for (const auto& [cls, c] : hist) {
            const double q = static_cast<double>(c) / static_cast<double>(count);
            if (q > 0.0)
                h -= q * std::log(q);
        }
        h_mean += (static_cast<double>(count) / nd) * h;
    }
    const double h_max = std::log(static_cast<double>(prb.output_partition().n_classes()));
    const double quality = 1.0 - h_mean / h_max;
    return std::clamp(quality, 0.0, 1.0);
}

MaskSearchResult best_mask(const Dataset& ds, const std::vector<Partition>& partitions,
                           const MaskTemplate& tmpl, int max_inputs, int jobs) {
    const std::vector<Mask> masks = enumerate_masks(tmpl, max_inputs);

    std::vector<double> qualities(masks.size());
    parallel_for(masks.size(), jobs, [&](std::size_t i) {
        qualities[i] = mask_quality(apply_mask(masks[i], ds, partitions));
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < masks.size(); ++i) {
        if (qualities[i] > qualities[best] ||
            (qualities[i] == qualities[best] &&
             masks[i].n_antec() < masks[best].n_antec()))
            best = i;
    }

    MaskSearchResult result;
    result.mask = masks[best];
    result.rules = apply_mask(masks[best], ds, partitions);
    result.quality = qualities[best];
    return result;
}

} // namespace carfir
