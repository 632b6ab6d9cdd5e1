#ifndef CARFIR_DATASET_HPP
#define CARFIR_DATASET_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace carfir {

/// One named signal. `dt` is metadata only (sampling interval in seconds).
struct TimeSeries {
    std::string name;
    std::vector<double> samples;
    double dt = 1.0;
};

/// Recorded (min, max) of a series at normalization time, kept for the
/// inverse mapping.
struct SeriesRange {
    double min = 0.0;
    double max = 1.0;
};

/// A multivariate signal set: zero-based variable index runs over the
/// inputs in order, with the output always last.
struct Dataset {
    std::vector<TimeSeries> inputs;
    TimeSeries output;
    std::vector<SeriesRange> normalization; // per variable; empty if raw

    std::size_t n_samples() const { return output.samples.size(); }
    std::size_t n_vars() const { return inputs.size() + 1; }
    bool normalized() const { return !normalization.empty(); }

    const TimeSeries& series(std::size_t var) const {
        return var < inputs.size() ? inputs[var] : output;
    }
    TimeSeries& series(std::size_t var) {
        return var < inputs.size() ? inputs[var] : output;
    }
};

/// Columns to extract from a CSV file; the last name is the output
/// variable, the rest are inputs (kept in file column order).
struct CsvSchema {
    std::vector<std::string> columns;
};

/// Parses a comma-delimited, header-bearing table. A column named "t" or
/// "time", when present and not part of the schema, sets `dt` from its
/// first increment. Throws std::runtime_error naming the offending data
/// row / column on missing columns, ragged rows, or non-finite cells.
Dataset load_csv(std::istream& source, const CsvSchema& schema);
Dataset load_csv_file(const std::string& path, const CsvSchema& schema);

/// Per-series (min, max) over the dataset's samples.
std::vector<SeriesRange> norm_params(const Dataset& ds);

/// Min-max normalization x -> (x - min) / (max - min); the params used are
/// recorded on the returned dataset. Throws on zero-range series. When
/// `params` come from other data (the training slice), results may leave
/// [0, 1]; downstream fuzzification clamps.
Dataset normalize(const Dataset& ds, const std::vector<SeriesRange>& params);
Dataset normalize(const Dataset& ds);

double denormalize(double x, const SeriesRange& r);
std::vector<double> denormalize(const std::vector<double>& xs, const SeriesRange& r);

/// Inclusive index range.
struct IndexRange {
    std::size_t first = 0;
    std::size_t last = 0;
};

struct Split {
    Dataset train;
    std::vector<Dataset> tests;
};

/// Contiguous slices; sample values are copied bit-exactly and the parent's
/// normalization record is inherited. Ranges must be in bounds and pairwise
/// disjoint.
Split split(const Dataset& ds, const IndexRange& train,
            const std::vector<IndexRange>& tests);

} // namespace carfir

#endif
