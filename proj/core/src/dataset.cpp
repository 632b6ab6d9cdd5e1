#include "carfir/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace carfir {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim surrounding whitespace
        auto b = field.find_first_not_of(" \t\r");
        auto e = field.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string{} : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

double parse_cell(const std::string& text, std::size_t row, const std::string& column) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw std::runtime_error("load_csv: row " + std::to_string(row) + ", column '" +
                                 column + "': not a number: '" + text + "'");
    if (!std::isfinite(value))
        throw std::runtime_error("load_csv: row " + std::to_string(row) + ", column '" +
                                 column + "': non-finite value");
    return value;
}

} // namespace

Dataset load_csv(std::istream& source, const CsvSchema& schema) {
    if (schema.columns.empty())
        throw std::invalid_argument("load_csv: schema names no columns");

    std::string line;
    if (!std::getline(source, line))
        throw std::runtime_error("load_csv: empty input, no header row");
    const std::vector<std::string> header = split_fields(line);

    // map schema names to file column indices
    std::vector<std::size_t> col_of(schema.columns.size());
    for (std::size_t i = 0; i < schema.columns.size(); ++i) {
        for (std::size_t j = i + 1; j < schema.columns.size(); ++j)
            if (schema.columns[i] == schema.columns[j])
                throw std::invalid_argument("load_csv: column '" + schema.columns[i] +
                                            "' named twice in the schema");
        auto it = std::find(header.begin(), header.end(), schema.columns[i]);
        if (it == header.end())
            throw std::runtime_error("load_csv: column '" + schema.columns[i] +
                                     "' not found in header");
        col_of[i] = static_cast<std::size_t>(it - header.begin());
    }

    // optional time column, not named by the schema, drives dt metadata
    std::ptrdiff_t time_col = -1;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if ((header[c] == "t" || header[c] == "time") &&
            std::find(schema.columns.begin(), schema.columns.end(), header[c]) ==
                schema.columns.end()) {
            time_col = static_cast<std::ptrdiff_t>(c);
            break;
        }
    }

    std::vector<std::vector<double>> values(schema.columns.size());
    std::vector<double> times;
    std::size_t row = 0;
    while (std::getline(source, line)) {
        if (line.empty())
            continue;
        ++row;
        const auto fields = split_fields(line);
        if (fields.size() != header.size())
            throw std::runtime_error("load_csv: row " + std::to_string(row) + ": expected " +
                                     std::to_string(header.size()) + " fields, got " +
                                     std::to_string(fields.size()));
        for (std::size_t i = 0; i < col_of.size(); ++i)
            values[i].push_back(parse_cell(fields[col_of[i]], row, schema.columns[i]));
        if (time_col >= 0)
            times.push_back(parse_cell(fields[static_cast<std::size_t>(time_col)], row,
                                       header[static_cast<std::size_t>(time_col)]));
    }
    if (row == 0)
        throw std::runtime_error("load_csv: no data rows");

    const double dt = times.size() >= 2 ? times[1] - times[0] : 1.0;

    // inputs keep file column order; the schema's last name is the output
    const std::size_t out_schema_idx = schema.columns.size() - 1;
    std::vector<std::size_t> input_order;
    for (std::size_t i = 0; i + 1 < schema.columns.size(); ++i)
        input_order.push_back(i);
    std::sort(input_order.begin(), input_order.end(),
              [&](std::size_t a, std::size_t b) { return col_of[a] < col_of[b]; });

    Dataset ds;
    for (std::size_t i : input_order)
        ds.inputs.push_back(TimeSeries{schema.columns[i], std::move(values[i]), dt});
    ds.output = TimeSeries{schema.columns[out_schema_idx], std::move(values[out_schema_idx]), dt};
    return ds;
}

Dataset load_csv_file(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("load_csv: cannot open '" + path + "'");
    return load_csv(in, schema);
}

std::vector<SeriesRange> norm_params(const Dataset& ds) {
    std::vector<SeriesRange> params;
    params.reserve(ds.n_vars());
    for (std::size_t v = 0; v < ds.n_vars(); ++v) {
        const auto& s = ds.series(v).samples;
        if (s.empty())
            throw std::invalid_argument("norm_params: series '" + ds.series(v).name +
                                        "' is empty");
        const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
        params.push_back(SeriesRange{*lo, *hi});
    }
    return params;
}

Dataset normalize(const Dataset& ds, const std::vector<SeriesRange>& params) {
    if (params.size() != ds.n_vars())
        throw std::invalid_argument("normalize: parameter count does not match variable count");
    Dataset out = ds;
    for (std::size_t v = 0; v < ds.n_vars(); ++v) {
        const SeriesRange r = params[v];
        if (!(r.max > r.min))
            throw std::runtime_error("normalize: series '" + ds.series(v).name +
                                     "' has zero range (min == max)");
        const double span = r.max - r.min;
        for (double& x : out.series(v).samples)
            x = (x - r.min) / span;
    }
    out.normalization = params;
    return out;
}

Dataset normalize(const Dataset& ds) { return normalize(ds, norm_params(ds)); }

double denormalize(double x, const SeriesRange& r) { return x * (r.max - r.min) + r.min; }

std::vector<double> denormalize(const std::vector<double>& xs, const SeriesRange& r) {
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        out[i] = denormalize(xs[i], r);
    return out;
}

namespace {

Dataset slice(const Dataset& ds, const IndexRange& r) {
    Dataset out;
    out.normalization = ds.normalization;
    auto cut = [&](const TimeSeries& s) {
        return TimeSeries{s.name,
                          std::vector<double>(s.samples.begin() + static_cast<std::ptrdiff_t>(r.first),
                                              s.samples.begin() + static_cast<std::ptrdiff_t>(r.last) + 1),
                          s.dt};
    };
    for (const auto& in : ds.inputs)
        out.inputs.push_back(cut(in));
    out.output = cut(ds.output);
    return out;
}

void check_range(const IndexRange& r, std::size_t n, const char* what) {
    if (r.first > r.last)
        throw std::invalid_argument(std::string("split: ") + what + " range is reversed");
    if (r.last >= n)
        throw std::invalid_argument(std::string("split: ") + what + " range [" +
                                    std::to_string(r.first) + ", " + std::to_string(r.last) +
                                    "] exceeds " + std::to_string(n) + " samples");
}

} // namespace

Split split(const Dataset& ds, const IndexRange& train, const std::vector<IndexRange>& tests) {
    const std::size_t n = ds.n_samples();
    for (const auto& in : ds.inputs)
        if (in.samples.size() != n)
            throw std::invalid_argument("split: series lengths differ");

    check_range(train, n, "train");
    for (const auto& t : tests)
        check_range(t, n, "test");

    std::vector<IndexRange> all{train};
    all.insert(all.end(), tests.begin(), tests.end());
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j)
            if (all[i].first <= all[j].last && all[j].first <= all[i].last)
                throw std::invalid_argument("split: ranges [" + std::to_string(all[i].first) +
                                            ", " + std::to_string(all[i].last) + "] and [" +
                                            std::to_string(all[j].first) + ", " +
                                            std::to_string(all[j].last) + "] overlap");

    Split out;
    out.train = slice(ds, train);
    out.tests.reserve(tests.size());
    for (const auto& t : tests)
        out.tests.push_back(slice(ds, t));
    return out;
}

} // namespace carfir
