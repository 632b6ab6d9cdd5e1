#include "carfir/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "carfir/parallel.hpp"
#include "carfir/rng.hpp"

namespace carfir {

double mse_percent(std::span<const double> y, std::span<const double> yhat) {
    if (y.size() != yhat.size())
        throw std::invalid_argument("mse_percent: length mismatch");
    if (y.size() < 2)
        throw std::invalid_argument("mse_percent: need at least 2 samples");
    const double n = static_cast<double>(y.size());

    double mean = 0.0;
    for (double v : y)
        mean += v;
    mean /= n;

    double var = 0.0;
    for (double v : y) {
        const double d = v - mean;
        var += d * d;
    }
    var /= n;
    if (!(var > 0.0))
        throw std::runtime_error("mse_percent: output variance is zero");

    double num = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = y[i] - yhat[i];
        num += d * d;
    }
    num /= n;

    return num / var * 100.0;
}

double mse_percent(const TimeSeries& y, const TimeSeries& yhat) {
    return mse_percent(std::span<const double>(y.samples),
                       std::span<const double>(yhat.samples));
}

namespace {

double logistic(double u, double steepness) {
    return 1.0 / (1.0 + std::exp(-steepness * (u - 0.5)));
}

void check_synth_spec(const SynthSpec& spec) {
    if (spec.length < 2)
        throw std::invalid_argument("synth_generate: length must be >= 2");
    if (spec.input_delay < 1)
        throw std::invalid_argument("synth_generate: input delay must be >= 1");
    if (spec.noise_amplitude < 0.0)
        throw std::invalid_argument("synth_generate: noise amplitude must be >= 0");
    if (spec.ar_coeff < 0.0 || spec.ar_coeff >= 1.0)
        throw std::invalid_argument("synth_generate: ar coefficient must be in [0, 1)");
    if (spec.hold_min < 1 || spec.hold_max < spec.hold_min)
        throw std::invalid_argument("synth_generate: bad hold range");
    const auto& w = spec.window;
    if (!(w.u_lo <= w.u_hi && w.y_lo <= w.y_hi) || w.u_lo < 0.0 || w.u_hi > 1.0 ||
        w.y_lo < 0.0 || w.y_hi > 1.0)
        throw std::invalid_argument("synth_generate: noise window must lie within [0,1]^2");
}

std::vector<double> excitation(const SynthSpec& spec, Rng& rng) {
    std::vector<double> u;
    u.reserve(spec.length);
    if (spec.input_levels > 0) {
        // fixed levels visited through seeded permutations; with a fixed
        // hold and a length divisible by levels*hold every level occurs
        // equally often, which EFP relies on for exact class alignment
        const int L = spec.input_levels;
        std::vector<int> order(static_cast<std::size_t>(L));
        std::iota(order.begin(), order.end(), 0);
        while (u.size() < spec.length) {
            for (std::size_t i = order.size(); i > 1; --i)
                std::swap(order[i - 1],
                          order[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
            for (int lvl : order)
                for (int h = 0; h < spec.hold_min && u.size() < spec.length; ++h)
                    u.push_back((lvl + 0.5) / static_cast<double>(L));
        }
    } else {
        while (u.size() < spec.length) {
            const double level = rng.uniform01();
            const auto hold = static_cast<std::size_t>(
                rng.uniform_int(spec.hold_min, spec.hold_max));
            for (std::size_t h = 0; h < hold && u.size() < spec.length; ++h)
                u.push_back(level);
        }
    }
    return u;
}

} // namespace

Dataset synth_generate(const SynthSpec& spec) {
    check_synth_spec(spec);
    Rng rng(spec.seed);
    std::vector<double> u = excitation(spec, rng);

    const auto wrap = [&](std::ptrdiff_t i) {
        const auto n = static_cast<std::ptrdiff_t>(spec.length);
        return u[static_cast<std::size_t>(((i % n) + n) % n)];
    };

    std::vector<double> y(spec.length);
    y[0] = spec.map_gain * logistic(wrap(-spec.input_delay), spec.map_steepness) /
           (1.0 - spec.ar_coeff);
    for (std::size_t t = 1; t < spec.length; ++t) {
        const double u_lag = wrap(static_cast<std::ptrdiff_t>(t) - spec.input_delay);
        double value = spec.ar_coeff * y[t - 1] +
                       spec.map_gain * logistic(u_lag, spec.map_steepness);
        if (spec.noise_amplitude > 0.0 && spec.window.contains(u_lag, y[t - 1]))
            value += spec.noise_amplitude * (2.0 * rng.uniform01() - 1.0);
        y[t] = value;
    }

    Dataset ds;
    ds.inputs.push_back(TimeSeries{"u", std::move(u), spec.dt});
    ds.output = TimeSeries{"y", std::move(y), spec.dt};
    return ds;
}

namespace {

/// MSE% of a closed-loop forecast over its predicted segment (seed samples
/// excluded).
double forecast_mse(const TimeSeries& truth, const TimeSeries& forecast, int depth) {
    const std::size_t from = static_cast<std::size_t>(depth) - 1;
    return mse_percent(
        std::span<const double>(truth.samples).subspan(from, forecast.samples.size() - from),
        std::span<const double>(forecast.samples).subspan(from));
}

} // namespace

SweepResult run_sweep(const PatternRuleBase& prb, const SugenoRuleBase& srb,
                      const std::vector<Dataset>& tests, const SweepConfig& config) {
    if (tests.empty())
        throw std::invalid_argument("run_sweep: no test sets");
    for (double p : config.percents)
        if (p < 0.0 || p > 100.0)
            throw std::invalid_argument("run_sweep: percents must be in [0, 100]");

    SweepResult sr;
    sr.percents = config.percents;
    sr.seed = config.seed;
    sr.config_digest = config.config_digest;

    const int depth = prb.mask.depth;

    std::vector<ErrorModel> models(config.kinds.size());
    parallel_for(config.kinds.size(), config.jobs, [&](std::size_t i) {
        models[i] = build_error_model(config.kinds[i], prb, srb, config.k);
    });

    // baselines
    {
        double fir = 0.0, fis = 0.0;
        const MixedModel pure_fis = make_mixed_model(prb, srb, {}, config.fmix);
        for (const auto& test : tests) {
            fir += forecast_mse(test.output, fir_forecast(prb, test, -1, config.k), depth);
            fis += forecast_mse(test.output, mixed_forecast(pure_fis, test, -1), depth);
        }
        sr.fir_baseline = fir / static_cast<double>(tests.size());
        sr.fis_baseline = fis / static_cast<double>(tests.size());
    }

    sr.rows.resize(config.kinds.size());
    const std::size_t cells = config.kinds.size() * config.percents.size();
    std::vector<double> cell_mse(cells, 0.0);
    parallel_for(cells, config.jobs, [&](std::size_t c) {
        const std::size_t ki = c / config.percents.size();
        const std::size_t pi = c % config.percents.size();
        auto retained = select_retained_rules(models[ki], prb, config.percents[pi]);
        const MixedModel mm = make_mixed_model(prb, srb, std::move(retained), config.fmix);
        double total = 0.0;
        for (const auto& test : tests)
            total += forecast_mse(test.output, mixed_forecast(mm, test, -1), depth);
        cell_mse[c] = total / static_cast<double>(tests.size());
    });

    for (std::size_t ki = 0; ki < config.kinds.size(); ++ki) {
        sr.rows[ki].kind = config.kinds[ki];
        sr.rows[ki].mse.assign(cell_mse.begin() + static_cast<std::ptrdiff_t>(ki * config.percents.size()),
                               cell_mse.begin() + static_cast<std::ptrdiff_t>((ki + 1) * config.percents.size()));
    }
    return sr;
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{})
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, ptr);
}

std::string digest(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    static const char* hex = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = hex[h & 0xf];
        h >>= 4;
    }
    buf[16] = '\0';
    return std::string(buf);
}

void emit_report(const SweepResult& sr, std::ostream& sink) {
    sink << "# carfir sweep report\n";
    sink << "# config " << (sr.config_digest.empty() ? "-" : sr.config_digest) << " seed "
         << sr.seed << "\n";
    sink << "Mixed";
    for (double p : sr.percents)
        sink << '\t' << format_double(p) << '%';
    sink << '\n';
    if (!sr.percents.empty()) {
        for (const auto& row : sr.rows) {
            sink << to_string(row.kind);
            for (double v : row.mse)
                sink << '\t' << format_double(v);
            sink << '\n';
        }
    }
    sink << "FIR\t" << format_double(sr.fir_baseline) << "\tFIS\t"
         << format_double(sr.fis_baseline) << '\n';
}

namespace {

double parse_double(std::string_view text, const char* what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw std::runtime_error(std::string("parse_report: bad ") + what + " '" +
                                 std::string(text) + "'");
    return v;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, '\t'))
        out.push_back(field);
    return out;
}

} // namespace

SweepResult parse_report(std::istream& source) {
    SweepResult sr;
    std::string line;
    bool saw_header = false, saw_baselines = false;
    while (std::getline(source, line)) {
        if (line.empty())
            continue;
        if (line[0] == '#') {
            std::stringstream ss(line);
            std::string hash, word;
            ss >> hash >> word;
            if (word == "config") {
                std::string digest_word, seed_label;
                std::uint64_t seed = 0;
                ss >> digest_word >> seed_label >> seed;
                sr.config_digest = digest_word == "-" ? std::string{} : digest_word;
                sr.seed = seed;
            }
            continue;
        }
        const auto fields = split_tabs(line);
        if (fields.front() == "Mixed") {
            for (std::size_t i = 1; i < fields.size(); ++i) {
                std::string p = fields[i];
                if (!p.empty() && p.back() == '%')
                    p.pop_back();
                sr.percents.push_back(parse_double(p, "percent"));
            }
            saw_header = true;
        } else if (fields.front() == "FIR") {
            if (fields.size() != 4 || fields[2] != "FIS")
                throw std::runtime_error("parse_report: malformed baseline row");
            sr.fir_baseline = parse_double(fields[1], "FIR baseline");
            sr.fis_baseline = parse_double(fields[3], "FIS baseline");
            saw_baselines = true;
        } else {
            SweepRow row;
            row.kind = error_kind_from_string(fields.front());
            for (std::size_t i = 1; i < fields.size(); ++i)
                row.mse.push_back(parse_double(fields[i], "value"));
            sr.rows.push_back(std::move(row));
        }
    }
    if (!saw_header || !saw_baselines)
        throw std::runtime_error("parse_report: missing header or baseline row");
    return sr;
}

void emit_curves(const SweepResult& sr, std::ostream& sink) {
    sink << "percent";
    for (const auto& row : sr.rows)
        sink << ',' << to_string(row.kind);
    sink << '\n';
    for (std::size_t pi = 0; pi < sr.percents.size(); ++pi) {
        sink << format_double(sr.percents[pi]);
        for (const auto& row : sr.rows)
            sink << ',' << format_double(row.mse[pi]);
        sink << '\n';
    }
}

} // namespace carfir
