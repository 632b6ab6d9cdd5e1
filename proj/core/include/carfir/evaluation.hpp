#ifndef CARFIR_EVALUATION_HPP
#define CARFIR_EVALUATION_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "carfir/dataset.hpp"
#include "carfir/mixed.hpp"

namespace carfir {

/// Normalized mean square error in percent:
/// mean((y - yhat)^2) / var(y) * 100, population variance.
double mse_percent(std::span<const double> y, std::span<const double> yhat);
double mse_percent(const TimeSeries& y, const TimeSeries& yhat);

/// Antecedent-space box (raw signal units) where heteroscedastic noise
/// applies, axes (u(t - delay), y(t - 1)).
struct NoiseWindow {
    double u_lo = 0.6, u_hi = 0.9;
    double y_lo = 0.6, y_hi = 0.9;

    bool contains(double u, double y) const {
        return u >= u_lo && u <= u_hi && y >= y_lo && y <= y_hi;
    }
};

/// Synthetic SISO benchmark: y(t) = ar * y(t-1) + gain * s(u(t-delay)),
/// s a logistic curve, driven by a randomly held piecewise-constant input.
/// Uniform noise of the given amplitude is added only where
/// (u(t-delay), y(t-1)) falls inside the window, producing a locally thick
/// pattern surface. With input_levels > 0 the excitation cycles through
/// seeded permutations of that many fixed levels instead (hold_min steps
/// each), which makes the map exactly class-deterministic at zero noise.
struct SynthSpec {
    std::size_t length = 3000;
    std::uint64_t seed = 1;
    int input_delay = 1;
    double ar_coeff = 0.4;
    double map_gain = 0.5;
    double map_steepness = 8.0;
    int input_levels = 0;
    int hold_min = 5;
    int hold_max = 30;
    double noise_amplitude = 0.0;
    NoiseWindow window;
    double dt = 0.12;
};

Dataset synth_generate(const SynthSpec& spec);

struct SweepConfig {
    std::vector<double> percents{0, 10, 20, 30, 40, 60, 100};
    std::vector<ErrorKind> kinds{ErrorKind::G1, ErrorKind::G2, ErrorKind::G3};
    int k = 5;
    FmixParams fmix;
    int jobs = 1;
    std::uint64_t seed = 0;     // metadata only
    std::string config_digest;  // metadata only
};

struct SweepRow {
    ErrorKind kind = ErrorKind::G1;
    std::vector<double> mse; // aligned with SweepResult::percents
};

struct SweepResult {
    std::vector<double> percents;
    std::vector<SweepRow> rows;
    double fir_baseline = 0.0; // k-NN pattern scheme over the full base
    double fis_baseline = 0.0; // pure Sugeno scheme
    std::uint64_t seed = 0;
    std::string config_digest;
};

/// For every (error model, retention percent) builds the mixed model,
/// closed-loop forecasts every test set, and averages the MSE%. The
/// percent-0 row coincides bit-exactly with the FIS baseline.
SweepResult run_sweep(const PatternRuleBase& prb, const SugenoRuleBase& srb,
                      const std::vector<Dataset>& tests, const SweepConfig& config);

/// Tab-separated table: one row per error model, one column per percent,
/// baselines and config digest included. Values round-trip exactly.
void emit_report(const SweepResult& sr, std::ostream& sink);
SweepResult parse_report(std::istream& source);

/// Plottable long-format CSV: percent, one MSE% column per error model.
void emit_curves(const SweepResult& sr, std::ostream& sink);

/// FNV-1a 64 hex digest, used to stamp reports with their configuration.
std::string digest(std::string_view text);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

} // namespace carfir

#endif
