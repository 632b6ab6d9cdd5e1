// Acceptance suite: runs every release criterion at its pinned tolerance and
// prints one PASS/FAIL line per criterion. Exits nonzero if any fail.
//
// Criterion 12 shells out to the CLI binary; its path comes from the
// CARFIR_CLI environment variable (set by CTest) and the checks are skipped
// with a FAIL if it is missing.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "carfir/dataset.hpp"
#include "carfir/evaluation.hpp"
#include "carfir/fir_forecast.hpp"
#include "carfir/fuzzifier.hpp"
#include "carfir/identification.hpp"
#include "carfir/mixed.hpp"
#include "carfir/rng.hpp"
#include "carfir/serialization.hpp"
#include "carfir/sugeno.hpp"

using namespace carfir;

namespace {

int failures = 0;

/// Wall-clock guard for criteria with stated runtime bounds.
class Stopwatch {
public:
    explicit Stopwatch(double budget_seconds) : budget_(budget_seconds) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }
    bool within_budget() const { return seconds() < budget_; }

private:
    double budget_;
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void report(int criterion, const std::string& name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << criterion << ": " << name;
    if (!detail.empty())
        std::cout << " (" << detail << ")";
    std::cout << std::endl;
    if (!ok)
        ++failures;
}

Partition unit_partition(int classes) {
    std::vector<double> lm(static_cast<std::size_t>(classes) + 1);
    for (int i = 0; i <= classes; ++i)
        lm[static_cast<std::size_t>(i)] = double(i) / classes;
    return make_partition(lm);
}

Partition random_partition(Rng& rng, int classes) {
    std::vector<double> lm{0.0};
    for (int i = 1; i < classes; ++i)
        lm.push_back(rng.uniform(0.05, 0.95));
    lm.push_back(1.0);
    std::sort(lm.begin(), lm.end());
    for (std::size_t i = 1; i < lm.size(); ++i)
        lm[i] = std::max(lm[i], lm[i - 1] + 0.02);
    const double scale = lm.back();
    for (auto& v : lm)
        v /= scale;
    return make_partition(lm);
}

SugenoRuleBase random_grid(Rng& rng, int classes) {
    SugenoRuleBase srb;
    srb.partitions = {random_partition(rng, classes), random_partition(rng, classes)};
    srb.weights.resize(srb.shape().size());
    for (auto& w : srb.weights)
        w = rng.uniform01();
    return srb;
}

PatternRuleBase samples_prb(const std::vector<Partition>& parts,
                            const std::vector<std::vector<double>>& xs,
                            const std::vector<double>& ys) {
    PatternRuleBase prb;
    const int m = static_cast<int>(parts.size());
    prb.mask.depth = 2;
    prb.mask.n_vars = m + 1;
    prb.mask.cells.assign(static_cast<std::size_t>(2 * (m + 1)), 0);
    for (int j = 0; j < m; ++j)
        prb.mask.cells[static_cast<std::size_t>(j)] = -j - 1;
    prb.mask.cells.back() = 1;
    prb.partitions = parts;
    prb.partitions.push_back(unit_partition(5));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        PatternRule r;
        for (int j = 0; j < m; ++j) {
            const Partition& p = parts[static_cast<std::size_t>(j)];
            r.antecedents.push_back(fuzzify(xs[i][static_cast<std::size_t>(j)], p));
            r.antecedent_reals.push_back(clamp_to(p, xs[i][static_cast<std::size_t>(j)]));
        }
        r.consequent = fuzzify(std::clamp(ys[i], 0.0, 1.0), prb.partitions.back());
        r.consequent_real = ys[i];
        prb.rules.push_back(std::move(r));
    }
    return prb;
}

// ------------------------------------------------------------------------

void criterion_1_structure() {
    const Stopwatch watch(1.0);
    bool ok = true;
    std::string detail;

    Rng rng(101);
    std::vector<std::vector<double>> xs;
    std::vector<double> ys;
    for (int i = 0; i < 1000; ++i) {
        xs.push_back({rng.uniform01(), rng.uniform01()});
        ys.push_back(rng.uniform01());
    }
    const std::vector<Partition> nine{unit_partition(9), unit_partition(9)};
    const SugenoRuleBase srb = init_rule_grid(samples_prb(nine, xs, ys));
    if (srb.n_rules() != 81) {
        ok = false;
        detail = "sugeno rules = " + std::to_string(srb.n_rules());
    }

    Dataset ds;
    std::vector<double> u(7277), y(7277);
    for (std::size_t i = 0; i < 7277; ++i) {
        u[i] = rng.uniform01();
        y[i] = rng.uniform01();
    }
    ds.inputs.push_back(TimeSeries{"u", u, 1.0});
    ds.output = TimeSeries{"y", y, 1.0};
    const PatternRuleBase prb =
        apply_mask(parse_mask("-1 0 / 0 -2 / 0 +1"), ds, nine);
    if (prb.rules.size() != 7275) {
        ok = false;
        detail = "pattern rules = " + std::to_string(prb.rules.size());
    }
    if (!watch.within_budget()) {
        ok = false;
        detail = "exceeded 1 s";
    }
    report(1, "81 Sugeno rules from 9x9, 7275 pattern rules from 7277 samples", ok, detail);
}

void criterion_2_inference_oracle() {
    Rng rng(102);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const SugenoRuleBase srb = random_grid(rng, 3);
        const double x[] = {rng.uniform01(), rng.uniform01()};

        // independent direct summation over all rules
        const GridShape shape = srb.shape();
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < srb.n_rules(); ++i) {
            const auto idx = shape.multi(i);
            double mu = 1.0;
            for (std::size_t j = 0; j < idx.size(); ++j) {
                const Partition& p = srb.partitions[j];
                const double xj = clamp_to(p, x[j]);
                const QualitativeValue q = fuzzify(xj, p);
                int neighbor = -1;
                if (q.side == Side::Left && q.class_idx > 0)
                    neighbor = q.class_idx - 1;
                if (q.side == Side::Right && q.class_idx < p.n_classes() - 1)
                    neighbor = q.class_idx + 1;
                if (idx[j] == q.class_idx || idx[j] == neighbor)
                    mu *= class_membership(p, idx[j], xj);
                else
                    mu = 0.0;
            }
            num += mu * srb.weights[i];
            den += mu;
        }
        worst = std::max(worst, std::abs(sugeno_infer(x, srb) - num / den));
    }
    report(2, "sugeno_infer equals direct summation on 1000 cases", worst <= 1e-12,
           "max |diff| = " + format_double(worst));
}

void criterion_3_gradient_check() {
    Rng rng(103);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int classes = trial % 2 == 0 ? 3 : 9;
        SugenoRuleBase srb = random_grid(rng, classes);
        std::vector<std::vector<double>> xs;
        std::vector<double> ys;
        const int n = classes == 3 ? 30 : 200;
        for (int i = 0; i < n; ++i) {
            xs.push_back({rng.uniform01(), rng.uniform01()});
            ys.push_back(rng.uniform01());
        }
        const PatternRuleBase prb = samples_prb(srb.partitions, xs, ys);
        const std::vector<double> grad = cost_gradient(srb, prb);
        const double h = 1e-6;
        for (std::size_t i = 0; i < srb.weights.size(); ++i) {
            SugenoRuleBase plus = srb, minus = srb;
            plus.weights[i] += h;
            minus.weights[i] -= h;
            const double fd = (cost(plus, prb) - cost(minus, prb)) / (2.0 * h);
            const double rel =
                std::abs(grad[i] - fd) / std::max({1.0, std::abs(grad[i]), std::abs(fd)});
            worst = std::max(worst, rel);
        }
    }
    report(3, "analytic gradient matches central differences (100 trials)", worst < 1e-6,
           "max rel err = " + format_double(worst));
}

void criterion_4_tuning_convergence() {
    const Stopwatch watch(10.0);
    Rng rng(104);
    SugenoRuleBase truth;
    truth.partitions = {unit_partition(9), unit_partition(9)};
    truth.weights.resize(81);
    for (auto& w : truth.weights)
        w = rng.uniform01();

    std::vector<std::vector<double>> xs;
    std::vector<double> ys;
    for (int i = 0; i < 2000; ++i) {
        xs.push_back({rng.uniform01(), rng.uniform01()});
        ys.push_back(sugeno_infer(xs.back(), truth));
    }
    const PatternRuleBase prb = samples_prb(truth.partitions, xs, ys);

    SugenoRuleBase start;
    start.partitions = truth.partitions;
    start.weights.assign(81, 0.5);
    const SugenoRuleBase tuned = tune_weights(std::move(start), prb, 0.1, 50);

    bool nonincreasing = true;
    for (std::size_t i = 1; i < tuned.epoch_history.size(); ++i)
        if (tuned.epoch_history[i] > tuned.epoch_history[i - 1])
            nonincreasing = false;
    const double initial = tuned.epoch_history.front();
    const double final_cost = tuned.epoch_history.back();
    report(4, "50-epoch tuning: nonincreasing cost, final < initial/10",
           nonincreasing && final_cost < initial / 10.0 && watch.within_budget(),
           "cost " + format_double(initial) + " -> " + format_double(final_cost) + " in " +
               format_double(watch.seconds()) + " s");
}

void criterion_5_fmix_contract() {
    bool ok = true;
    std::string detail;
    for (int i = 0; i <= 10; ++i)
        if (f_mix(0.001 * i) != 1.0) {
            ok = false;
            detail = "f(d<=0.01) != 1";
        }
    for (int i = 250; i <= 500; ++i)
        if (f_mix(0.001 * i) != 0.0) {
            ok = false;
            detail = "f(d>=0.25) != 0";
        }
    double prev = f_mix(0.0);
    for (int i = 1; i <= 500; ++i) {
        const double f = f_mix(0.001 * i);
        if (f > prev) {
            ok = false;
            detail = "not nonincreasing at d=" + format_double(0.001 * i);
        }
        prev = f;
    }
    if (std::abs(f_mix(0.01 + 1e-12) - 1.0) >= 1e-9 ||
        std::abs(f_mix(0.25 - 1e-12)) >= 1e-9) {
        ok = false;
        detail = "discontinuity at a breakpoint";
    }
    report(5, "f_mix boundary values, monotonicity and continuity", ok, detail);
}

void criterion_6_mixed_endpoints() {
    Rng rng(106);
    const SugenoRuleBase srb = random_grid(rng, 3);
    std::vector<std::vector<double>> xs;
    std::vector<double> ys;
    for (int i = 0; i < 100; ++i) {
        xs.push_back({rng.uniform01(), rng.uniform01()});
        ys.push_back(rng.uniform01());
    }
    const PatternRuleBase prb = samples_prb(srb.partitions, xs, ys);
    const ErrorModel em = build_error_model(ErrorKind::G2, prb, srb);
    const MixedModel mm = make_mixed_model(prb, srb, select_retained_rules(em, prb, 50.0));
    const MixedModel empty = make_mixed_model(prb, srb, {});

    bool ok = true;
    for (const auto& r : mm.retained)
        if (mixed_infer(r.antecedents, mm) != r.consequent)
            ok = false;
    for (int i = 0; i < 100; ++i) {
        const double x[] = {rng.uniform01(), rng.uniform01()};
        if (mixed_infer(x, empty) != sugeno_infer(x, srb))
            ok = false;
    }
    report(6, "mixed endpoints: retained hit exact, empty set pure Sugeno", ok);
}

void criterion_7_roundtrip() {
    Rng rng(107);
    bool ok = true;
    std::string detail;
    for (int classes : {3, 5, 7, 9}) {
        std::vector<double> values(2000);
        for (auto& v : values)
            v = rng.uniform01();
        const Partition p = efp_landmarks(values, classes);

        std::vector<int> counts(static_cast<std::size_t>(classes), 0);
        for (double v : values)
            ++counts[static_cast<std::size_t>(class_of(p, v))];
        const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
        if (*hi - *lo > 1) {
            ok = false;
            detail = "occupancy spread " + std::to_string(*hi - *lo);
        }

        for (int i = 0; i < 10000; ++i) {
            const double x = rng.uniform(p.lo(), p.hi());
            if (std::abs(defuzzify(fuzzify(x, p), p) - x) >= 1e-9) {
                ok = false;
                detail = "roundtrip off at x = " + format_double(x);
            }
        }
    }
    report(7, "fuzzifier roundtrip < 1e-9 and EFP occupancy within 1 (3/5/7/9 classes)", ok,
           detail);
}

void criterion_8_retention_laws() {
    Rng rng(108);
    const SugenoRuleBase srb = random_grid(rng, 3);
    std::vector<std::vector<double>> xs;
    std::vector<double> ys;
    for (int i = 0; i < 200; ++i) {
        xs.push_back({rng.uniform01(), rng.uniform01()});
        ys.push_back(rng.uniform01());
    }
    const PatternRuleBase prb = samples_prb(srb.partitions, xs, ys);
    const ErrorModel em = build_error_model(ErrorKind::G2, prb, srb);

    bool ok = true;
    std::string detail;

    // ranking vs brute-force recomputation
    std::vector<double> sse(srb.n_rules(), 0.0);
    std::vector<std::size_t> count(srb.n_rules(), 0);
    for (const auto& rule : prb.rules) {
        const double d = sugeno_infer(rule.antecedent_reals, srb) - rule.consequent_real;
        const std::size_t cell = region_of(rule.antecedent_reals, srb);
        sse[cell] += d * d;
        ++count[cell];
    }
    std::vector<std::size_t> expected;
    for (std::size_t c = 0; c < sse.size(); ++c)
        if (count[c])
            expected.push_back(c);
    std::stable_sort(expected.begin(), expected.end(), [&](std::size_t a, std::size_t b) {
        const double ma = sse[a] / double(count[a]), mb = sse[b] / double(count[b]);
        if (ma != mb)
            return ma > mb;
        return a < b;
    });
    if (em.ranking != expected) {
        ok = false;
        detail = "ranking differs from brute force";
    }

    std::vector<std::size_t> previous;
    for (double p : {0.0, 10.0, 25.0, 40.0, 55.0, 70.0, 85.0, 100.0}) {
        const auto kept = select_retained_rules(em, prb, p);
        const auto target =
            static_cast<std::size_t>(std::ceil(p / 100.0 * double(prb.rules.size())));
        if (kept.size() < target) {
            ok = false;
            detail = "below ceil target at " + format_double(p) + "%";
        }
        std::vector<std::size_t> current;
        for (const auto& r : kept)
            current.push_back(r.original_index);
        std::sort(current.begin(), current.end());
        if (!std::includes(current.begin(), current.end(), previous.begin(), previous.end())) {
            ok = false;
            detail = "monotonicity broken at " + format_double(p) + "%";
        }
        previous = std::move(current);
    }
    report(8, "retention laws on a 200-rule base vs brute force", ok, detail);
}

// shared benchmark pipeline for criteria 9 and 10
struct Benchmark {
    PatternRuleBase prb;
    SugenoRuleBase srb;
    std::vector<Dataset> tests;
    std::vector<SeriesRange> norms;

    explicit Benchmark(const SynthSpec& spec, int classes) {
        const Dataset ds = synth_generate(spec);
        const std::size_t train_end = 2999;
        const Dataset train_raw = split(ds, {0, train_end}, {}).train;
        norms = norm_params(train_raw);
        const Dataset norm = normalize(ds, norms);
        const Split parts =
            split(norm, {0, train_end}, {{3000, 3299}, {3300, 3599}});
        std::vector<Partition> partitions;
        for (std::size_t v = 0; v < norm.n_vars(); ++v)
            partitions.push_back(efp_landmarks(parts.train.series(v).samples, classes));
        prb = apply_mask(parse_mask("-1 -2 / 0 +1"), parts.train, partitions);
        srb = tune_weights(init_rule_grid(prb), prb, 0.1, 50);
        tests = parts.tests;
    }
};

void criterion_9_recovery_curve() {
    const Stopwatch watch(60.0);
    SynthSpec spec;
    spec.length = 3600;
    spec.seed = 5;
    spec.ar_coeff = 0.6;
    spec.map_gain = 0.4;
    spec.map_steepness = 30.0;
    spec.hold_min = 3;
    spec.hold_max = 12;
    spec.noise_amplitude = 0.01;
    spec.window = NoiseWindow{0.38, 0.62, 0.0, 1.0};
    const Benchmark bench(spec, 9);

    SweepConfig cfg;
    cfg.percents = {0, 10, 20, 30, 40, 60};
    cfg.seed = spec.seed;
    cfg.config_digest = digest("criterion-9");
    const SweepResult sr = run_sweep(bench.prb, bench.srb, bench.tests, cfg);

    bool ok = true;
    std::string detail;
    const double jitter = 0.2;
    for (const auto& row : sr.rows) {
        for (std::size_t i = 0; i < row.mse.size(); ++i) {
            if (sr.fir_baseline > row.mse[i] + jitter) {
                ok = false;
                detail = std::string(to_string(row.kind)) + " below FIR floor at " +
                         format_double(sr.percents[i]) + "%";
            }
            if (row.mse[i] > sr.fis_baseline + jitter) {
                ok = false;
                detail = std::string(to_string(row.kind)) + " above FIS ceiling at " +
                         format_double(sr.percents[i]) + "%";
            }
            if (i > 0 && row.mse[i] > row.mse[i - 1] + jitter) {
                ok = false;
                detail = std::string(to_string(row.kind)) + " curve rises at " +
                         format_double(sr.percents[i]) + "%";
            }
        }
    }
    if (!watch.within_budget()) {
        ok = false;
        detail = "exceeded 60 s";
    }
    std::ostringstream summary;
    summary << "FIR " << format_double(sr.fir_baseline) << "%, FIS "
            << format_double(sr.fis_baseline) << "%, " << format_double(watch.seconds())
            << " s";
    report(9, "recovery curves stay between the baselines and fall with retention", ok,
           detail.empty() ? summary.str() : detail);
}

void criterion_10_error_model_discrimination() {
    SynthSpec spec;
    spec.length = 3600;
    spec.seed = 13;
    spec.noise_amplitude = 0.1;
    spec.window = NoiseWindow{0.55, 0.9, 0.5, 0.8};
    const Benchmark bench(spec, 9);

    const ErrorModel em = build_error_model(ErrorKind::G2, bench.prb, bench.srb);
    const GridShape shape = bench.srb.shape();

    double sum_in = 0.0, sum_out = 0.0;
    std::size_t n_in = 0, n_out = 0;
    for (std::size_t cell : em.ranking) {
        const auto idx = shape.multi(cell);
        // cell center back in raw signal units
        const double u = denormalize(
            bench.srb.partitions[0].centers[static_cast<std::size_t>(idx[0])],
            bench.norms[0]);
        const double y = denormalize(
            bench.srb.partitions[1].centers[static_cast<std::size_t>(idx[1])],
            bench.norms[1]);
        if (spec.window.contains(u, y)) {
            sum_in += em.regions[cell].mean;
            ++n_in;
        } else {
            sum_out += em.regions[cell].mean;
            ++n_out;
        }
    }
    const double mean_in = n_in ? sum_in / double(n_in) : 0.0;
    const double mean_out = n_out ? sum_out / double(n_out) : 0.0;
    report(10, "G2 region errors discriminate the noise window",
           n_in > 0 && n_out > 0 && mean_in > mean_out,
           "inside " + format_double(mean_in) + " vs outside " + format_double(mean_out));
}

void criterion_11_mse_identities() {
    Rng rng(111);
    std::vector<double> y(64);
    for (auto& v : y)
        v = rng.uniform01();
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / double(y.size());
    const std::vector<double> at_mean(y.size(), mean);
    const bool ok = mse_percent(y, y) == 0.0 && mse_percent(y, at_mean) == 100.0;
    report(11, "MSE% identities: exact 0% and exact 100%", ok);
}

// ------------------------------------------------------------ criterion 12

namespace fs = std::filesystem;

int run_cli(const std::string& cli, const std::string& args, const fs::path& cwd) {
    const std::string cmd = "cd " + cwd.string() + " && " + cli + " " + args + " > cli.log 2>&1";
    return std::system(cmd.c_str());
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_12_cli_determinism() {
    const char* cli_env = std::getenv("CARFIR_CLI");
    if (!cli_env || !fs::exists(cli_env)) {
        report(12, "CLI determinism", false, "CARFIR_CLI not set");
        return;
    }
    const std::string cli = fs::absolute(cli_env).string();

    const fs::path base = fs::temp_directory_path() / "carfir_acceptance";
    std::error_code ec;
    fs::remove_all(base, ec);
    const fs::path runs[2] = {base / "a", base / "b"};

    const std::vector<std::string> steps = {
        "gen --out data.csv --length 1500 --seed 42 --noise 0.05 --window 0.5,0.9,0.4,0.9",
        "partition --data data.csv --train 0:1199 --classes 9 --out partitions.json",
        "identify --data data.csv --partitions partitions.json --train 0:1199 --depth 2 "
        "--max-inputs 2 --out mask.txt",
        "extract --data data.csv --partitions partitions.json --mask mask.txt --train 0:1199 "
        "--epochs 50 --rate 0.1 --out sugeno.json --prb-out prb.json",
        "errors --data data.csv --partitions partitions.json --mask mask.txt --train 0:1199 "
        "--sugeno sugeno.json --out errors.json --mixed-out mixed.json --kind G2 --retain 30",
        "sweep --data data.csv --partitions partitions.json --mask mask.txt --train 0:1199 "
        "--tests 1200:1349,1350:1499 --percents 0,20,60 --seed 42 --jobs 2 "
        "--report report.tsv --curves curves.csv",
        "predict --data data.csv --partitions partitions.json --scheme mixed --mixed mixed.json "
        "--test 1200:1499 --out pred.csv",
    };
    const std::vector<std::string> artifacts = {
        "data.csv",   "partitions.json", "mask.txt",   "sugeno.json", "prb.json",
        "errors.json", "mixed.json",     "report.tsv", "curves.csv",  "pred.csv",
    };

    bool ok = true;
    std::string detail;
    for (const auto& run : runs) {
        fs::create_directories(run);
        for (const auto& step : steps)
            if (run_cli(cli, step, run) != 0) {
                ok = false;
                detail = "step failed: " + step.substr(0, step.find(' '));
            }
    }
    if (ok) {
        for (const auto& artifact : artifacts) {
            if (slurp(runs[0] / artifact) != slurp(runs[1] / artifact)) {
                ok = false;
                detail = artifact + " differs between identical runs";
            }
            if (fs::file_size(runs[0] / artifact) == 0) {
                ok = false;
                detail = artifact + " is empty";
            }
        }
    }
    fs::remove_all(base, ec);
    report(12, "every CLI subcommand is bit-reproducible", ok, detail);
}

} // namespace

int main() {
    criterion_1_structure();
    criterion_2_inference_oracle();
    criterion_3_gradient_check();
    criterion_4_tuning_convergence();
    criterion_5_fmix_contract();
    criterion_6_mixed_endpoints();
    criterion_7_roundtrip();
    criterion_8_retention_laws();
    criterion_9_recovery_curve();
    criterion_10_error_model_discrimination();
    criterion_11_mse_identities();
    criterion_12_cli_determinism();

    if (failures) {
        std::cout << failures << " criterion(s) failed" << std::endl;
        return 1;
    }
    std::cout << "all 12 criteria passed" << std::endl;
    return 0;
}
