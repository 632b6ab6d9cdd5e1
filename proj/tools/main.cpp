// carfir command line: gen | partition | identify | extract | errors |
// sweep | predict. Every subcommand is deterministic given the same inputs
// and seeds.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "carfir/dataset.hpp"
#include "carfir/evaluation.hpp"
#include "carfir/fir_forecast.hpp"
#include "carfir/fuzzifier.hpp"
#include "carfir/identification.hpp"
#include "carfir/mixed.hpp"
#include "carfir/serialization.hpp"
#include "carfir/sugeno.hpp"

namespace {

using namespace carfir;

IndexRange parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("range '" + text + "' is not of the form first:last");
    IndexRange r;
    r.first = std::stoull(text.substr(0, colon));
    r.last = std::stoull(text.substr(colon + 1));
    return r;
}

std::vector<IndexRange> parse_ranges(const std::string& text) {
    std::vector<IndexRange> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(parse_range(item));
    return out;
}

std::vector<double> parse_percents(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(std::stod(item));
    return out;
}

std::vector<ErrorKind> parse_kinds(const std::string& text) {
    std::vector<ErrorKind> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(error_kind_from_string(item));
    return out;
}

// --config FILE holds `key = value` lines matching the long option names;
// explicit command-line flags win. Applied by expanding the argument list
// before CLI11 sees it.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size();) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                       args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            ++i;
        }
    }
    if (path.empty())
        return args;

    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file '" + path + "'");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#' || line[start] == ';')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config file '" + path + "' line " +
                                     std::to_string(line_no) + ": expected key=value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error("config file '" + path + "' line " +
                                     std::to_string(line_no) + ": empty key");
        const std::string flag = "--" + key;
        bool already = false;
        for (const auto& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0)
                already = true;
        if (!already) {
            args.push_back(flag);
            args.push_back(value);
        }
    }
    return args;
}

NoiseWindow parse_window(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        v.push_back(std::stod(item));
    if (v.size() != 4)
        throw std::invalid_argument("window must be u_lo,u_hi,y_lo,y_hi");
    return NoiseWindow{v[0], v[1], v[2], v[3]};
}

void write_csv(const std::string& path, const Dataset& ds) {
    std::ostringstream out;
    out << 't';
    for (const auto& in : ds.inputs)
        out << ',' << in.name;
    out << ',' << ds.output.name << '\n';
    for (std::size_t i = 0; i < ds.n_samples(); ++i) {
        out << format_double(static_cast<double>(i) * ds.output.dt);
        for (const auto& in : ds.inputs)
            out << ',' << format_double(in.samples[i]);
        out << ',' << format_double(ds.output.samples[i]) << '\n';
    }
    save_file(path, out.str());
}

struct DataOptions {
    std::string data_path;
    std::vector<std::string> inputs{"u"};
    std::string output = "y";

    void attach(CLI::App* cmd) {
        cmd->add_option("--data", data_path, "input CSV file")->required();
        cmd->add_option("--inputs", inputs, "input column names");
        cmd->add_option("--output", output, "output column name");
    }

    Dataset load() const {
        CsvSchema schema;
        schema.columns = inputs;
        schema.columns.push_back(output);
        return load_csv_file(data_path, schema);
    }
};

struct Workspace {
    Dataset raw;
    Dataset normalized;
    std::vector<VariableModel> vars;
    std::vector<Partition> partitions;
};

Workspace open_workspace(const DataOptions& data, const std::string& partitions_path) {
    Workspace ws;
    ws.raw = data.load();
    std::ifstream in(partitions_path);
    if (!in)
        throw std::runtime_error("cannot open '" + partitions_path + "'");
    ws.vars = load_variables(in);
    if (ws.vars.size() != ws.raw.n_vars())
        throw std::runtime_error("partitions file covers " + std::to_string(ws.vars.size()) +
                                 " variables, data has " + std::to_string(ws.raw.n_vars()));
    std::vector<SeriesRange> norms;
    for (const auto& v : ws.vars) {
        norms.push_back(v.norm);
        ws.partitions.push_back(v.partition);
    }
    ws.normalized = normalize(ws.raw, norms);
    return ws;
}

Mask default_mask(int delta) {
    // u(t-delta) and y(t-1) predicting y(t)
    if (delta < 1)
        throw std::invalid_argument("--delta must be >= 1");
    Mask m;
    m.depth = delta + 1;
    m.n_vars = 2;
    m.cells.assign(static_cast<std::size_t>(m.depth) * 2, 0);
    m.cells[0] = -1;                                               // u(t-delta)
    m.cells[static_cast<std::size_t>((m.depth - 2) * 2 + 1)] = -2; // y(t-1)
    m.cells[static_cast<std::size_t>((m.depth - 1) * 2 + 1)] = 1;  // y(t)
    m.validate();
    return m;
}

Mask resolve_mask(const std::string& mask_path, const std::string& mask_text, int delta) {
    if (!mask_text.empty())
        return parse_mask(mask_text);
    if (!mask_path.empty()) {
        const std::string contents = read_file(mask_path);
        std::stringstream ss(contents);
        std::string line;
        while (std::getline(ss, line))
            if (!line.empty() && line[0] != '#')
                return parse_mask(line);
        throw std::runtime_error("no mask line in '" + mask_path + "'");
    }
    return default_mask(delta);
}

std::string describe(const SweepConfig& cfg, const SynthSpec* synth) {
    std::ostringstream s;
    s << "k=" << cfg.k << ";fmix=" << cfg.fmix.d_low << ',' << cfg.fmix.d_high << ";percents=";
    for (double p : cfg.percents)
        s << p << ',';
    s << ";kinds=";
    for (auto k : cfg.kinds)
        s << to_string(k) << ',';
    if (synth)
        s << ";seed=" << synth->seed << ";len=" << synth->length;
    return s.str();
}

// ---------------------------------------------------------------- gen ----

int cmd_gen(const SynthSpec& spec, const std::string& window_text, const std::string& out) {
    SynthSpec s = spec;
    if (!window_text.empty())
        s.window = parse_window(window_text);
    write_csv(out, synth_generate(s));
    std::cout << "wrote " << out << " (" << s.length << " samples, seed " << s.seed << ")\n";
    return 0;
}

// ----------------------------------------------------------- partition ----

int cmd_partition(const DataOptions& data, const std::string& train_text, int classes,
                  const std::string& out) {
    const Dataset raw = data.load();
    const IndexRange train =
        train_text.empty() ? IndexRange{0, raw.n_samples() - 1} : parse_range(train_text);
    const Dataset train_raw = split(raw, train, {}).train;
    const std::vector<SeriesRange> norms = norm_params(train_raw);
    const Dataset train_norm = normalize(train_raw, norms);

    std::vector<VariableModel> vars;
    for (std::size_t v = 0; v < train_norm.n_vars(); ++v) {
        VariableModel vm;
        vm.name = train_norm.series(v).name;
        vm.is_output = v == train_norm.n_vars() - 1;
        vm.norm = norms[v];
        vm.partition = efp_landmarks(train_norm.series(v).samples, classes);
        vars.push_back(std::move(vm));
    }
    std::ostringstream sink;
    save_variables(vars, sink);
    save_file(out, sink.str());
    std::cout << "wrote " << out << " (" << classes << " classes per variable)\n";
    return 0;
}

// ------------------------------------------------------------ identify ----

int cmd_identify(const DataOptions& data, const std::string& partitions_path,
                 const std::string& train_text, int depth, int max_inputs, int jobs,
                 const std::string& out) {
    const Workspace ws = open_workspace(data, partitions_path);
    const IndexRange train =
        train_text.empty() ? IndexRange{0, ws.raw.n_samples() - 1} : parse_range(train_text);
    const Dataset train_ds = split(ws.normalized, train, {}).train;

    MaskTemplate tmpl;
    tmpl.depth = depth;
    tmpl.n_vars = static_cast<int>(ws.raw.n_vars());
    tmpl.cells.assign(static_cast<std::size_t>(depth) * ws.raw.n_vars(), -1);
    const int out_var = tmpl.n_vars - 1;
    for (int v = 0; v < tmpl.n_vars; ++v)
        if (v == out_var)
            tmpl.cells[static_cast<std::size_t>((depth - 1) * tmpl.n_vars + v)] = 1;

    const MaskSearchResult result = best_mask(train_ds, ws.partitions, tmpl, max_inputs, jobs);
    const std::string text = format_mask(result.mask);
    save_file(out, text + "\n");
    std::cout << "mask: " << text << "\n";
    std::cout << "quality: " << format_double(result.quality) << "\n";
    std::cout << "rules: " << result.rules.rules.size() << "\n";
    return 0;
}

// ------------------------------------------------------------- extract ----

int cmd_extract(const DataOptions& data, const std::string& partitions_path,
                const std::string& mask_path, const std::string& mask_text, int delta,
                const std::string& train_text, double rate, int epochs,
                const std::string& out, const std::string& prb_out) {
    const Workspace ws = open_workspace(data, partitions_path);
    const IndexRange train =
        train_text.empty() ? IndexRange{0, ws.raw.n_samples() - 1} : parse_range(train_text);
    const Dataset train_ds = split(ws.normalized, train, {}).train;
    const Mask mask = resolve_mask(mask_path, mask_text, delta);

    const PatternRuleBase prb = apply_mask(mask, train_ds, ws.partitions);
    SugenoRuleBase srb = tune_weights(init_rule_grid(prb), prb, rate, epochs);

    std::ostringstream sink;
    save_sugeno(srb, sink);
    save_file(out, sink.str());
    std::cout << "wrote " << out << " (" << srb.n_rules() << " rules, cost "
              << format_double(srb.epoch_history.front()) << " -> "
              << format_double(srb.epoch_history.back()) << ")\n";

    if (!prb_out.empty()) {
        std::ostringstream psink;
        save_pattern_rules(prb, psink);
        save_file(prb_out, psink.str());
        std::cout << "wrote " << prb_out << " (" << prb.rules.size() << " pattern rules)\n";
    }
    return 0;
}

// -------------------------------------------------------------- errors ----

int cmd_errors(const DataOptions& data, const std::string& partitions_path,
               const std::string& mask_path, const std::string& mask_text, int delta,
               const std::string& train_text, const std::string& sugeno_path, int k,
               const std::string& out, const std::string& mixed_out,
               const std::string& kind_text, double retain) {
    const Workspace ws = open_workspace(data, partitions_path);
    const IndexRange train =
        train_text.empty() ? IndexRange{0, ws.raw.n_samples() - 1} : parse_range(train_text);
    const Dataset train_ds = split(ws.normalized, train, {}).train;
    const Mask mask = resolve_mask(mask_path, mask_text, delta);
    const PatternRuleBase prb = apply_mask(mask, train_ds, ws.partitions);

    std::ifstream sin(sugeno_path);
    if (!sin)
        throw std::runtime_error("cannot open '" + sugeno_path + "'");
    const SugenoRuleBase srb = load_sugeno(sin);

    std::vector<ErrorModel> models;
    for (ErrorKind kind : {ErrorKind::G1, ErrorKind::G2, ErrorKind::G3})
        models.push_back(build_error_model(kind, prb, srb, k));

    std::ostringstream sink;
    save_error_models(models, sink);
    save_file(out, sink.str());
    std::cout << "wrote " << out << " (G1, G2, G3 over " << srb.n_rules() << " regions)\n";

    if (!mixed_out.empty()) {
        const ErrorKind kind = error_kind_from_string(kind_text);
        const ErrorModel& em = models[static_cast<std::size_t>(kind)];
        auto retained = select_retained_rules(em, prb, retain);
        const MixedModel mm = make_mixed_model(prb, srb, std::move(retained));
        std::ostringstream msink;
        save_mixed(mm, msink);
        save_file(mixed_out, msink.str());
        std::cout << "wrote " << mixed_out << " (" << mm.retained.size() << "/"
                  << prb.rules.size() << " rules retained, " << kind_text << " @ "
                  << format_double(retain) << "%)\n";
    }
    return 0;
}

// --------------------------------------------------------------- sweep ----

int cmd_sweep(const DataOptions& data, const std::string& partitions_path,
              const std::string& mask_path, const std::string& mask_text, int delta,
              const std::string& train_text, const std::string& tests_text,
              const std::string& percents_text, const std::string& kinds_text, double rate,
              int epochs, int k, int jobs, std::uint64_t seed, const std::string& report_path,
              const std::string& curves_path) {
    const Workspace ws = open_workspace(data, partitions_path);
    const IndexRange train = parse_range(train_text);
    const std::vector<IndexRange> test_ranges = parse_ranges(tests_text);
    if (test_ranges.empty())
        throw std::invalid_argument("sweep: --tests names no ranges");
    const Split parts = split(ws.normalized, train, test_ranges);
    const Mask mask = resolve_mask(mask_path, mask_text, delta);

    const PatternRuleBase prb = apply_mask(mask, parts.train, ws.partitions);
    const SugenoRuleBase srb = tune_weights(init_rule_grid(prb), prb, rate, epochs);

    SweepConfig cfg;
    cfg.percents = parse_percents(percents_text);
    cfg.kinds = parse_kinds(kinds_text);
    cfg.k = k;
    cfg.jobs = jobs;
    cfg.seed = seed;
    std::ostringstream desc;
    desc << describe(cfg, nullptr) << ";mask=" << format_mask(mask) << ";train=" << train.first
         << ':' << train.last << ";tests=" << tests_text << ";rate=" << rate
         << ";epochs=" << epochs;
    cfg.config_digest = digest(desc.str());

    const SweepResult sr = run_sweep(prb, srb, parts.tests, cfg);

    std::ostringstream table;
    emit_report(sr, table);
    save_file(report_path, table.str());
    std::ostringstream curves;
    emit_curves(sr, curves);
    save_file(curves_path, curves.str());

    std::cout << table.str();
    std::cout << "wrote " << report_path << " and " << curves_path << "\n";
    return 0;
}

// ------------------------------------------------------------- predict ----

int cmd_predict(const DataOptions& data, const std::string& partitions_path,
                const std::string& scheme, const std::string& test_text, int horizon, int k,
                const std::string& prb_path, const std::string& sugeno_path,
                const std::string& mask_path, const std::string& mask_text, int delta,
                const std::string& mixed_path, const std::string& out) {
    const Workspace ws = open_workspace(data, partitions_path);
    const IndexRange range = parse_range(test_text);
    const Dataset test = split(ws.normalized, range, {}).train;

    TimeSeries yhat;
    int depth = 0;
    if (scheme == "pattern") {
        if (prb_path.empty())
            throw std::invalid_argument("predict --scheme pattern needs --prb");
        std::ifstream in(prb_path);
        if (!in)
            throw std::runtime_error("cannot open '" + prb_path + "'");
        const PatternRuleBase prb = load_pattern_rules(in);
        depth = prb.mask.depth;
        yhat = fir_forecast(prb, test, horizon, k);
    } else if (scheme == "sugeno") {
        if (sugeno_path.empty())
            throw std::invalid_argument("predict --scheme sugeno needs --sugeno");
        std::ifstream in(sugeno_path);
        if (!in)
            throw std::runtime_error("cannot open '" + sugeno_path + "'");
        const SugenoRuleBase srb = load_sugeno(in);
        const Mask mask = resolve_mask(mask_path, mask_text, delta);
        depth = mask.depth;
        yhat = closed_loop_forecast(mask, srb.partitions, test, horizon,
                                    [&](std::span<const double> x) {
                                        return sugeno_infer(x, srb);
                                    });
    } else if (scheme == "mixed") {
        if (mixed_path.empty())
            throw std::invalid_argument("predict --scheme mixed needs --mixed");
        std::ifstream in(mixed_path);
        if (!in)
            throw std::runtime_error("cannot open '" + mixed_path + "'");
        const MixedModel mm = load_mixed(in);
        depth = mm.mask.depth;
        yhat = mixed_forecast(mm, test, horizon);
    } else {
        throw std::invalid_argument("unknown scheme '" + scheme +
                                    "' (expected pattern, sugeno or mixed)");
    }

    const SeriesRange out_norm = ws.vars.back().norm;
    std::ostringstream sink;
    sink << "t,y,yhat\n";
    for (std::size_t i = 0; i < yhat.samples.size(); ++i) {
        const double t = static_cast<double>(range.first + i) * yhat.dt;
        sink << format_double(t) << ','
             << format_double(denormalize(test.output.samples[i], out_norm)) << ','
             << format_double(denormalize(yhat.samples[i], out_norm)) << '\n';
    }
    save_file(out, sink.str());

    const std::size_t from = static_cast<std::size_t>(depth) - 1;
    const double err = mse_percent(
        std::span<const double>(test.output.samples).subspan(from, yhat.samples.size() - from),
        std::span<const double>(yhat.samples).subspan(from));
    std::cout << "wrote " << out << " (" << yhat.samples.size() - from << " predicted samples)\n";
    std::cout << "mse%: " << format_double(err) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"CARFIR toolkit: fuzzy inductive reasoning models, Sugeno rule "
                 "extraction and the mixed pattern/fuzzy prediction scheme"};
    app.require_subcommand(1);

    // --config is stripped by expand_config before parsing; the per-command
    // option added at the end only documents it in --help output
    std::string config_doc;

    // gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic SISO benchmark CSV");
    SynthSpec spec;
    std::string gen_out = "data.csv", window_text;
    gen->add_option("--out", gen_out, "output CSV path");
    gen->add_option("--length", spec.length, "number of samples");
    gen->add_option("--seed", spec.seed, "random seed");
    gen->add_option("--delay", spec.input_delay, "input delay (samples)");
    gen->add_option("--ar", spec.ar_coeff, "autoregressive coefficient");
    gen->add_option("--gain", spec.map_gain, "input map gain");
    gen->add_option("--steepness", spec.map_steepness, "input map steepness");
    gen->add_option("--levels", spec.input_levels, "quantized excitation levels (0 = continuous)");
    gen->add_option("--hold-min", spec.hold_min, "minimum input hold (samples)");
    gen->add_option("--hold-max", spec.hold_max, "maximum input hold (samples)");
    gen->add_option("--noise", spec.noise_amplitude, "noise amplitude inside the window");
    gen->add_option("--window", window_text, "noise window u_lo,u_hi,y_lo,y_hi");
    gen->add_option("--dt", spec.dt, "sampling interval metadata");

    // partition
    auto* part = app.add_subcommand("partition", "equal-frequency partitions from training data");
    DataOptions part_data;
    part_data.attach(part);
    std::string part_train, part_out = "partitions.json";
    int part_classes = 9;
    part->add_option("--train", part_train, "training range first:last (default all)");
    part->add_option("--classes", part_classes, "classes per variable");
    part->add_option("--out", part_out, "output JSON path");

    // identify
    auto* ident = app.add_subcommand("identify", "exhaustive mask search on training data");
    DataOptions ident_data;
    ident_data.attach(ident);
    std::string ident_parts = "partitions.json", ident_train, ident_out = "mask.txt";
    int ident_depth = 3, ident_max_inputs = 2, ident_jobs = 1;
    ident->add_option("--partitions", ident_parts, "partitions JSON");
    ident->add_option("--train", ident_train, "training range first:last (default all)");
    ident->add_option("--depth", ident_depth, "mask depth (rows)");
    ident->add_option("--max-inputs", ident_max_inputs, "maximum antecedents");
    ident->add_option("--jobs", ident_jobs, "parallel mask evaluations");
    ident->add_option("--out", ident_out, "output mask path");

    // extract
    auto* extract = app.add_subcommand("extract", "Sugeno rule grid from pattern rules");
    DataOptions extract_data;
    extract_data.attach(extract);
    std::string ex_parts = "partitions.json", ex_mask_path, ex_mask_text, ex_train;
    std::string ex_out = "sugeno.json", ex_prb_out;
    double ex_rate = 0.1;
    int ex_epochs = 50, ex_delta = 1;
    extract->add_option("--partitions", ex_parts, "partitions JSON");
    extract->add_option("--mask", ex_mask_path, "mask file (from identify)");
    extract->add_option("--mask-text", ex_mask_text, "inline mask text");
    extract->add_option("--delta", ex_delta, "input delay of the default mask");
    extract->add_option("--train", ex_train, "training range first:last (default all)");
    extract->add_option("--rate", ex_rate, "gradient descent rate");
    extract->add_option("--epochs", ex_epochs, "tuning epochs");
    extract->add_option("--out", ex_out, "output Sugeno JSON");
    extract->add_option("--prb-out", ex_prb_out, "also export the pattern rule base");

    // errors
    auto* errors = app.add_subcommand("errors", "build the G1/G2/G3 error models");
    DataOptions err_data;
    err_data.attach(errors);
    std::string er_parts = "partitions.json", er_mask_path, er_mask_text, er_train;
    std::string er_sugeno = "sugeno.json", er_out = "errors.json", er_mixed_out, er_kind = "G2";
    int er_k = 5, er_delta = 1;
    double er_retain = 30.0;
    errors->add_option("--partitions", er_parts, "partitions JSON");
    errors->add_option("--mask", er_mask_path, "mask file");
    errors->add_option("--mask-text", er_mask_text, "inline mask text");
    errors->add_option("--delta", er_delta, "input delay of the default mask");
    errors->add_option("--train", er_train, "training range first:last (default all)");
    errors->add_option("--sugeno", er_sugeno, "tuned Sugeno JSON");
    errors->add_option("--k", er_k, "pattern scheme neighbors");
    errors->add_option("--out", er_out, "output error models JSON");
    errors->add_option("--mixed-out", er_mixed_out, "also export a mixed model");
    errors->add_option("--kind", er_kind, "error model for --mixed-out (G1|G2|G3)");
    errors->add_option("--retain", er_retain, "retention percent for --mixed-out");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "accuracy vs rule retention experiment");
    DataOptions sweep_data;
    sweep_data.attach(sweep);
    std::string sw_parts = "partitions.json", sw_mask_path, sw_mask_text;
    std::string sw_train, sw_tests, sw_percents = "0,10,20,30,40,60,100";
    std::string sw_kinds = "G1,G2,G3", sw_report = "report.tsv", sw_curves = "curves.csv";
    double sw_rate = 0.1;
    int sw_epochs = 50, sw_k = 5, sw_jobs = 1, sw_delta = 1;
    std::uint64_t sw_seed = 0;
    sweep->add_option("--partitions", sw_parts, "partitions JSON");
    sweep->add_option("--mask", sw_mask_path, "mask file");
    sweep->add_option("--mask-text", sw_mask_text, "inline mask text");
    sweep->add_option("--delta", sw_delta, "input delay of the default mask");
    sweep->add_option("--train", sw_train, "training range first:last")->required();
    sweep->add_option("--tests", sw_tests, "test ranges a:b,c:d,...")->required();
    sweep->add_option("--percents", sw_percents, "retention percents");
    sweep->add_option("--kinds", sw_kinds, "error models to sweep");
    sweep->add_option("--rate", sw_rate, "gradient descent rate");
    sweep->add_option("--epochs", sw_epochs, "tuning epochs");
    sweep->add_option("--k", sw_k, "pattern scheme neighbors");
    sweep->add_option("--jobs", sw_jobs, "parallel sweep cells");
    sweep->add_option("--seed", sw_seed, "seed recorded in the report");
    sweep->add_option("--report", sw_report, "output table path");
    sweep->add_option("--curves", sw_curves, "output curves CSV path");

    // predict
    auto* predict = app.add_subcommand("predict", "closed-loop forecast of a test range");
    DataOptions pred_data;
    pred_data.attach(predict);
    std::string pr_parts = "partitions.json", pr_scheme = "pattern", pr_test;
    std::string pr_prb, pr_sugeno, pr_mask_path, pr_mask_text, pr_mixed, pr_out = "pred.csv";
    int pr_horizon = -1, pr_k = 5, pr_delta = 1;
    predict->add_option("--partitions", pr_parts, "partitions JSON");
    predict->add_option("--scheme", pr_scheme, "pattern | sugeno | mixed");
    predict->add_option("--test", pr_test, "test range first:last")->required();
    predict->add_option("--horizon", pr_horizon, "predicted samples (-1 = rest of range)");
    predict->add_option("--k", pr_k, "pattern scheme neighbors");
    predict->add_option("--prb", pr_prb, "pattern rule base JSON");
    predict->add_option("--sugeno", pr_sugeno, "Sugeno JSON");
    predict->add_option("--mask", pr_mask_path, "mask file (sugeno scheme)");
    predict->add_option("--mask-text", pr_mask_text, "inline mask text");
    predict->add_option("--delta", pr_delta, "input delay of the default mask");
    predict->add_option("--mixed", pr_mixed, "mixed model JSON");
    predict->add_option("--out", pr_out, "output prediction CSV");

    for (auto* cmd : app.get_subcommands({}))
        cmd->add_option("--config", config_doc,
                        "key=value config file; explicit flags override");

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = expand_config(std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (gen->parsed())
            return cmd_gen(spec, window_text, gen_out);
        if (part->parsed())
            return cmd_partition(part_data, part_train, part_classes, part_out);
        if (ident->parsed())
            return cmd_identify(ident_data, ident_parts, ident_train, ident_depth,
                                ident_max_inputs, ident_jobs, ident_out);
        if (extract->parsed())
            return cmd_extract(extract_data, ex_parts, ex_mask_path, ex_mask_text, ex_delta,
                               ex_train, ex_rate, ex_epochs, ex_out, ex_prb_out);
        if (errors->parsed())
            return cmd_errors(err_data, er_parts, er_mask_path, er_mask_text, er_delta,
                              er_train, er_sugeno, er_k, er_out, er_mixed_out, er_kind,
                              er_retain);
        if (sweep->parsed())
            return cmd_sweep(sweep_data, sw_parts, sw_mask_path, sw_mask_text, sw_delta,
                             sw_train, sw_tests, sw_percents, sw_kinds, sw_rate, sw_epochs,
                             sw_k, sw_jobs, sw_seed, sw_report, sw_curves);
        if (predict->parsed())
            return cmd_predict(pred_data, pr_parts, pr_scheme, pr_test, pr_horizon, pr_k,
                               pr_prb, pr_sugeno, pr_mask_path, pr_mask_text, pr_delta,
                               pr_mixed, pr_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
