#include "carfir/serialization.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace carfir {

using nlohmann::json;

namespace {

json partition_to_json(const Partition& p) {
    return json{{"landmarks", p.landmarks}, {"centers", p.centers}};
}

Partition partition_from_json(const json& j) {
    return make_partition(j.at("landmarks").get<std::vector<double>>(),
                          j.at("centers").get<std::vector<double>>());
}

json qv_to_json(const QualitativeValue& q) {
    const char* side = q.side == Side::Left ? "left" : q.side == Side::Right ? "right" : "center";
    return json{{"class", q.class_idx}, {"membership", q.membership}, {"side", side}};
}

QualitativeValue qv_from_json(const json& j) {
    const std::string side = j.at("side").get<std::string>();
    QualitativeValue q;
    q.class_idx = j.at("class").get<int>();
    q.membership = j.at("membership").get<double>();
    q.side = side == "left" ? Side::Left : side == "right" ? Side::Right : Side::Center;
    return q;
}

json parse_stream(std::istream& source, const char* what) {
    try {
        return json::parse(source);
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string(what) + ": malformed JSON: " + e.what());
    }
}

} // namespace

void save_variables(const std::vector<VariableModel>& vars, std::ostream& sink) {
    json arr = json::array();
    for (const auto& v : vars) {
        json j = partition_to_json(v.partition);
        j["name"] = v.name;
        j["role"] = v.is_output ? "output" : "input";
        j["min"] = v.norm.min;
        j["max"] = v.norm.max;
        arr.push_back(std::move(j));
    }
    sink << json{{"variables", arr}}.dump(2) << '\n';
}

std::vector<VariableModel> load_variables(std::istream& source) {
    const json root = parse_stream(source, "load_variables");
    std::vector<VariableModel> vars;
    for (const auto& j : root.at("variables")) {
        VariableModel v;
        v.name = j.at("name").get<std::string>();
        v.is_output = j.at("role").get<std::string>() == "output";
        v.norm = SeriesRange{j.at("min").get<double>(), j.at("max").get<double>()};
        v.partition = partition_from_json(j);
        vars.push_back(std::move(v));
    }
    if (vars.empty())
        throw std::runtime_error("load_variables: no variables");
    return vars;
}

void save_pattern_rules(const PatternRuleBase& prb, std::ostream& sink) {
    json rules = json::array();
    for (const auto& r : prb.rules) {
        json antecedents = json::array();
        for (const auto& q : r.antecedents)
            antecedents.push_back(qv_to_json(q));
        rules.push_back(json{{"antecedents", antecedents},
                             {"antecedent_reals", r.antecedent_reals},
                             {"consequent", qv_to_json(r.consequent)},
                             {"consequent_real", r.consequent_real}});
    }
    json partitions = json::array();
    for (const auto& p : prb.partitions)
        partitions.push_back(partition_to_json(p));
    sink << json{{"mask", format_mask(prb.mask)},
                 {"partitions", partitions},
                 {"rules", rules}}
                .dump()
         << '\n';
}

PatternRuleBase load_pattern_rules(std::istream& source) {
    const json root = parse_stream(source, "load_pattern_rules");
    PatternRuleBase prb;
    prb.mask = parse_mask(root.at("mask").get<std::string>());
    for (const auto& j : root.at("partitions"))
        prb.partitions.push_back(partition_from_json(j));
    for (const auto& j : root.at("rules")) {
        PatternRule r;
        for (const auto& q : j.at("antecedents"))
            r.antecedents.push_back(qv_from_json(q));
        r.antecedent_reals = j.at("antecedent_reals").get<std::vector<double>>();
        r.consequent = qv_from_json(j.at("consequent"));
        r.consequent_real = j.at("consequent_real").get<double>();
        prb.rules.push_back(std::move(r));
    }
    return prb;
}

namespace {

json sugeno_to_json(const SugenoRuleBase& srb) {
    json partitions = json::array();
    for (const auto& p : srb.partitions)
        partitions.push_back(partition_to_json(p));
    return json{{"partitions", partitions},
                {"shape", srb.shape().dims},
                {"weights", srb.weights},
                {"epoch_history", srb.epoch_history}};
}

SugenoRuleBase sugeno_from_json(const json& root) {
    SugenoRuleBase srb;
    for (const auto& j : root.at("partitions"))
        srb.partitions.push_back(partition_from_json(j));
    srb.weights = root.at("weights").get<std::vector<double>>();
    srb.epoch_history = root.at("epoch_history").get<std::vector<double>>();
    const auto dims = root.at("shape").get<std::vector<int>>();
    if (dims != srb.shape().dims)
        throw std::runtime_error("load_sugeno: shape does not match partitions");
    if (srb.weights.size() != srb.shape().size())
        throw std::runtime_error("load_sugeno: weight count does not match shape");
    return srb;
}

} // namespace

void save_sugeno(const SugenoRuleBase& srb, std::ostream& sink) {
    sink << sugeno_to_json(srb).dump(2) << '\n';
}

SugenoRuleBase load_sugeno(std::istream& source) {
    return sugeno_from_json(parse_stream(source, "load_sugeno"));
}

void save_error_models(const std::vector<ErrorModel>& models, std::ostream& sink) {
    json arr = json::array();
    for (const auto& em : models) {
        json regions = json::array();
        for (const auto& r : em.regions)
            regions.push_back(json{{"sse", r.sse}, {"count", r.count}, {"mean", r.mean}});
        arr.push_back(json{{"kind", to_string(em.kind)},
                           {"regions", regions},
                           {"ranking", em.ranking},
                           {"rule_cells", em.rule_cells}});
    }
    sink << json{{"error_models", arr}}.dump() << '\n';
}

std::vector<ErrorModel> load_error_models(std::istream& source) {
    const json root = parse_stream(source, "load_error_models");
    std::vector<ErrorModel> models;
    for (const auto& j : root.at("error_models")) {
        ErrorModel em;
        em.kind = error_kind_from_string(j.at("kind").get<std::string>());
        for (const auto& r : j.at("regions")) {
            RegionStats s;
            s.sse = r.at("sse").get<double>();
            s.count = r.at("count").get<std::size_t>();
            s.mean = r.at("mean").get<double>();
            em.regions.push_back(s);
        }
        em.ranking = j.at("ranking").get<std::vector<std::size_t>>();
        em.rule_cells = j.at("rule_cells").get<std::vector<std::size_t>>();
        models.push_back(std::move(em));
    }
    return models;
}

void save_mixed(const MixedModel& mm, std::ostream& sink) {
    json retained = json::array();
    for (const auto& r : mm.retained)
        retained.push_back(json{{"antecedents", r.antecedents},
                                {"consequent", r.consequent},
                                {"cell", r.cell},
                                {"index", r.original_index}});
    sink << json{{"sugeno", sugeno_to_json(mm.srb)},
                 {"retained", retained},
                 {"fmix", json{{"d_low", mm.fmix.d_low}, {"d_high", mm.fmix.d_high}}},
                 {"mask", format_mask(mm.mask)}}
                .dump()
         << '\n';
}

MixedModel load_mixed(std::istream& source) {
    const json root = parse_stream(source, "load_mixed");
    MixedModel mm;
    mm.srb = sugeno_from_json(root.at("sugeno"));
    for (const auto& j : root.at("retained")) {
        RetainedRule r;
        r.antecedents = j.at("antecedents").get<std::vector<double>>();
        r.consequent = j.at("consequent").get<double>();
        r.cell = j.at("cell").get<std::size_t>();
        r.original_index = j.at("index").get<std::size_t>();
        mm.retained.push_back(std::move(r));
    }
    mm.fmix.d_low = root.at("fmix").at("d_low").get<double>();
    mm.fmix.d_high = root.at("fmix").at("d_high").get<double>();
    mm.mask = parse_mask(root.at("mask").get<std::string>());
    return mm;
}

void save_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    out << contents;
    if (!out)
        throw std::runtime_error("write failed for '" + path + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace carfir
