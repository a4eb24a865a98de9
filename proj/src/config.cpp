#include "goskills/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace goskills {

using ordered_json = nlohmann::ordered_json;

std::optional<Ablation> ablation_from_string(const std::string& name) {
    Ablation a;
    if (name.empty() || name == "none") return a;
    if (name == "no_backfill") {
        a.no_backfill = true;
    } else if (name == "no_group_graph") {
        a.no_group_graph = true;
    } else if (name == "no_anchor_selection") {
        a.no_anchor_selection = true;
    } else if (name == "no_group_expansion") {
        a.no_group_expansion = true;
    } else if (name == "retrieved_skills_only") {
        a.retrieved_skills_only = true;
    } else {
        return std::nullopt;
    }
    return a;
}

std::string ablation_name(const Ablation& a) {
    if (a.retrieved_skills_only) return "retrieved_skills_only";
    if (a.no_group_expansion) return "no_group_expansion";
    if (a.no_anchor_selection) return "no_anchor_selection";
    if (a.no_group_graph) return "no_group_graph";
    if (a.no_backfill) return "no_backfill";
    return "none";
}

Config Config::with_ablation(const std::string& name) const {
    auto a = ablation_from_string(name);
    if (!a) throw std::runtime_error("unknown ablation variant: " + name);
    Config out = *this;
    out.ablation.no_backfill |= a->no_backfill;
    out.ablation.no_group_graph |= a->no_group_graph;
    out.ablation.no_anchor_selection |= a->no_anchor_selection;
    out.ablation.no_group_expansion |= a->no_group_expansion;
    out.ablation.retrieved_skills_only |= a->retrieved_skills_only;
    return out;
}

namespace {

void read_stage(const ordered_json& row, StageWeights& w) {
    if (!row.is_array() || row.size() != 8) {
        throw std::runtime_error("stage weights must be an 8-element array");
    }
    w.relevance = row[0].get<double>();
    w.facet = row[1].get<double>();
    w.anchor = row[2].get<double>();
    w.check = row[3].get<double>();
    w.connectivity = row[4].get<double>();
    w.redundancy = row[5].get<double>();
    w.negative = row[6].get<double>();
    w.cost = row[7].get<double>();
}

ordered_json stage_json(const StageWeights& w) {
    auto a = w.as_array();
    return ordered_json(a);
}

}  // namespace

Config parse_config(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("malformed config JSON: ") + e.what());
    }
    Config c;
    if (j.contains("weights")) {
        const auto& w = j.at("weights");
        if (w.contains("grp")) read_stage(w.at("grp"), c.weights.grp);
        if (w.contains("sup")) read_stage(w.at("sup"), c.weights.sup);
        if (w.contains("bot")) read_stage(w.at("bot"), c.weights.bot);
    }
    auto num = [&](const char* key, double& slot) {
        if (j.contains(key)) slot = j.at(key).get<double>();
    };
    auto num_in = [&](const ordered_json& o, const char* key, auto& slot) {
        if (o.contains(key)) slot = o.at(key).get<std::decay_t<decltype(slot)>>();
    };
    num("lambda_prior", c.weights.lambda_prior);
    num("lambda_anchor", c.weights.lambda_anchor);
    num("delta_grp", c.weights.delta_grp);
    num("delta_sup", c.weights.delta_sup);
    num("delta_bot", c.weights.delta_bot);
    if (j.contains("budgets")) {
        const auto& b = j.at("budgets");
        num_in(b, "top_n", c.budgets.top_n);
        num_in(b, "seed_k", c.budgets.seed_k);
        num_in(b, "payload_cap", c.budgets.payload_cap);
        num_in(b, "context_cap", c.budgets.context_cap);
        num_in(b, "group_cap", c.budgets.group_cap);
        num_in(b, "group_size_cap", c.budgets.group_size_cap);
        num_in(b, "backfill_cap", c.budgets.backfill_cap);
        num_in(b, "pool_cap", c.budgets.pool_cap);
        num_in(b, "posting_cap", c.budgets.posting_cap);
        num_in(b, "affinity_threshold", c.budgets.affinity_threshold);
    }
    if (j.contains("ablation")) {
        c = c.with_ablation(j.at("ablation").get<std::string>());
    }
    if (j.contains("gate_mode")) {
        auto m = gate_mode_from_string(j.at("gate_mode").get<std::string>());
        if (!m) throw std::runtime_error("unknown gate mode in config");
        c.gate_mode = *m;
    }
    return c;
}

Config load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_provenance_json(const Config& config) {
    ordered_json j;
    j["weights"]["grp"] = stage_json(config.weights.grp);
    j["weights"]["sup"] = stage_json(config.weights.sup);
    j["weights"]["bot"] = stage_json(config.weights.bot);
    j["lambda_prior"] = config.weights.lambda_prior;
    j["lambda_anchor"] = config.weights.lambda_anchor;
    j["delta_grp"] = config.weights.delta_grp;
    j["delta_sup"] = config.weights.delta_sup;
    j["delta_bot"] = config.weights.delta_bot;
    j["budgets"]["top_n"] = config.budgets.top_n;
    j["budgets"]["seed_k"] = config.budgets.seed_k;
    j["budgets"]["payload_cap"] = config.budgets.payload_cap;
    j["budgets"]["context_cap"] = config.budgets.context_cap;
    j["budgets"]["group_cap"] = config.budgets.group_cap;
    j["budgets"]["group_size_cap"] = config.budgets.group_size_cap;
    j["budgets"]["backfill_cap"] = config.budgets.backfill_cap;
    j["budgets"]["pool_cap"] = config.budgets.pool_cap;
    j["budgets"]["posting_cap"] = config.budgets.posting_cap;
    j["budgets"]["affinity_threshold"] = config.budgets.affinity_threshold;
    j["ablation"] = ablation_name(config.ablation);
    j["gate_mode"] = to_string(config.gate_mode);
    return j.dump();
}

}  // namespace goskills
