#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "goskills/bundle.hpp"
#include "goskills/config.hpp"
#include "goskills/gate.hpp"
#include "goskills/pipeline.hpp"

namespace {

using goskills::Config;
using ordered_json = nlohmann::ordered_json;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

Config load_config_opt(const std::string& path) {
    if (path.empty()) return Config{};
    return goskills::load_config(path);
}

int cmd_build_pool(const std::string& library_dir, const std::string& out_path,
                   const std::string& dicts_dir, int threads) {
    goskills::Dictionaries dicts = dicts_dir.empty() ? goskills::default_dictionaries()
                                                     : goskills::load_dictionaries(dicts_dir);
    goskills::Library library = goskills::load_library(library_dir, dicts);
    goskills::BuildOptions options;
    options.threads = threads;
    goskills::BuiltPool built = goskills::build_pool(library, dicts, options);
    goskills::PoolBundle bundle =
        goskills::make_bundle(std::move(dicts), std::move(library), std::move(built));
    goskills::save_bundle(bundle, out_path);
    std::printf("pool written to %s: skills=%zu groups=%zu group_edges=%zu index_skills=%zu index_facets=%zu\n",
                out_path.c_str(), bundle.library.size(), bundle.pool.size(),
                bundle.graph.edges.size(), bundle.index.by_skill.size(),
                bundle.index.by_facet.size());
    return 0;
}

int cmd_retrieve(const std::string& pool_path, const std::string& query,
                 const std::string& config_path, bool as_json, bool with_trace) {
    goskills::PoolBundle bundle = goskills::load_bundle(pool_path);
    Config config = load_config_opt(config_path);
    goskills::RetrievalResult result =
        goskills::retrieve(query, bundle.library, bundle.pool, bundle.graph, bundle.index,
                           bundle.dicts, config, with_trace);
    if (as_json) {
        std::fputs(goskills::retrieval_result_json(result, config, with_trace).c_str(), stdout);
    } else {
        std::fputs(result.contract_text.c_str(), stdout);
        if (with_trace) {
            std::fputs("\nTRACE\n", stdout);
            for (const auto& line : result.trace) {
                std::fputs(line.c_str(), stdout);
                std::fputc('\n', stdout);
            }
        }
    }
    return 0;
}

int cmd_gate(const std::string& pool_path, const std::string& annotations_path,
             const std::string& retriever, const std::string& ablate, const std::string& mode,
             const std::string& config_path, const std::string& report_json,
             const std::string& report_csv) {
    goskills::PoolBundle bundle = goskills::load_bundle(pool_path);
    Config config = load_config_opt(config_path);
    if (!ablate.empty()) config = config.with_ablation(ablate);
    if (!mode.empty()) {
        auto m = goskills::gate_mode_from_string(mode);
        if (!m) throw std::runtime_error("unknown gate mode: " + mode);
        config.gate_mode = *m;
    }
    auto tasks = goskills::load_annotations(annotations_path, bundle.library);
    goskills::GateReport report = goskills::run_gate(tasks, retriever, bundle, config);
    if (!report_json.empty()) write_file(report_json, goskills::gate_report_json(report, config));
    if (!report_csv.empty()) write_file(report_csv, goskills::gate_report_csv(report));
    std::printf("%s\n", goskills::gate_summary_line(report).c_str());
    return 0;
}

int cmd_inspect_schema(const std::string& pool_path, const std::string& query) {
    goskills::PoolBundle bundle = goskills::load_bundle(pool_path);
    goskills::QuerySchema schema = goskills::extract_schema(query, bundle.library, bundle.dicts);
    ordered_json j;
    j["core"] = schema.core.tokens();
    j["tech"] = schema.tech.tokens();
    j["op"] = schema.op.tokens();
    j["artifact"] = schema.artifact.tokens();
    j["constraint"] = schema.constraint.tokens();
    j["failure"] = schema.failure.tokens();
    j["check"] = schema.check.tokens();
    j["high_confidence"] =
        goskills::high_confidence_facets(schema, bundle.library, goskills::GateMode::instruction_auto)
            .tokens();
    std::fputs((j.dump(2) + "\n").c_str(), stdout);
    return 0;
}

int cmd_inspect_pool(const std::string& pool_path) {
    goskills::PoolBundle bundle = goskills::load_bundle(pool_path);
    ordered_json j;
    j["skills"] = bundle.library.size();
    j["groups"] = bundle.pool.size();
    j["group_edges"] = bundle.graph.edges.size();
    j["index_skills"] = bundle.index.by_skill.size();
    j["index_facets"] = bundle.index.by_facet.size();
    std::fputs((j.dump(2) + "\n").c_str(), stdout);
    return 0;
}

int cmd_inspect_group(const std::string& pool_path, const std::string& group_id) {
    goskills::PoolBundle bundle = goskills::load_bundle(pool_path);
    const goskills::SkillGroup& g = bundle.pool.at(group_id);
    ordered_json j;
    j["id"] = g.id;
    j["lead"] = g.lead;
    j["members"] = g.members;
    ordered_json roles;
    for (const auto& [id, role] : g.roles) roles[id] = goskills::to_string(role);
    j["roles"] = std::move(roles);
    j["required_facets"] = g.required_facets.tokens();
    j["optional_facets"] = g.optional_facets.tokens();
    j["negative_facets"] = g.negative_facets.tokens();
    j["artifacts"] = std::vector<std::string>(g.artifacts.begin(), g.artifacts.end());
    j["checks"] = std::vector<std::string>(g.checks.begin(), g.checks.end());
    j["prior"] = g.prior;
    ordered_json topo = ordered_json::array();
    for (const auto& e : g.topology) {
        topo.push_back(ordered_json::array({e.src, e.dst, goskills::to_string(e.type), e.weight}));
    }
    j["topology"] = std::move(topo);
    j["warnings"] = g.warnings;
    std::fputs((j.dump(2) + "\n").c_str(), stdout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"group-structured skill retrieval"};
    app.require_subcommand(1);

    std::string library_dir, out_path = "pool.json", dicts_dir;
    int threads = 1;
    auto* build = app.add_subcommand("build-pool", "build the group pool from a skill library");
    build->add_option("--library", library_dir, "directory with skills.json and edges.json")
        ->required();
    build->add_option("--out", out_path, "output pool path");
    build->add_option("--dicts", dicts_dir, "dictionary directory (defaults to embedded)");
    build->add_option("--threads", threads, "parallel lead enumeration threads");

    std::string pool_path, query, config_path;
    bool as_json = false, as_text = false, with_trace = false;
    auto* retrieve_cmd = app.add_subcommand("retrieve", "answer a query from a built pool");
    retrieve_cmd->add_option("--pool", pool_path, "pool.json path")->required();
    retrieve_cmd->add_option("--query", query, "task query")->required();
    retrieve_cmd->add_option("--config", config_path, "weights.json overrides");
    retrieve_cmd->add_flag("--json", as_json, "emit structured JSON");
    retrieve_cmd->add_flag("--text", as_text, "emit contract text (default)");
    retrieve_cmd->add_flag("--trace", with_trace, "append the decision log");

    std::string gate_pool, annotations, retriever = "goskills", ablate, mode, gate_config;
    std::string report_json, report_csv;
    auto* gate_cmd = app.add_subcommand("gate", "run the retrieval gate over annotations");
    gate_cmd->add_option("--pool", gate_pool, "pool.json path")->required();
    gate_cmd->add_option("--annotations", annotations, "gate.json path")->required();
    gate_cmd->add_option("--retriever", retriever,
                         "goskills | flat-topk | full-library | no-skills");
    gate_cmd->add_option("--ablate", ablate, "goskills ablation variant");
    gate_cmd->add_option("--mode", mode, "instruction_auto | critical_override");
    gate_cmd->add_option("--config", gate_config, "weights.json overrides");
    gate_cmd->add_option("--report-json", report_json, "write the JSON report here");
    gate_cmd->add_option("--report-csv", report_csv, "write the CSV report here");

    auto* inspect = app.add_subcommand("inspect", "inspect internals");
    inspect->require_subcommand(1);
    std::string is_pool, is_query;
    auto* ischema = inspect->add_subcommand("schema", "dump the parsed query schema");
    ischema->add_option("--pool", is_pool, "pool.json path")->required();
    ischema->add_option("--query", is_query, "task query")->required();
    std::string ip_pool;
    auto* ipool = inspect->add_subcommand("pool", "pool summary");
    ipool->add_option("--pool", ip_pool, "pool.json path")->required();
    std::string ig_pool, ig_id;
    auto* igroup = inspect->add_subcommand("group", "dump one group");
    igroup->add_option("--pool", ig_pool, "pool.json path")->required();
    igroup->add_option("--id", ig_id, "group id")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed()) return cmd_build_pool(library_dir, out_path, dicts_dir, threads);
        if (retrieve_cmd->parsed()) {
            return cmd_retrieve(pool_path, query, config_path, as_json && !as_text, with_trace);
        }
        if (gate_cmd->parsed()) {
            return cmd_gate(gate_pool, annotations, retriever, ablate, mode, gate_config,
                            report_json, report_csv);
        }
        if (ischema->parsed()) return cmd_inspect_schema(is_pool, is_query);
        if (ipool->parsed()) return cmd_inspect_pool(ip_pool);
        if (igroup->parsed()) return cmd_inspect_group(ig_pool, ig_id);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
