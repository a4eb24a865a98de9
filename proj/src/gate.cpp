#include "goskills/gate.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace goskills {

using ordered_json = nlohmann::ordered_json;

const char* to_string(ItemOutcome o) {
    switch (o) {
        case ItemOutcome::pass: return "pass";
        case ItemOutcome::partial: return "partial";
        case ItemOutcome::miss: return "miss";
    }
    return "miss";
}

std::vector<GateTask> parse_annotations(const std::string& json_text, const Library& library) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("malformed gate JSON: ") + e.what());
    }
    std::vector<GateTask> tasks;
    std::vector<std::string> bad;
    for (const auto& t : j.at("tasks")) {
        GateTask task;
        task.id = t.at("task_id").get<std::string>();
        task.query = t.at("query").get<std::string>();
        for (const auto& i : t.at("items")) {
            GateItem item;
            item.requirement = i.at("requirement").get<std::string>();
            for (const auto& s : i.at("must_have")) {
                item.must_have.push_back(s.get<std::string>());
            }
            if (i.contains("alternatives")) {
                for (const auto& alt : i.at("alternatives")) {
                    item.alternatives.push_back(alt.get<std::vector<std::string>>());
                }
            }
            auto check = [&](const std::vector<std::string>& ids) {
                for (const auto& id : ids) {
                    if (!library.contains(id)) {
                        bad.push_back(task.id + "/" + item.requirement + ": " + id);
                    }
                }
            };
            check(item.must_have);
            for (const auto& alt : item.alternatives) check(alt);
            task.items.push_back(std::move(item));
        }
        tasks.push_back(std::move(task));
    }
    if (!bad.empty()) {
        std::string msg = "gate annotations reference unknown skills:";
        for (const auto& b : bad) msg += "\n  " + b;
        throw std::runtime_error(msg);
    }
    return tasks;
}

std::vector<GateTask> load_annotations(const std::string& path, const Library& library) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open annotations: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_annotations(ss.str(), library);
}

ItemOutcome evaluate_item(const GateItem& item, const std::set<std::string>& presented) {
    std::vector<std::vector<std::string>> acceptable = item.alternatives;
    if (acceptable.empty()) acceptable.push_back(item.must_have);

    bool any_overlap = false;
    for (const auto& required : acceptable) {
        bool full = true;
        for (const auto& id : required) {
            if (presented.count(id)) {
                any_overlap = true;
            } else {
                full = false;
            }
        }
        if (full) return ItemOutcome::pass;  // empty sets pass vacuously
    }
    return any_overlap ? ItemOutcome::partial : ItemOutcome::miss;
}

std::vector<std::string> baseline_flat_topk(const std::string& query, const Library& library,
                                            const Dictionaries& dicts, int k) {
    std::vector<SeedHit> seeds = seed_retrieve(query, library, dicts, k);
    std::vector<std::string> out;
    for (const auto& s : seeds) out.push_back(s.id);
    // No lexical overlap at all: fall back to id order.
    if (out.empty()) {
        for (const auto& s : library.skills()) {
            if (static_cast<int>(out.size()) >= k) break;
            out.push_back(s.id);
        }
    }
    return out;
}

std::vector<std::string> baseline_full_library(const Library& library) {
    std::vector<std::string> out;
    out.reserve(library.size());
    for (const auto& s : library.skills()) out.push_back(s.id);
    return out;
}

GateReport run_gate(const std::vector<GateTask>& tasks, const std::string& retriever,
                    const PoolBundle& bundle, const Config& config) {
    GateReport report;
    report.retriever = retriever;
    report.ablation = ablation_name(config.ablation);
    report.mode = to_string(config.gate_mode);

    double hit_sum = 0.0;
    double skills_sum = 0.0;
    std::size_t scored_tasks = 0;

    for (const auto& task : tasks) {
        std::vector<std::string> presented_list;
        if (retriever == "goskills") {
            RetrievalResult r = retrieve(task.query, bundle.library, bundle.pool, bundle.graph,
                                         bundle.index, bundle.dicts, config);
            presented_list = r.presented.ids();
        } else if (retriever == "flat-topk") {
            presented_list =
                baseline_flat_topk(task.query, bundle.library, bundle.dicts, config.budgets.top_n);
        } else if (retriever == "full-library") {
            presented_list = baseline_full_library(bundle.library);
        } else if (retriever == "no-skills") {
            presented_list = {};
        } else {
            throw std::runtime_error("unknown retriever: " + retriever);
        }

        std::set<std::string> presented(presented_list.begin(), presented_list.end());
        GateTaskRow row;
        row.task_id = task.id;
        row.presented = presented_list;
        row.presented_count = presented_list.size();
        for (const auto& item : task.items) {
            switch (evaluate_item(item, presented)) {
                case ItemOutcome::pass: ++row.pass; break;
                case ItemOutcome::partial: ++row.partial; break;
                case ItemOutcome::miss: ++row.miss; break;
            }
        }
        report.pass += row.pass;
        report.partial += row.partial;
        report.miss += row.miss;
        if (!task.items.empty()) {
            hit_sum += static_cast<double>(row.pass) / static_cast<double>(task.items.size());
            ++scored_tasks;
        }
        skills_sum += static_cast<double>(row.presented_count);
        report.rows.push_back(std::move(row));
    }
    if (scored_tasks > 0) {
        report.must_hit = hit_sum / static_cast<double>(scored_tasks);
    }
    if (!tasks.empty()) {
        report.mean_skills = skills_sum / static_cast<double>(tasks.size());
    }
    return report;
}

std::string gate_report_json(const GateReport& report, const Config& config) {
    ordered_json j;
    j["retriever"] = report.retriever;
    j["ablation"] = report.ablation;
    j["mode"] = report.mode;
    j["pass"] = report.pass;
    j["partial"] = report.partial;
    j["miss"] = report.miss;
    j["must_hit"] = report.must_hit;
    j["mean_skills"] = report.mean_skills;
    ordered_json rows = ordered_json::array();
    for (const auto& r : report.rows) {
        ordered_json o;
        o["task_id"] = r.task_id;
        o["pass"] = r.pass;
        o["partial"] = r.partial;
        o["miss"] = r.miss;
        o["presented"] = r.presented;
        rows.push_back(std::move(o));
    }
    j["tasks"] = std::move(rows);
    j["config"] = ordered_json::parse(config_provenance_json(config));
    return j.dump(2) + "\n";
}

std::string gate_report_csv(const GateReport& report) {
    std::string out = "task_id,pass,partial,miss,presented_count\n";
    for (const auto& r : report.rows) {
        out += r.task_id + "," + std::to_string(r.pass) + "," + std::to_string(r.partial) + "," +
               std::to_string(r.miss) + "," + std::to_string(r.presented_count) + "\n";
    }
    return out;
}

std::string gate_summary_line(const GateReport& report) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "retriever=%s ablation=%s mode=%s pass=%d partial=%d miss=%d "
                  "mean_skills=%.2f must_hit=%.3f",
                  report.retriever.c_str(), report.ablation.c_str(), report.mode.c_str(),
                  report.pass, report.partial, report.miss, report.mean_skills, report.must_hit);
    return buf;
}

}  // namespace goskills
