#pragma once

#include <set>
#include <string>
#include <vector>

#include "goskills/bundle.hpp"
#include "goskills/config.hpp"
#include "goskills/pipeline.hpp"

namespace goskills {

// One annotated visible requirement: a description plus the skill sets that
// satisfy it. `alternatives`, when present, lists acceptable OR-sets;
// otherwise `must_have` is the single required set.
struct GateItem {
    std::string requirement;
    std::vector<std::string> must_have;
    std::vector<std::vector<std::string>> alternatives;
};

struct GateTask {
    std::string id;
    std::string query;
    std::vector<GateItem> items;
};

enum class ItemOutcome { pass, partial, miss };
const char* to_string(ItemOutcome o);

struct GateTaskRow {
    std::string task_id;
    int pass = 0;
    int partial = 0;
    int miss = 0;
    std::size_t presented_count = 0;
    std::vector<std::string> presented;
};

struct GateReport {
    std::string retriever;
    std::string ablation;
    std::string mode;
    int pass = 0;
    int partial = 0;
    int miss = 0;
    double must_hit = 0.0;    // mean per-task fraction of fully covered items
    double mean_skills = 0.0;
    std::vector<GateTaskRow> rows;
};

// Loads gate.json and validates every referenced skill against the library.
std::vector<GateTask> load_annotations(const std::string& path, const Library& library);
std::vector<GateTask> parse_annotations(const std::string& json_text, const Library& library);

ItemOutcome evaluate_item(const GateItem& item, const std::set<std::string>& presented);

// Presented-set retrievers sharing the top-n payload budget.
std::vector<std::string> baseline_flat_topk(const std::string& query, const Library& library,
                                            const Dictionaries& dicts, int k);
std::vector<std::string> baseline_full_library(const Library& library);

// retriever: goskills | flat-topk | full-library | no-skills. config carries
// any goskills ablation.
GateReport run_gate(const std::vector<GateTask>& tasks, const std::string& retriever,
                    const PoolBundle& bundle, const Config& config);

std::string gate_report_json(const GateReport& report, const Config& config);
std::string gate_report_csv(const GateReport& report);
std::string gate_summary_line(const GateReport& report);

}  // namespace goskills
