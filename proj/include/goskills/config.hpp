#pragma once

#include <optional>
#include <string>

#include "goskills/budgets.hpp"
#include "goskills/query.hpp"
#include "goskills/scoring.hpp"

namespace goskills {

// Retrieval-side ablation switches. All off in the shipped configuration.
struct Ablation {
    bool no_backfill = false;
    bool no_group_graph = false;
    bool no_anchor_selection = false;
    bool no_group_expansion = false;
    bool retrieved_skills_only = false;
};

std::optional<Ablation> ablation_from_string(const std::string& name);
std::string ablation_name(const Ablation& a);

struct Config {
    Budgets budgets;
    ScoringWeights weights;
    Ablation ablation;
    GateMode gate_mode = GateMode::instruction_auto;

    // Applies one named ablation on top of this config.
    Config with_ablation(const std::string& name) const;
};

// Reads overrides from a weights.json file; unspecified fields keep defaults.
Config load_config(const std::string& path);
Config parse_config(const std::string& json_text);

// Full effective configuration, embedded in JSON outputs as provenance.
std::string config_provenance_json(const Config& config);

}  // namespace goskills
