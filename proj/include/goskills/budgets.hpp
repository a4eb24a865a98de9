#pragma once

namespace goskills {

// Fixed retrieval budgets and selection constants. Defaults are the shipped
// values; overrides come from the weights config file.
struct Budgets {
    int top_n = 4;            // presented-skill budget
    int seed_k = 4;           // seed retrieval depth
    int payload_cap = 1800;   // max characters per skill payload
    int context_cap = 9000;   // max characters for the rendered contract
    int group_cap = 3;        // max selected groups
    int group_size_cap = 3;   // max skills per group
    int backfill_cap = 2;     // max coverage-debt backfills
    int pool_cap = 32;        // candidate shortlist hard cap
    int posting_cap = 256;    // facet posting lists above this are too generic
                              // to activate seeds or candidate groups

    double complexity_weight = 0.60;
    double ambiguity_weight = 0.40;
    double gap_weight = 0.55;
    double spread_weight = 0.45;
    int base_pool_min = 6;
    int topn_pool_multiplier = 2;
    double adaptive_extra_base = 1.0;
    double adaptive_difficulty_multiplier = 2.0;

    double floor_center = 0.55;
    double floor_slope = 0.30;
    double floor_min = 0.10;
    int floor_keep_min = 3;        // never cut the shortlist below this
    int floor_keep_max_below = 6;  // never keep more below-floor candidates

    double affinity_threshold = 0.35;
};

}  // namespace goskills
