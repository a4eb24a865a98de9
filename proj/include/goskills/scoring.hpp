#pragma once

#include <array>
#include <vector>

#include "goskills/budgets.hpp"
#include "goskills/groups.hpp"
#include "goskills/query.hpp"

namespace goskills {

// Feature order shared by all three scoring stages. Every component is clipped
// to [0,1] before scoring; stage-inapplicable features stay at zero.
struct FeatureVector {
    double relevance = 0.0;
    double facet_coverage = 0.0;
    double anchor_match = 0.0;
    double check_support = 0.0;
    double connectivity = 0.0;
    double redundancy = 0.0;
    double negative = 0.0;
    double cost = 0.0;

    FeatureVector clipped() const;
};

struct StageWeights {
    double relevance = 0.0;
    double facet = 0.0;
    double anchor = 0.0;
    double check = 0.0;
    double connectivity = 0.0;
    double redundancy = 0.0;
    double negative = 0.0;
    double cost = 0.0;

    double dot(const FeatureVector& x) const;
    std::array<double, 8> as_array() const;
};

struct ScoringWeights {
    StageWeights grp{0.28, 0.22, 0.18, 0.12, 0.10, -0.05, -0.25, -0.04};
    StageWeights sup{0.12, 0.28, 0.06, 0.16, 0.16, -0.18, -0.25, -0.04};
    StageWeights bot{0.18, 0.24, 0.12, 0.20, 0.08, -0.12, -0.30, -0.08};

    double lambda_prior = 0.05;   // group-prior mix-in for the group score
    double lambda_anchor = 0.15;  // anchor-correction scale

    double delta_grp = 0.14;  // group selection minimum score
    double delta_sup = 0.10;  // support expansion minimum score
    double delta_bot = 0.10;  // bottleneck minimum score
};

double u_grp(const FeatureVector& features, double prior, const ScoringWeights& w);
double u_sup(const FeatureVector& features, const ScoringWeights& w);
double u_bot(const FeatureVector& features, const ScoringWeights& w);

// Unscaled anchor correction for a candidate lead skill: +1 for an exact
// tech/artifact anchor match, +0.5 for an alias-only match, -1 for a generic
// or negative-conflicting lead, 0 when the query carries no anchors. The
// caller scales by lambda_anchor.
double anchor_bonus(const Skill& lead, const QuerySchema& schema,
                    const FacetSet& high_confidence);

// Query difficulty in [0,1]: 0.60 * complexity + 0.40 * ambiguity, where
// complexity counts schema tokens against 12 and ambiguity mixes the top-score
// gap (0.55) with the top-6 score spread (0.45).
double query_difficulty(const QuerySchema& schema, const std::vector<double>& ranked_scores,
                        const Budgets& b);

// Adaptive shortlist size: min(pool_cap, max(base, round(extra_base +
// difficulty_multiplier * difficulty * base))) with base = max(6, 2 * top_n).
int shortlist_size(double difficulty, const Budgets& b);

// Adaptive score floor: max(floor_min, floor_center - floor_slope * difficulty).
double score_floor(double difficulty, const Budgets& b);

}  // namespace goskills
