#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "goskills/config.hpp"
#include "goskills/contract.hpp"
#include "goskills/dictionaries.hpp"
#include "goskills/group_builder.hpp"
#include "goskills/groups.hpp"
#include "goskills/library.hpp"
#include "goskills/query.hpp"
#include "goskills/scoring.hpp"

namespace goskills {

struct SeedHit {
    std::string id;
    double score = 0.0;  // min-max normalized over the returned list
};

struct GroupPlan {
    std::string anchor;                 // empty when no anchor was selected
    std::vector<std::string> supports;  // selection order

    bool empty() const { return anchor.empty(); }
    std::vector<std::string> all() const;
};

struct PresentedSkills {
    std::vector<PresentedSkill> skills;  // payloads already truncated
    std::size_t total_cost = 0;

    bool contains(const std::string& id) const;
    std::vector<std::string> ids() const;
};

struct CoverageDebt {
    std::vector<std::string> uncovered;  // sorted facet tokens
    bool empty() const { return uncovered.empty(); }
};

struct RetrievalResult {
    GroupPlan plan;
    PresentedSkills presented;
    CoverageDebt debt;
    ExecutionContract contract;
    std::string contract_text;
    std::vector<std::string> trace;
    QuerySchema schema;
    FacetSet high_confidence;
};

// Shared state for one query. All referenced structures are immutable here.
struct RetrievalContext {
    const Library& library;
    const GroupPool& pool;
    const GroupGraph& graph;
    const InvertedIndex& index;
    const Config& config;

    QuerySchema schema;
    FacetSet high_confidence;
    std::vector<SeedHit> seeds;
    std::map<std::string, double> seed_score;
    std::map<std::string, int> seed_rank;
    std::set<std::string> activated;  // A_q: seeds plus candidate-group members

    std::vector<std::string>* trace = nullptr;
    void note(const std::string& line) const;
};

// Deterministic lexical seed retrieval: token overlap weighted by inverse
// facet frequency, min-max normalized, ties broken by skill id.
std::vector<SeedHit> seed_retrieve(const std::string& query, const Library& library,
                                   const Dictionaries& dicts, int k);
std::vector<SeedHit> seed_retrieve_tokens(const std::vector<std::string>& tokens,
                                          const Library& library, int k,
                                          int posting_cap = 256);

// Direct facet-index matches plus groups containing a seed skill, minus groups
// whose negative facets clash with the high-confidence query constraints.
std::vector<std::string> candidate_groups(const RetrievalContext& ctx);

struct ScoredGroup {
    std::string id;
    double score = 0.0;
};

// Feature vectors for the three stages (mirrored by the test oracle).
FeatureVector group_features(const SkillGroup& g, const RetrievalContext& ctx);
FeatureVector support_features(const SkillGroup& g, const GroupPlan& plan,
                               const RetrievalContext& ctx);
FeatureVector skill_features(const Skill& s, const PresentedSkills& presented,
                             const GroupPlan& plan, const RetrievalContext& ctx);

// Ranked shortlist after the adaptive score floor and pool cap.
std::vector<ScoredGroup> top_groups(const std::vector<std::string>& candidates,
                                    const RetrievalContext& ctx);

std::optional<std::string> select_anchor(const std::vector<ScoredGroup>& shortlist,
                                         const RetrievalContext& ctx);

GroupPlan expand_supports(GroupPlan plan, const std::vector<ScoredGroup>& shortlist,
                          RetrievalContext& ctx);

PresentedSkills bottleneck(const GroupPlan& plan, const RetrievalContext& ctx);

CoverageDebt coverage_debt(const FacetSet& high_confidence, const PresentedSkills& presented,
                           const Library& library);

void backfill(PresentedSkills& presented, CoverageDebt& debt, const GroupPlan& plan,
              const RetrievalContext& ctx);

GroupPlan anchor_prune(GroupPlan plan, const PresentedSkills& presented,
                       const RetrievalContext& ctx);

// Full online run: schema, seeds, activation, anchor, expansion, bottleneck,
// debt, backfill, prune, contract.
RetrievalResult retrieve(const std::string& query, const Library& library,
                         const GroupPool& pool, const GroupGraph& graph,
                         const InvertedIndex& index, const Dictionaries& dicts,
                         const Config& config, bool want_trace = false);

// JSON view of a retrieval result, config provenance included.
std::string retrieval_result_json(const RetrievalResult& result, const Config& config,
                                  bool include_trace);

}  // namespace goskills
