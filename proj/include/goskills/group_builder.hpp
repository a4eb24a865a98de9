#pragma once

#include <string>
#include <vector>

#include "goskills/dictionaries.hpp"
#include "goskills/groups.hpp"
#include "goskills/library.hpp"

namespace goskills {

struct BuildOptions {
    int group_size_cap = 3;          // lead plus at most two members
    double affinity_threshold = 0.35;
    int facet_bucket_cap = 64;       // facet-only pairing skipped above this
    int threads = 1;
};

struct BuiltPool {
    GroupPool pool;
    GroupGraph graph;
    InvertedIndex index;
};

// One-hop neighbors of a lead over dependency/workflow/artifact/visible-check/
// fallback/alternative edges, ordered by descending best-edge weight with
// edge-type priority and skill id as tie-breaks, truncated to `cap`.
std::vector<std::string> typed_neighborhood(const std::string& lead,
                                            const TypedSkillGraph& graph, int cap);

// Lead role plus one role per member, derived from the member's strongest
// non-semantic edge to the lead. Members with no such edge fall back to
// preprocessor and record a warning.
void assign_roles(SkillGroup& group, const TypedSkillGraph& graph);

// Singleton, all lead-neighbor pairs, and lead+2 triples whose second member
// adds a distinct role or a distinct artifact/check facet beyond the pair.
// Returned groups carry roles and topology; facets and prior are not yet set.
std::vector<SkillGroup> enumerate_groups(const std::string& lead,
                                         const std::vector<std::string>& neighborhood,
                                         int k_max, const TypedSkillGraph& graph,
                                         const Library& library);

// required = lead facets, optional = member facets beyond them, negative =
// union of member negative cues; artifacts and checks unioned over the group.
void extract_group_facets(SkillGroup& group, const Library& library);

// Refills the intra-group typed edge list from the skill graph.
void collect_group_topology(SkillGroup& group, const TypedSkillGraph& graph);

double compute_group_prior(const SkillGroup& group);

bool is_compatible(const SkillGroup& group, const Library& library,
                   const Dictionaries& dicts);

// True when every member contributes something beyond the lead and no retained
// duplicate with an equal-or-higher prior exists.
bool is_non_redundant(const SkillGroup& group, const std::vector<SkillGroup>& retained,
                      const Library& library);

GroupGraph build_group_graph(const GroupPool& pool, const Library& library,
                             const Dictionaries& dicts, const BuildOptions& options);

BuiltPool build_pool(const Library& library, const Dictionaries& dicts,
                     const BuildOptions& options = {});

}  // namespace goskills
