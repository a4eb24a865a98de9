#include "goskills/group_builder.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

namespace goskills {

namespace {

double clip01(double v) { return std::min(1.0, std::max(0.0, v)); }

bool edge_beats(const SkillEdge& a, const SkillEdge& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    if (edge_priority(a.type) != edge_priority(b.type)) {
        return edge_priority(a.type) < edge_priority(b.type);
    }
    if (a.src != b.src) return a.src < b.src;
    return a.dst < b.dst;
}

// Strongest non-semantic edge between a member and the lead.
const SkillEdge* role_edge(const std::string& member, const std::string& lead,
                           const TypedSkillGraph& graph) {
    const SkillEdge* best = nullptr;
    for (std::size_t idx : graph.edges_of(member)) {
        const SkillEdge& e = graph.edges[idx];
        if (e.type == EdgeType::semantic) continue;
        if (!((e.src == member && e.dst == lead) || (e.src == lead && e.dst == member))) continue;
        if (!best || edge_beats(e, *best)) best = &e;
    }
    return best;
}

Role role_for_edge(const SkillEdge& e, const std::string& member) {
    const bool member_is_predecessor = (e.src == member);
    switch (e.type) {
        case EdgeType::dependency:
            return Role::prerequisite;
        case EdgeType::workflow:
            return member_is_predecessor ? Role::preprocessor : Role::setup;
        case EdgeType::artifact:
            return member_is_predecessor ? Role::parser : Role::formatter;
        case EdgeType::visible_check:
            return Role::checker;
        case EdgeType::fallback:
        case EdgeType::alternative:
            return Role::fallback;
        case EdgeType::semantic:
            break;
    }
    return Role::preprocessor;
}

}  // namespace

void collect_group_topology(SkillGroup& group, const TypedSkillGraph& graph) {
    group.topology.clear();
    std::vector<std::string> ids = group.skill_ids();
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            for (std::size_t idx : graph.edges_of(ids[i])) {
                const SkillEdge& e = graph.edges[idx];
                if ((e.src == ids[i] && e.dst == ids[j]) ||
                    (e.src == ids[j] && e.dst == ids[i])) {
                    group.topology.push_back(e);
                }
            }
        }
    }
    std::sort(group.topology.begin(), group.topology.end(),
              [](const SkillEdge& a, const SkillEdge& b) {
                  if (a.src != b.src) return a.src < b.src;
                  if (a.dst != b.dst) return a.dst < b.dst;
                  if (a.type != b.type) return edge_priority(a.type) < edge_priority(b.type);
                  return a.weight > b.weight;
              });
}

namespace {

// Facet win for a member beyond a baseline facet set: any artifact or check
// token it carries that the baseline lacks.
bool adds_artifact_or_check(const Skill& member, const std::set<std::string>& base_artifacts,
                            const std::set<std::string>& base_checks) {
    for (const auto& [tok, f] : member.facets) {
        if (f.category == FacetCategory::artifact && !base_artifacts.count(tok)) return true;
        if (f.category == FacetCategory::check && !base_checks.count(tok)) return true;
    }
    return false;
}

std::set<std::string> facet_tokens_of(const Skill& s, FacetCategory cat) {
    std::set<std::string> out;
    for (const auto& [tok, f] : s.facets) {
        if (f.category == cat) out.insert(tok);
    }
    return out;
}

}  // namespace

std::vector<std::string> typed_neighborhood(const std::string& lead,
                                            const TypedSkillGraph& graph, int cap) {
    struct Entry {
        std::string id;
        double weight;
        int priority;
    };
    std::map<std::string, Entry> best;
    for (std::size_t idx : graph.edges_of(lead)) {
        const SkillEdge& e = graph.edges[idx];
        if (e.type == EdgeType::semantic) continue;
        const std::string& other = (e.src == lead) ? e.dst : e.src;
        if (other == lead) continue;
        Entry cand{other, e.weight, edge_priority(e.type)};
        auto it = best.find(other);
        if (it == best.end() || cand.weight > it->second.weight ||
            (cand.weight == it->second.weight && cand.priority < it->second.priority)) {
            best[other] = cand;
        }
    }
    std::vector<Entry> order;
    order.reserve(best.size());
    for (auto& [id, e] : best) order.push_back(e);
    std::sort(order.begin(), order.end(), [](const Entry& a, const Entry& b) {
        if (a.weight != b.weight) return a.weight > b.weight;
        if (a.priority != b.priority) return a.priority < b.priority;
        return a.id < b.id;
    });
    if (cap >= 0 && order.size() > static_cast<std::size_t>(cap)) {
        order.resize(static_cast<std::size_t>(cap));
    }
    std::vector<std::string> out;
    out.reserve(order.size());
    for (const auto& e : order) out.push_back(e.id);
    return out;
}

void assign_roles(SkillGroup& group, const TypedSkillGraph& graph) {
    group.roles.clear();
    group.roles[group.lead] = Role::anchor;
    for (const auto& m : group.members) {
        const SkillEdge* e = role_edge(m, group.lead, graph);
        if (e) {
            group.roles[m] = role_for_edge(*e, m);
        } else {
            group.roles[m] = Role::preprocessor;
            group.warnings.push_back("member " + m + " has no typed edge to lead " + group.lead);
        }
    }
    collect_group_topology(group, graph);
}

std::vector<SkillGroup> enumerate_groups(const std::string& lead,
                                         const std::vector<std::string>& neighborhood,
                                         int k_max, const TypedSkillGraph& graph,
                                         const Library& library) {
    std::vector<SkillGroup> out;
    auto make_group = [&](std::vector<std::string> members) {
        SkillGroup g;
        g.lead = lead;
        std::sort(members.begin(), members.end());
        g.members = std::move(members);
        g.id = canonical_group_id(lead, g.members);
        assign_roles(g, graph);
        return g;
    };

    out.push_back(make_group({}));
    if (k_max < 2) return out;

    for (const auto& n : neighborhood) {
        out.push_back(make_group({n}));
    }
    if (k_max < 3) return out;

    for (std::size_t i = 0; i < neighborhood.size(); ++i) {
        for (std::size_t j = i + 1; j < neighborhood.size(); ++j) {
            SkillGroup triple = make_group({neighborhood[i], neighborhood[j]});
            // The second member must add a distinct role or a distinct
            // artifact/check facet beyond the lead-first pair.
            const Skill& first = library.at(neighborhood[i]);
            const Skill& second = library.at(neighborhood[j]);
            Role r1 = triple.roles.at(neighborhood[i]);
            Role r2 = triple.roles.at(neighborhood[j]);
            std::set<std::string> pair_artifacts = facet_tokens_of(library.at(lead), FacetCategory::artifact);
            std::set<std::string> pair_checks = facet_tokens_of(library.at(lead), FacetCategory::check);
            for (const auto& tok : facet_tokens_of(first, FacetCategory::artifact)) {
                pair_artifacts.insert(tok);
            }
            for (const auto& tok : facet_tokens_of(first, FacetCategory::check)) {
                pair_checks.insert(tok);
            }
            if (r1 != r2 || adds_artifact_or_check(second, pair_artifacts, pair_checks)) {
                out.push_back(std::move(triple));
            }
        }
    }
    return out;
}

void extract_group_facets(SkillGroup& group, const Library& library) {
    const Skill& lead = library.at(group.lead);
    group.required_facets = lead.facets;
    group.optional_facets = FacetSet{};
    group.negative_facets = lead.negative_facets;
    group.artifacts.clear();
    group.checks.clear();

    for (const auto& m : group.members) {
        const Skill& s = library.at(m);
        for (const auto& [tok, f] : s.facets) {
            if (!group.required_facets.contains(tok)) {
                group.optional_facets.insert(f);
            }
        }
        group.negative_facets.merge(s.negative_facets);
    }
    for (const auto& id : group.skill_ids()) {
        const Skill& s = library.at(id);
        for (const auto& [tok, f] : s.facets) {
            if (f.category == FacetCategory::artifact) group.artifacts.insert(tok);
            if (f.category == FacetCategory::check) group.checks.insert(tok);
        }
    }
}

double compute_group_prior(const SkillGroup& group) {
    if (group.members.empty()) {
        return clip01(0.5 * (static_cast<double>(group.required_facets.size()) / 8.0));
    }
    std::set<Role> roles;
    for (const auto& [id, r] : group.roles) roles.insert(r);
    double role_diversity = static_cast<double>(roles.size()) / 3.0;
    double mean_weight = 0.0;
    if (!group.topology.empty()) {
        for (const auto& e : group.topology) mean_weight += e.weight;
        mean_weight /= static_cast<double>(group.topology.size());
    }
    return clip01(0.5 * role_diversity + 0.5 * mean_weight);
}

bool is_compatible(const SkillGroup& group, const Library& library,
                   const Dictionaries& dicts) {
    if (group.members.empty()) return true;
    std::vector<std::string> ids = group.skill_ids();
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const Skill& a = library.at(ids[i]);
        for (std::size_t j = 0; j < ids.size(); ++j) {
            if (i == j) continue;
            const Skill& b = library.at(ids[j]);
            // A skill's negative cue matching another skill's facet is a clash.
            for (const auto& [tok, f] : a.negative_facets) {
                if (b.facets.contains(tok)) return false;
            }
            if (j <= i) continue;
            // Exclusion-table conflicts over tech and artifact anchors.
            for (FacetCategory cat : {FacetCategory::tech, FacetCategory::artifact}) {
                for (const auto& ta : facet_tokens_of(a, cat)) {
                    for (const auto& tb : facet_tokens_of(b, cat)) {
                        if (dicts.are_exclusive(ta, tb)) return false;
                    }
                }
            }
        }
    }
    return true;
}

namespace {

bool member_adds_evidence(const SkillGroup& group, const std::string& member,
                          const Library& library) {
    const Skill& lead = library.at(group.lead);
    const Skill& m = library.at(member);
    for (const auto& [tok, f] : m.facets) {
        if (!lead.facets.contains(tok)) return true;
    }
    // Same facet surface as the lead: a triple member can still justify itself
    // with a role or edge type its sibling lacks.
    for (const auto& other : group.members) {
        if (other == member) continue;
        if (group.roles.at(member) != group.roles.at(other)) return true;
        const SkillEdge* em = nullptr;
        const SkillEdge* eo = nullptr;
        for (const auto& e : group.topology) {
            bool touches_member = (e.src == member && e.dst == group.lead) ||
                                  (e.src == group.lead && e.dst == member);
            bool touches_other = (e.src == other && e.dst == group.lead) ||
                                 (e.src == group.lead && e.dst == other);
            if (touches_member && (!em || edge_beats(e, *em))) em = &e;
            if (touches_other && (!eo || edge_beats(e, *eo))) eo = &e;
        }
        if (em && eo && em->type != eo->type) return true;
    }
    return false;
}

}  // namespace

bool is_non_redundant(const SkillGroup& group, const std::vector<SkillGroup>& retained,
                      const Library& library) {
    for (const auto& r : retained) {
        if (r.id == group.id && r.prior >= group.prior) return false;
    }
    if (group.members.empty()) return true;
    for (const auto& m : group.members) {
        if (member_adds_evidence(group, m, library)) return true;
    }
    return false;
}

GroupGraph build_group_graph(const GroupPool& pool, const Library& library,
                             const Dictionaries& dicts, const BuildOptions& options) {
    GroupGraph graph;
    const auto& groups = pool.groups();
    std::map<std::string, std::size_t> index_of;
    std::map<std::string, std::vector<std::size_t>> groups_of_skill;
    std::map<std::string, std::vector<std::size_t>> groups_of_facet;
    std::map<std::string, std::vector<std::size_t>> groups_of_negative;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        index_of[groups[i].id] = i;
        for (const auto& id : groups[i].skill_ids()) groups_of_skill[id].push_back(i);
        for (const auto& tok : groups[i].required_facets.tokens()) {
            groups_of_facet[tok].push_back(i);
        }
        for (const auto& tok : groups[i].optional_facets.tokens()) {
            groups_of_facet[tok].push_back(i);
        }
        for (const auto& [tok, f] : groups[i].negative_facets) {
            groups_of_negative[tok].push_back(i);
        }
    }

    std::set<std::pair<std::size_t, std::size_t>> candidates;
    auto add_pair = [&](std::size_t a, std::size_t b) {
        if (a == b) return;
        candidates.insert(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
    };

    // Groups joined by a non-semantic skill edge.
    for (const auto& e : library.graph().edges) {
        if (e.type == EdgeType::semantic) continue;
        auto sa = groups_of_skill.find(e.src);
        auto sb = groups_of_skill.find(e.dst);
        if (sa == groups_of_skill.end() || sb == groups_of_skill.end()) continue;
        for (std::size_t a : sa->second) {
            for (std::size_t b : sb->second) add_pair(a, b);
        }
    }
    // Groups sharing a skill.
    for (const auto& [skill, gs] : groups_of_skill) {
        for (std::size_t i = 0; i < gs.size(); ++i) {
            for (std::size_t j = i + 1; j < gs.size(); ++j) add_pair(gs[i], gs[j]);
        }
    }
    // Groups sharing a facet; oversized buckets carry no pairing evidence.
    for (const auto& [tok, gs] : groups_of_facet) {
        if (gs.size() > static_cast<std::size_t>(options.facet_bucket_cap)) continue;
        for (std::size_t i = 0; i < gs.size(); ++i) {
            for (std::size_t j = i + 1; j < gs.size(); ++j) add_pair(gs[i], gs[j]);
        }
    }
    // Negative-facet clashes surface whatever the affinity; oversized postings
    // are excluded the same way as plain facet pairing.
    for (const auto& [tok, neg_groups] : groups_of_negative) {
        auto hit = groups_of_facet.find(tok);
        if (hit == groups_of_facet.end()) continue;
        if (hit->second.size() > static_cast<std::size_t>(options.facet_bucket_cap)) continue;
        for (std::size_t a : neg_groups) {
            for (std::size_t b : hit->second) add_pair(a, b);
        }
    }

    auto jaccard = [](const SkillGroup& x, const SkillGroup& y) {
        std::set<std::string> ax, ay;
        for (const auto& t : x.required_facets.tokens()) ax.insert(t);
        for (const auto& t : x.optional_facets.tokens()) ax.insert(t);
        for (const auto& t : y.required_facets.tokens()) ay.insert(t);
        for (const auto& t : y.optional_facets.tokens()) ay.insert(t);
        std::size_t inter = 0;
        for (const auto& t : ax) inter += ay.count(t);
        std::size_t uni = ax.size() + ay.size() - inter;
        return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
    };

    for (const auto& [ia, ib] : candidates) {
        const SkillGroup& ga = groups[ia];
        const SkillGroup& gb = groups[ib];

        bool incompat = false;
        for (const auto& [tok, f] : ga.negative_facets) {
            if (gb.covers_facet(tok)) incompat = true;
        }
        for (const auto& [tok, f] : gb.negative_facets) {
            if (ga.covers_facet(tok)) incompat = true;
        }
        if (!incompat) {
            for (const auto& ta : ga.required_facets.tokens()) {
                for (const auto& tb : gb.required_facets.tokens()) {
                    if (dicts.are_exclusive(ta, tb)) incompat = true;
                }
            }
        }

        const SkillEdge* best_cross = nullptr;
        for (const auto& x : ga.skill_ids()) {
            for (const auto& y : gb.skill_ids()) {
                if (x == y) continue;
                const SkillEdge* e = library.graph().best_edge_between(x, y);
                if (e && e->type != EdgeType::semantic && (!best_cross || edge_beats(*e, *best_cross))) {
                    best_cross = e;
                }
            }
        }
        double cross_w = best_cross ? best_cross->weight : 0.0;
        double affinity = 0.6 * cross_w + 0.4 * jaccard(ga, gb);

        GroupEdge edge;
        edge.a = ga.id;
        edge.b = gb.id;
        edge.weight = affinity;
        if (incompat) {
            edge.label = GroupEdgeLabel::incompat;
            graph.edges.push_back(std::move(edge));
            continue;
        }
        if (affinity < options.affinity_threshold) continue;
        if (best_cross) {
            switch (best_cross->type) {
                case EdgeType::artifact: edge.label = GroupEdgeLabel::artifact; break;
                case EdgeType::visible_check: edge.label = GroupEdgeLabel::visible_check; break;
                case EdgeType::fallback:
                case EdgeType::alternative: edge.label = GroupEdgeLabel::fallback; break;
                default: edge.label = GroupEdgeLabel::support; break;
            }
        } else {
            edge.label = ga.artifacts.size() && gb.artifacts.size() &&
                                 std::any_of(ga.artifacts.begin(), ga.artifacts.end(),
                                             [&](const std::string& t) {
                                                 return gb.artifacts.count(t) > 0;
                                             })
                             ? GroupEdgeLabel::artifact
                             : GroupEdgeLabel::support;
        }
        graph.edges.push_back(std::move(edge));
    }

    std::sort(graph.edges.begin(), graph.edges.end(), [](const GroupEdge& x, const GroupEdge& y) {
        if (x.a != y.a) return x.a < y.a;
        if (x.b != y.b) return x.b < y.b;
        return static_cast<int>(x.label) < static_cast<int>(y.label);
    });
    graph.rebuild_incident();
    return graph;
}

BuiltPool build_pool(const Library& library, const Dictionaries& dicts,
                     const BuildOptions& options) {
    const auto& skills = library.skills();

    auto process_lead = [&](const Skill& lead) {
        std::vector<SkillGroup> retained;
        auto neighborhood = typed_neighborhood(lead.id, library.graph(), options.group_size_cap);
        auto candidates =
            enumerate_groups(lead.id, neighborhood, options.group_size_cap, library.graph(), library);
        for (auto& g : candidates) {
            extract_group_facets(g, library);
            g.prior = compute_group_prior(g);
            if (!is_compatible(g, library, dicts)) continue;
            bool duplicate = false;
            for (auto& r : retained) {
                if (r.id == g.id) {
                    duplicate = true;
                    if (g.prior > r.prior) r = g;
                    break;
                }
            }
            if (duplicate) continue;
            if (!is_non_redundant(g, retained, library)) continue;
            retained.push_back(std::move(g));
        }
        return retained;
    };

    std::vector<std::vector<SkillGroup>> per_lead(skills.size());
    int threads = std::max(1, options.threads);
    if (threads == 1 || skills.size() < 2) {
        for (std::size_t i = 0; i < skills.size(); ++i) {
            per_lead[i] = process_lead(skills[i]);
        }
    } else {
        std::vector<std::thread> pool_threads;
        std::size_t chunk = (skills.size() + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            std::size_t begin = static_cast<std::size_t>(t) * chunk;
            std::size_t end = std::min(skills.size(), begin + chunk);
            if (begin >= end) break;
            pool_threads.emplace_back([&, begin, end] {
                for (std::size_t i = begin; i < end; ++i) {
                    per_lead[i] = process_lead(skills[i]);
                }
            });
        }
        for (auto& th : pool_threads) th.join();
    }

    std::vector<SkillGroup> all;
    for (auto& chunk_groups : per_lead) {
        for (auto& g : chunk_groups) all.push_back(std::move(g));
    }

    BuiltPool built;
    built.pool = GroupPool(std::move(all));
    built.graph = build_group_graph(built.pool, library, dicts, options);
    for (const auto& g : built.pool.groups()) {
        for (const auto& id : g.skill_ids()) {
            built.index.by_skill[id].push_back(g.id);
        }
        for (const auto& tok : g.required_facets.tokens()) {
            built.index.by_facet[tok].push_back(g.id);
        }
        for (const auto& tok : g.optional_facets.tokens()) {
            built.index.by_facet[tok].push_back(g.id);
        }
    }
    for (auto& [k, v] : built.index.by_skill) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    for (auto& [k, v] : built.index.by_facet) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return built;
}

}  // namespace goskills
