#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "goskills/facets.hpp"
#include "goskills/library.hpp"

namespace goskills {

enum class Role {
    anchor = 0,
    prerequisite,
    preprocessor,
    setup,
    formatter,
    parser,
    checker,
    fallback,
};

const char* to_string(Role r);
std::optional<Role> role_from_string(const std::string& s);

// Anchor-centered group: a lead skill plus at most two support members.
struct SkillGroup {
    std::string id;    // "<lead>+<member>+<member>", members sorted
    std::string lead;
    std::vector<std::string> members;  // sorted ascending, size <= 2
    std::map<std::string, Role> roles;

    FacetSet required_facets;  // lead facets
    FacetSet optional_facets;  // member facets beyond the lead's
    FacetSet negative_facets;  // union of member negative cues
    std::set<std::string> artifacts;
    std::set<std::string> checks;

    std::vector<SkillEdge> topology;  // intra-group typed edges
    double prior = 0.0;
    std::vector<std::string> warnings;

    std::size_t size() const { return 1 + members.size(); }
    std::vector<std::string> skill_ids() const;
    bool covers_facet(const std::string& token) const {
        return required_facets.contains(token) || optional_facets.contains(token);
    }
};

std::string canonical_group_id(const std::string& lead, std::vector<std::string> members);

enum class GroupEdgeLabel {
    support = 0,
    artifact,
    visible_check,
    fallback,
    incompat,
};

const char* to_string(GroupEdgeLabel l);
std::optional<GroupEdgeLabel> group_edge_label_from_string(const std::string& s);

struct GroupEdge {
    std::string a;  // group id, a < b
    std::string b;
    GroupEdgeLabel label = GroupEdgeLabel::support;
    double weight = 0.0;
};

struct GroupGraph {
    std::vector<GroupEdge> edges;
    std::map<std::string, std::vector<std::size_t>> incident;

    void rebuild_incident();
    // Non-incompat, positive-weight neighbors of one group.
    std::vector<std::string> positive_neighbors(const std::string& group_id) const;
    // Max positive edge weight between a group and any group of `plan`.
    double positive_weight_to(const std::string& group_id,
                              const std::vector<std::string>& plan) const;
};

struct InvertedIndex {
    std::map<std::string, std::vector<std::string>> by_skill;  // skill id -> group ids
    std::map<std::string, std::vector<std::string>> by_facet;  // facet token -> group ids
};

class GroupPool {
public:
    GroupPool() = default;
    explicit GroupPool(std::vector<SkillGroup> groups);

    const std::vector<SkillGroup>& groups() const { return groups_; }
    std::size_t size() const { return groups_.size(); }
    const SkillGroup* find(const std::string& id) const;
    const SkillGroup& at(const std::string& id) const;

private:
    std::vector<SkillGroup> groups_;  // sorted by (lead, size, member ids)
    std::map<std::string, std::size_t> by_id_;
};

}  // namespace goskills
