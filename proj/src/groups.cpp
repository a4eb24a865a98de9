#include "goskills/groups.hpp"

#include <algorithm>
#include <stdexcept>

namespace goskills {

const char* to_string(Role r) {
    switch (r) {
        case Role::anchor: return "anchor";
        case Role::prerequisite: return "prerequisite";
        case Role::preprocessor: return "preprocessor";
        case Role::setup: return "setup";
        case Role::formatter: return "formatter";
        case Role::parser: return "parser";
        case Role::checker: return "checker";
        case Role::fallback: return "fallback";
    }
    return "preprocessor";
}

std::optional<Role> role_from_string(const std::string& s) {
    if (s == "anchor") return Role::anchor;
    if (s == "prerequisite") return Role::prerequisite;
    if (s == "preprocessor") return Role::preprocessor;
    if (s == "setup") return Role::setup;
    if (s == "formatter") return Role::formatter;
    if (s == "parser") return Role::parser;
    if (s == "checker") return Role::checker;
    if (s == "fallback") return Role::fallback;
    return std::nullopt;
}

std::vector<std::string> SkillGroup::skill_ids() const {
    std::vector<std::string> out;
    out.reserve(1 + members.size());
    out.push_back(lead);
    out.insert(out.end(), members.begin(), members.end());
    return out;
}

std::string canonical_group_id(const std::string& lead, std::vector<std::string> members) {
    std::sort(members.begin(), members.end());
    std::string id = lead;
    for (const auto& m : members) {
        id += "+";
        id += m;
    }
    return id;
}

const char* to_string(GroupEdgeLabel l) {
    switch (l) {
        case GroupEdgeLabel::support: return "support";
        case GroupEdgeLabel::artifact: return "artifact";
        case GroupEdgeLabel::visible_check: return "visible-check";
        case GroupEdgeLabel::fallback: return "fallback";
        case GroupEdgeLabel::incompat: return "incompat";
    }
    return "support";
}

std::optional<GroupEdgeLabel> group_edge_label_from_string(const std::string& s) {
    if (s == "support") return GroupEdgeLabel::support;
    if (s == "artifact") return GroupEdgeLabel::artifact;
    if (s == "visible-check") return GroupEdgeLabel::visible_check;
    if (s == "fallback") return GroupEdgeLabel::fallback;
    if (s == "incompat") return GroupEdgeLabel::incompat;
    return std::nullopt;
}

void GroupGraph::rebuild_incident() {
    incident.clear();
    for (std::size_t i = 0; i < edges.size(); ++i) {
        incident[edges[i].a].push_back(i);
        incident[edges[i].b].push_back(i);
    }
}

std::vector<std::string> GroupGraph::positive_neighbors(const std::string& group_id) const {
    std::vector<std::string> out;
    auto it = incident.find(group_id);
    if (it == incident.end()) return out;
    for (std::size_t idx : it->second) {
        const GroupEdge& e = edges[idx];
        if (e.label == GroupEdgeLabel::incompat || !(e.weight > 0.0)) continue;
        out.push_back(e.a == group_id ? e.b : e.a);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double GroupGraph::positive_weight_to(const std::string& group_id,
                                      const std::vector<std::string>& plan) const {
    double best = 0.0;
    auto it = incident.find(group_id);
    if (it == incident.end()) return best;
    for (std::size_t idx : it->second) {
        const GroupEdge& e = edges[idx];
        if (e.label == GroupEdgeLabel::incompat || !(e.weight > 0.0)) continue;
        const std::string& other = (e.a == group_id) ? e.b : e.a;
        if (std::find(plan.begin(), plan.end(), other) != plan.end()) {
            best = std::max(best, e.weight);
        }
    }
    return best;
}

GroupPool::GroupPool(std::vector<SkillGroup> groups) : groups_(std::move(groups)) {
    std::sort(groups_.begin(), groups_.end(), [](const SkillGroup& x, const SkillGroup& y) {
        if (x.lead != y.lead) return x.lead < y.lead;
        if (x.members.size() != y.members.size()) return x.members.size() < y.members.size();
        return x.members < y.members;
    });
    for (std::size_t i = 0; i < groups_.size(); ++i) {
        by_id_[groups_[i].id] = i;
    }
}

const SkillGroup* GroupPool::find(const std::string& id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &groups_[it->second];
}

const SkillGroup& GroupPool::at(const std::string& id) const {
    const SkillGroup* g = find(id);
    if (!g) throw std::runtime_error("unknown group id: " + id);
    return *g;
}

}  // namespace goskills
