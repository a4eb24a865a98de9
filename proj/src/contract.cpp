#include "goskills/contract.hpp"

#include <algorithm>
#include <set>

namespace goskills {

namespace {

constexpr const char* kTruncationMarker = "\n[payload truncated]";

std::string join(const std::vector<std::string>& items, const std::string& sep) {
    std::string out;
    for (const auto& s : items) {
        if (!out.empty()) out += sep;
        out += s;
    }
    return out;
}

std::vector<std::string> matched_tokens(const Skill& skill, const QuerySchema& schema) {
    std::vector<std::string> out;
    for (const auto& [tok, f] : schema.all()) {
        if (skill.facets.contains(tok)) out.push_back(tok);
    }
    return out;  // map iteration keeps these sorted
}

}  // namespace

std::string truncate_payload(const std::string& payload, std::size_t cap) {
    if (payload.size() <= cap) return payload;
    std::string marker = kTruncationMarker;
    if (cap <= marker.size()) return payload.substr(0, cap);
    std::size_t room = cap - marker.size();
    std::string head = payload.substr(0, room);
    std::size_t nl = head.rfind('\n');
    if (nl != std::string::npos && nl > 0) {
        head = head.substr(0, nl);
    }
    return head + marker;
}

ExecutionContract format_contract(const ContractInputs& in, const QuerySchema& schema,
                                  const FacetSet& high_confidence, const Library& library) {
    ExecutionContract c;

    std::set<std::string> presented_ids;
    for (const auto& p : in.presented) presented_ids.insert(p.id);

    if (in.anchor && presented_ids.count(in.anchor->lead)) {
        c.start_skill = in.anchor->lead;
        auto matched = matched_tokens(library.at(in.anchor->lead), schema);
        c.start_reason = matched.empty()
                             ? "it leads the highest-scoring selected group"
                             : "the task requires " + join(matched, ", ");
    }

    // Role lookup across the selected plan; skills presented outside any plan
    // group (backfill) fall back to the generic "support" label.
    auto role_of = [&](const std::string& id) -> std::string {
        std::vector<const SkillGroup*> groups;
        if (in.anchor) groups.push_back(in.anchor);
        for (const auto* g : in.supports) groups.push_back(g);
        for (const auto* g : groups) {
            auto it = g->roles.find(id);
            if (it != g->roles.end() && it->second != Role::anchor) {
                return to_string(it->second);
            }
        }
        return "support";
    };

    // Without a selected plan there are no roles to state; presented skills
    // then appear only under SKILLS.
    if (in.anchor || !in.supports.empty()) {
        for (const auto& p : in.presented) {
            if (p.id == c.start_skill) continue;
            SupportLine line;
            line.skill = p.id;
            line.role = role_of(p.id);
            auto matched = matched_tokens(library.at(p.id), schema);
            line.reason = matched.empty() ? "supports the anchor workflow"
                                          : "covers " + join(matched, ", ");
            c.support.push_back(std::move(line));
        }
    }

    // CHECK lists every high-confidence visible requirement, covered or not.
    c.check = high_confidence.tokens();

    // AVOID: raw negative cues of the selected groups plus stated constraints.
    std::set<std::string> avoid;
    std::vector<const SkillGroup*> plan_groups;
    if (in.anchor) plan_groups.push_back(in.anchor);
    for (const auto* g : in.supports) plan_groups.push_back(g);
    for (const auto* g : plan_groups) {
        for (const auto& id : g->skill_ids()) {
            for (const auto& cue : library.at(id).negatives) avoid.insert(cue);
        }
    }
    for (const auto& tok : schema.constraint.tokens()) {
        avoid.insert("ignoring the stated constraint: " + tok);
    }
    c.avoid.assign(avoid.begin(), avoid.end());

    c.skills = in.presented;
    c.debt = in.debt;
    return c;
}

std::string render_contract(const ExecutionContract& c) {
    std::string out;
    out += "START\n";
    if (!c.start_skill.empty()) {
        out += "Use " + c.start_skill + " first because " + c.start_reason +
               ". Inspect its source path before writing new code.\n";
    }
    out += "\nSUPPORT\n";
    if (!c.support.empty()) {
        out += "Use the following support skills only for their stated roles:\n";
        for (const auto& s : c.support) {
            out += s.skill + ": " + s.role + " -- " + s.reason + "\n";
        }
    }
    out += "\nCHECK\n";
    if (!c.check.empty()) {
        out += "Before finalizing, verify the following visible requirements:\n";
        for (const auto& item : c.check) out += item + "\n";
    }
    out += "\nAVOID\n";
    if (!c.avoid.empty()) {
        out += "Do not follow these incompatible interpretations:\n";
        for (const auto& item : c.avoid) out += item + "\n";
    }
    out += "\nSKILLS\n";
    for (const auto& p : c.skills) {
        out += "--- " + p.id + " ---\n";
        out += p.payload;
        if (p.payload.empty() || p.payload.back() != '\n') out += "\n";
    }
    out += "\nDEBT\n";
    out += c.debt.empty() ? "None" : join(c.debt, ", ");
    out += "\n";
    return out;
}

}  // namespace goskills
