#pragma once

#include <string>
#include <vector>

#include "goskills/groups.hpp"
#include "goskills/library.hpp"
#include "goskills/query.hpp"

namespace goskills {

struct SupportLine {
    std::string skill;
    std::string role;
    std::string reason;
};

struct PresentedSkill {
    std::string id;
    std::string payload;  // truncated to the payload cap
};

// Fixed-field execution contract. Field order is always START, SUPPORT, CHECK,
// AVOID, SKILLS, DEBT; only bracketed content varies.
struct ExecutionContract {
    std::string start_skill;
    std::string start_reason;
    std::vector<SupportLine> support;
    std::vector<std::string> check;
    std::vector<std::string> avoid;
    std::vector<PresentedSkill> skills;
    std::vector<std::string> debt;  // sorted facet tokens; empty renders "None"
};

// Payloads at or under the cap pass through; longer ones are cut at the last
// line boundary that leaves room for the fixed truncation marker.
std::string truncate_payload(const std::string& payload, std::size_t cap);

struct ContractInputs {
    const SkillGroup* anchor = nullptr;                // may be null
    std::vector<const SkillGroup*> supports;           // post-prune plan order
    std::vector<PresentedSkill> presented;             // bottleneck order
    std::vector<std::string> debt;                     // sorted tokens
};

ExecutionContract format_contract(const ContractInputs& in, const QuerySchema& schema,
                                  const FacetSet& high_confidence, const Library& library);

std::string render_contract(const ExecutionContract& contract);

}  // namespace goskills
