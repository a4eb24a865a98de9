#include "goskills/query.hpp"

#include <algorithm>

namespace goskills {

FacetSet QuerySchema::all() const {
    FacetSet out;
    out.merge(core);
    out.merge(tech);
    out.merge(op);
    out.merge(artifact);
    out.merge(constraint);
    out.merge(failure);
    out.merge(check);
    return out;
}

std::size_t QuerySchema::token_count() const {
    return core.size() + tech.size() + op.size() + artifact.size() + constraint.size() +
           failure.size() + check.size();
}

FacetSet QuerySchema::anchors() const {
    FacetSet out;
    out.merge(tech);
    out.merge(artifact);
    return out;
}

const char* to_string(GateMode m) {
    return m == GateMode::instruction_auto ? "instruction_auto" : "critical_override";
}

std::optional<GateMode> gate_mode_from_string(const std::string& s) {
    if (s == "instruction_auto") return GateMode::instruction_auto;
    if (s == "critical_override") return GateMode::critical_override;
    return std::nullopt;
}

namespace {

FacetSet& field_for(QuerySchema& schema, FacetCategory cat) {
    switch (cat) {
        case FacetCategory::check: return schema.check;
        case FacetCategory::constraint: return schema.constraint;
        case FacetCategory::artifact: return schema.artifact;
        case FacetCategory::tech: return schema.tech;
        case FacetCategory::failure: return schema.failure;
        case FacetCategory::op: return schema.op;
        case FacetCategory::core: return schema.core;
    }
    return schema.core;
}

// Longest dictionary phrase starting at position i, if any.
struct PhraseHit {
    std::size_t length = 0;
    std::string token;
    FacetCategory category = FacetCategory::core;
};

std::optional<PhraseHit> match_phrase(const std::vector<std::string>& tokens, std::size_t i,
                                      const Dictionaries& dicts) {
    std::optional<PhraseHit> best;
    for (std::size_t len = 3; len >= 2; --len) {
        if (i + len > tokens.size()) continue;
        std::string key;
        for (std::size_t k = 0; k < len; ++k) {
            if (k) key.push_back(' ');
            key += tokens[i + k];
        }
        for (const auto& [cat, phrases] : dicts.phrases) {
            auto it = phrases.find(key);
            if (it != phrases.end()) {
                if (!best || len > best->length ||
                    (len == best->length &&
                     static_cast<int>(cat) < static_cast<int>(best->category))) {
                    best = PhraseHit{len, it->second, cat};
                }
            }
        }
        if (best && best->length == len) break;
    }
    return best;
}

}  // namespace

QuerySchema extract_schema(const std::string& query, const Library& library,
                           const Dictionaries& dicts) {
    QuerySchema schema;
    std::vector<std::string> tokens = tokenize(query);

    // Positions of requirement markers ("must", "requires", ...). A format or
    // technology token within two positions after one reads as a stated
    // constraint rather than a plain mention.
    std::vector<bool> is_marker_pos(tokens.size(), false);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        is_marker_pos[i] = dicts.is_marker(tokens[i]);
    }
    auto near_marker = [&](std::size_t i) {
        for (std::size_t back = 1; back <= 2; ++back) {
            if (i >= back && is_marker_pos[i - back]) return true;
        }
        return false;
    };

    // A token may occur several times under different readings ("json output
    // must be json"); it is filed once, under its highest-precedence category.
    std::map<std::string, Facet> resolved;
    auto file = [&](const std::string& token, FacetCategory category, bool aliased) {
        auto it = resolved.find(token);
        if (it == resolved.end()) {
            resolved.emplace(token, Facet{token, category, aliased});
            return;
        }
        if (static_cast<int>(category) < static_cast<int>(it->second.category)) {
            it->second.category = category;
        }
        if (!aliased) it->second.from_alias = false;
    };

    std::size_t i = 0;
    while (i < tokens.size()) {
        if (auto hit = match_phrase(tokens, i, dicts)) {
            file(hit->token, hit->category, false);
            i += hit->length;
            continue;
        }
        const std::string& raw = tokens[i];
        if (dicts.is_marker(raw) || dicts.is_stopword(raw)) {
            ++i;
            continue;
        }
        auto [canon, aliased] = dicts.apply_alias(raw);
        if (dicts.is_stopword(canon)) {
            ++i;
            continue;
        }
        std::optional<FacetCategory> cat = dicts.category_of(canon);
        if (!cat) cat = library.vocabulary_category(canon);
        FacetCategory category = cat.value_or(FacetCategory::core);
        if (near_marker(i) &&
            (category == FacetCategory::artifact || category == FacetCategory::tech)) {
            category = FacetCategory::constraint;
        }
        file(canon, category, aliased);
        ++i;
    }
    for (const auto& [token, facet] : resolved) {
        field_for(schema, facet.category).insert(facet);
    }
    return schema;
}

FacetSet high_confidence_facets(const QuerySchema& schema, const Library& library,
                                GateMode mode) {
    FacetSet out;
    out.merge(schema.tech);
    out.merge(schema.artifact);
    out.merge(schema.constraint);
    for (const auto& [tok, f] : schema.check) {
        if (mode == GateMode::critical_override || library.check_vocabulary_contains(tok)) {
            out.insert(f);
        }
    }
    return out;
}

}  // namespace goskills
