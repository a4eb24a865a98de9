#include "goskills/facets.hpp"

#include <algorithm>
#include <cctype>

namespace goskills {

const char* to_string(FacetCategory c) {
    switch (c) {
        case FacetCategory::check: return "check";
        case FacetCategory::constraint: return "constraint";
        case FacetCategory::artifact: return "artifact";
        case FacetCategory::tech: return "tech";
        case FacetCategory::failure: return "failure";
        case FacetCategory::op: return "op";
        case FacetCategory::core: return "core";
    }
    return "core";
}

std::optional<FacetCategory> facet_category_from_string(const std::string& s) {
    if (s == "check") return FacetCategory::check;
    if (s == "constraint") return FacetCategory::constraint;
    if (s == "artifact") return FacetCategory::artifact;
    if (s == "tech") return FacetCategory::tech;
    if (s == "failure") return FacetCategory::failure;
    if (s == "op") return FacetCategory::op;
    if (s == "core") return FacetCategory::core;
    return std::nullopt;
}

void FacetSet::insert(Facet f) {
    if (f.token.empty()) return;
    auto it = facets_.find(f.token);
    if (it == facets_.end()) {
        facets_.emplace(f.token, std::move(f));
        return;
    }
    // Keep the higher-precedence category; an exact (non-alias) sighting wins
    // over an alias-derived one.
    if (static_cast<int>(f.category) < static_cast<int>(it->second.category)) {
        it->second.category = f.category;
    }
    if (!f.from_alias) {
        it->second.from_alias = false;
    }
}

void FacetSet::merge(const FacetSet& other) {
    for (const auto& [tok, f] : other.facets_) {
        insert(f);
    }
}

const Facet* FacetSet::find(const std::string& token) const {
    auto it = facets_.find(token);
    return it == facets_.end() ? nullptr : &it->second;
}

std::vector<std::string> FacetSet::tokens() const {
    std::vector<std::string> out;
    out.reserve(facets_.size());
    for (const auto& [tok, f] : facets_) out.push_back(tok);
    return out;
}

std::vector<std::string> FacetSet::tokens(FacetCategory c) const {
    std::vector<std::string> out;
    for (const auto& [tok, f] : facets_) {
        if (f.category == c) out.push_back(tok);
    }
    return out;
}

std::vector<std::string> FacetSet::difference(const FacetSet& other) const {
    std::vector<std::string> out;
    for (const auto& [tok, f] : facets_) {
        if (!other.contains(tok)) out.push_back(tok);
    }
    return out;
}

std::size_t FacetSet::intersection_size(const FacetSet& other) const {
    std::size_t n = 0;
    for (const auto& [tok, f] : facets_) {
        if (other.contains(tok)) ++n;
    }
    return n;
}

std::string normalize_token(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    for (char ch : raw) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (std::isupper(c)) {
            out.push_back(static_cast<char>(std::tolower(c)));
        } else if (c == '_' || std::isspace(c)) {
            out.push_back('-');
        } else {
            out.push_back(ch);
        }
    }
    // Trim hyphens and dots created by surrounding whitespace / extension dots.
    std::size_t b = 0, e = out.size();
    while (b < e && (out[b] == '-' || out[b] == '.')) ++b;
    while (e > b && (out[e - 1] == '-' || out[e - 1] == '.')) --e;
    return out.substr(b, e - b);
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) {
            std::string tok = normalize_token(cur);
            // Purely numeric or emptied tokens carry no facet signal.
            bool all_digits = !tok.empty() &&
                              std::all_of(tok.begin(), tok.end(), [](unsigned char c) {
                                  return std::isdigit(c) || c == '.' || c == '-';
                              });
            if (!tok.empty() && !all_digits) out.push_back(tok);
            cur.clear();
        }
    };
    for (char ch : text) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.') {
            cur.push_back(ch);
        } else {
            flush();
        }
    }
    flush();
    return out;
}

}  // namespace goskills
