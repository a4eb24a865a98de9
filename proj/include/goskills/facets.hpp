#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace goskills {

// Facet categories, ordered by assignment precedence (lower value wins when a
// token is recognized under several categories).
enum class FacetCategory {
    check = 0,
    constraint,
    artifact,
    tech,
    failure,
    op,
    core,
};

const char* to_string(FacetCategory c);
std::optional<FacetCategory> facet_category_from_string(const std::string& s);

struct Facet {
    std::string token;
    FacetCategory category = FacetCategory::core;
    bool from_alias = false;  // token was rewritten by the alias dictionary
};

// Set of normalized facet tokens. Keyed by token; when the same token arrives
// under two categories the higher-precedence category is kept.
class FacetSet {
public:
    void insert(Facet f);
    void merge(const FacetSet& other);

    bool contains(const std::string& token) const { return facets_.count(token) > 0; }
    const Facet* find(const std::string& token) const;

    bool empty() const { return facets_.empty(); }
    std::size_t size() const { return facets_.size(); }

    std::vector<std::string> tokens() const;
    std::vector<std::string> tokens(FacetCategory c) const;

    // Tokens present in this set but absent from `other`.
    std::vector<std::string> difference(const FacetSet& other) const;
    std::size_t intersection_size(const FacetSet& other) const;

    auto begin() const { return facets_.begin(); }
    auto end() const { return facets_.end(); }

private:
    std::map<std::string, Facet> facets_;
};

// Token normalization used everywhere facets are produced: ASCII lowercase,
// trim, underscore/space to hyphen, leading dots stripped.
std::string normalize_token(const std::string& raw);

// Splits free text into normalized tokens. Dotted extensions survive as single
// tokens before dot-stripping ("report in .pdf" yields "pdf").
std::vector<std::string> tokenize(const std::string& text);

}  // namespace goskills
