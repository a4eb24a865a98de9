#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "goskills/facets.hpp"

namespace goskills {

// Fixed normalization and categorization dictionaries. These are versioned
// data, shipped both as repo files (data/dictionaries/*.json) and as embedded
// defaults that byte-match the files; a test pins the two together.
struct Dictionaries {
    std::string version;

    // Source documents, kept verbatim so a pool bundle can embed exactly the
    // dictionaries it was built with.
    std::string raw_alias_json;
    std::string raw_categories_json;
    std::string raw_exclusions_json;

    // variant token -> canonical token
    std::map<std::string, std::string> aliases;

    // normalized phrase ("output format") -> emitted token ("output-format");
    // per category. Phrases are matched longest-first before single tokens.
    std::map<FacetCategory, std::map<std::string, std::string>> phrases;

    // single token -> category
    std::map<std::string, FacetCategory> token_categories;

    std::set<std::string> stopwords;
    std::set<std::string> requirement_markers;

    // mutually exclusive facet pairs (stored canonically, first < second)
    std::set<std::pair<std::string, std::string>> exclusive_pairs;

    // Applies the alias map; returns the canonical token and whether it changed.
    std::pair<std::string, bool> apply_alias(const std::string& token) const;

    bool is_stopword(const std::string& token) const { return stopwords.count(token) > 0; }
    bool is_marker(const std::string& token) const { return requirement_markers.count(token) > 0; }
    bool are_exclusive(const std::string& a, const std::string& b) const;

    // Category for a single token from the shipped dictionaries, if any.
    std::optional<FacetCategory> category_of(const std::string& token) const;
};

// Embedded defaults (identical to the shipped data files).
Dictionaries default_dictionaries();

// Loads from a directory holding alias.json, categories.json, exclusions.json.
Dictionaries load_dictionaries(const std::string& dir);

// Parses from raw JSON strings (used by both loaders and the pool bundle).
Dictionaries parse_dictionaries(const std::string& alias_json,
                                const std::string& categories_json,
                                const std::string& exclusions_json);

// Raw embedded JSON documents.
const std::string& embedded_alias_json();
const std::string& embedded_categories_json();
const std::string& embedded_exclusions_json();

}  // namespace goskills
