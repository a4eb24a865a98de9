#pragma once

#include <string>
#include <vector>

#include "goskills/dictionaries.hpp"
#include "goskills/facets.hpp"
#include "goskills/library.hpp"

namespace goskills {

// Deterministic 7-field decomposition of a raw query. Each token lands in
// exactly one field.
struct QuerySchema {
    FacetSet core;
    FacetSet tech;
    FacetSet op;
    FacetSet artifact;
    FacetSet constraint;
    FacetSet failure;
    FacetSet check;

    FacetSet all() const;
    std::size_t token_count() const;
    bool has_anchors() const { return !tech.empty() || !artifact.empty(); }
    FacetSet anchors() const;  // tech plus artifact tokens
};

enum class GateMode {
    instruction_auto = 0,
    critical_override,
};

const char* to_string(GateMode m);
std::optional<GateMode> gate_mode_from_string(const std::string& s);

// Maps a raw query onto the schema using the shipped dictionaries and the
// library facet vocabulary. Stopwords and bare numbers are dropped; leftover
// content words land in `core`. Never invents tokens absent from the query.
QuerySchema extract_schema(const std::string& query, const Library& library,
                           const Dictionaries& dicts);

// Exact-match facets eligible for coverage debt: tech, artifact and constraint
// tokens, plus check tokens. Under instruction_auto only check tokens known to
// the library's check vocabulary qualify; critical_override keeps them all.
FacetSet high_confidence_facets(const QuerySchema& schema, const Library& library,
                                GateMode mode = GateMode::instruction_auto);

}  // namespace goskills
