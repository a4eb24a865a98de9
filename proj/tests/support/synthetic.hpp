#pragma once

#include <random>
#include <string>

#include "goskills/dictionaries.hpp"
#include "goskills/library.hpp"

namespace goskills::testing {

struct SyntheticOptions {
    int num_skills = 12;
    std::uint32_t seed = 1;
    // Cluster-local vocabulary keeps per-facet document frequency roughly
    // constant as the library grows, so the activated neighborhood stays
    // fixed-size at any scale.
    int cluster_size = 8;
    int max_payload = 2600;
};

// Deterministic random skill library: clustered facet vocabulary, typed edges
// mostly within clusters, occasional checks and negative cues.
Library make_synthetic_library(const SyntheticOptions& options, const Dictionaries& dicts);

// A query built from one random skill's facets plus noise; sometimes carries a
// "must be <artifact>" constraint.
std::string make_synthetic_query(const Library& library, std::mt19937& rng);

}  // namespace goskills::testing
