#pragma once

#include <string>

#include "goskills/bundle.hpp"
#include "goskills/dictionaries.hpp"
#include "goskills/group_builder.hpp"
#include "goskills/library.hpp"

namespace goskills::testing {

inline std::string source_dir() { return GOSKILLS_SOURCE_DIR; }
inline std::string fixture_library_dir() { return source_dir() + "/data/fixtures/library"; }
inline std::string gate_fixture_dir() { return source_dir() + "/data/fixtures/gate"; }

inline const Dictionaries& dicts() {
    static Dictionaries d = default_dictionaries();
    return d;
}

// The six-skill invoice fixture, loaded once.
inline const Library& fixture_library() {
    static Library lib = load_library(fixture_library_dir(), dicts());
    return lib;
}

inline const PoolBundle& fixture_bundle() {
    static PoolBundle bundle = [] {
        Library lib = load_library(fixture_library_dir(), dicts());
        BuiltPool built = build_pool(lib, dicts());
        return make_bundle(dicts(), std::move(lib), std::move(built));
    }();
    return bundle;
}

inline const PoolBundle& gate_bundle() {
    static PoolBundle bundle = [] {
        Library lib = load_library(gate_fixture_dir() + "/library", dicts());
        BuiltPool built = build_pool(lib, dicts());
        return make_bundle(dicts(), std::move(lib), std::move(built));
    }();
    return bundle;
}

inline const std::string kInvoiceQuery =
    "detect fraudulent invoices across pdf and xlsx with fuzzy matching";

}  // namespace goskills::testing
