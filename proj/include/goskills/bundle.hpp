#pragma once

#include <string>

#include "goskills/dictionaries.hpp"
#include "goskills/group_builder.hpp"
#include "goskills/groups.hpp"
#include "goskills/library.hpp"

namespace goskills {

// Self-contained retrieval substrate: the dictionaries and library it was
// built from plus the group pool, group graph and inverted index. This is
// what pool.json stores; a version header pins the dictionary version and
// the edge-priority order used at build time.
struct PoolBundle {
    Dictionaries dicts;
    Library library;
    GroupPool pool;
    GroupGraph graph;
    InvertedIndex index;
};

PoolBundle make_bundle(Dictionaries dicts, Library library, BuiltPool built);

std::string serialize_bundle(const PoolBundle& bundle);
PoolBundle parse_bundle(const std::string& json_text);

void save_bundle(const PoolBundle& bundle, const std::string& path);
PoolBundle load_bundle(const std::string& path);

}  // namespace goskills
