#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "goskills/dictionaries.hpp"
#include "goskills/facets.hpp"

namespace goskills {

struct Skill {
    std::string id;
    std::string name;
    std::vector<std::string> tags;
    std::string description;
    std::string payload;
    std::vector<std::string> artifacts;
    std::vector<std::string> checks;
    std::vector<std::string> negatives;

    FacetSet facets;           // normalized positive facets
    FacetSet negative_facets;  // normalized negative-applicability tokens

    bool is_generic() const;  // carries the "generic" marker facet
};

enum class EdgeType {
    dependency = 0,
    workflow,
    artifact,
    visible_check,
    fallback,
    alternative,
    semantic,
};

// Priority used when edges compete (dependency strongest). Semantic edges sort
// last and never drive roles or neighborhoods.
int edge_priority(EdgeType t);
const char* to_string(EdgeType t);
std::optional<EdgeType> edge_type_from_string(const std::string& s);

struct SkillEdge {
    std::string src;
    std::string dst;
    EdgeType type = EdgeType::semantic;
    double weight = 0.0;
};

struct TypedSkillGraph {
    std::vector<SkillEdge> edges;
    // skill id -> indices of edges touching it (either endpoint)
    std::unordered_map<std::string, std::vector<std::size_t>> incident;

    void rebuild_incident();
    std::vector<std::size_t> edges_of(const std::string& skill_id) const;
    // Best edge between two skills in either direction: max weight, then
    // higher priority, then src/dst order. Returns nullptr when disconnected.
    const SkillEdge* best_edge_between(const std::string& a, const std::string& b) const;
};

class Library {
public:
    Library() = default;
    Library(std::vector<Skill> skills, TypedSkillGraph graph);

    const std::vector<Skill>& skills() const { return skills_; }
    const TypedSkillGraph& graph() const { return graph_; }
    std::size_t size() const { return skills_.size(); }

    const Skill* find(const std::string& id) const;
    const Skill& at(const std::string& id) const;
    bool contains(const std::string& id) const { return by_id_.count(id) > 0; }

    // facet token -> number of skills carrying it
    const std::map<std::string, std::size_t>& facet_frequency() const { return facet_df_; }
    // facet token -> ids of skills carrying it (sorted)
    const std::map<std::string, std::vector<std::string>>& facet_to_skills() const {
        return facet_skills_;
    }
    // Best-precedence category observed for a library facet token.
    std::optional<FacetCategory> vocabulary_category(const std::string& token) const;
    bool check_vocabulary_contains(const std::string& token) const;

private:
    std::vector<Skill> skills_;  // sorted by id
    TypedSkillGraph graph_;
    std::unordered_map<std::string, std::size_t> by_id_;
    std::map<std::string, std::size_t> facet_df_;
    std::map<std::string, std::vector<std::string>> facet_skills_;
    std::map<std::string, FacetCategory> vocab_category_;
    std::set<std::string> check_vocab_;
};

// Normalizes one skill's metadata into its positive and negative facet sets.
void extract_skill_facets(Skill& skill, const Dictionaries& dicts);
FacetSet extract_skill_facets(const Skill& skill, const Dictionaries& dicts);

// Loads skills.json + edges.json from a directory, normalizes facets and
// validates the graph. Throws std::runtime_error on any malformed input.
Library load_library(const std::string& dir, const Dictionaries& dicts);

// Parses from raw JSON documents (same validation as load_library).
Library parse_library(const std::string& skills_json, const std::string& edges_json,
                      const Dictionaries& dicts);

// Stable re-serialization of the on-disk formats.
std::string serialize_skills(const Library& lib);
std::string serialize_edges(const Library& lib);

}  // namespace goskills
