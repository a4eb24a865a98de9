#include "goskills/bundle.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace goskills {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kFormatVersion = 1;

const char* kEdgePriorityOrder[] = {"dependency", "workflow",    "artifact",
                                    "visible-check", "fallback", "alternative"};

}  // namespace

PoolBundle make_bundle(Dictionaries dicts, Library library, BuiltPool built) {
    PoolBundle b;
    b.dicts = std::move(dicts);
    b.library = std::move(library);
    b.pool = std::move(built.pool);
    b.graph = std::move(built.graph);
    b.index = std::move(built.index);
    return b;
}

std::string serialize_bundle(const PoolBundle& bundle) {
    ordered_json j;
    j["version"]["format"] = kFormatVersion;
    j["version"]["dictionaries"] = bundle.dicts.version;
    ordered_json prio = ordered_json::array();
    for (const char* name : kEdgePriorityOrder) prio.push_back(name);
    j["version"]["edge_priority"] = std::move(prio);

    j["dictionaries"]["alias"] = ordered_json::parse(bundle.dicts.raw_alias_json);
    j["dictionaries"]["categories"] = ordered_json::parse(bundle.dicts.raw_categories_json);
    j["dictionaries"]["exclusions"] = ordered_json::parse(bundle.dicts.raw_exclusions_json);

    j["skills"] = ordered_json::parse(serialize_skills(bundle.library));
    j["edges"] = ordered_json::parse(serialize_edges(bundle.library));

    ordered_json groups = ordered_json::array();
    for (const SkillGroup& g : bundle.pool.groups()) {
        ordered_json o;
        o["id"] = g.id;
        o["lead"] = g.lead;
        o["members"] = g.members;
        ordered_json roles;
        for (const auto& [id, role] : g.roles) roles[id] = to_string(role);
        o["roles"] = std::move(roles);
        o["prior"] = g.prior;
        o["warnings"] = g.warnings;
        groups.push_back(std::move(o));
    }
    j["groups"] = std::move(groups);

    ordered_json edges = ordered_json::array();
    for (const GroupEdge& e : bundle.graph.edges) {
        edges.push_back(ordered_json::array({e.a, e.b, to_string(e.label), e.weight}));
    }
    j["group_edges"] = std::move(edges);

    j["index"]["by_skill"] = bundle.index.by_skill;
    j["index"]["by_facet"] = bundle.index.by_facet;
    return j.dump(2) + "\n";
}

PoolBundle parse_bundle(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("malformed pool JSON: ") + e.what());
    }
    if (j.at("version").at("format").get<int>() != kFormatVersion) {
        throw std::runtime_error("unsupported pool format version");
    }

    PoolBundle b;
    b.dicts = parse_dictionaries(j.at("dictionaries").at("alias").dump(),
                                 j.at("dictionaries").at("categories").dump(),
                                 j.at("dictionaries").at("exclusions").dump());
    b.library = parse_library(j.at("skills").dump(), j.at("edges").dump(), b.dicts);

    std::vector<SkillGroup> groups;
    for (const auto& o : j.at("groups")) {
        SkillGroup g;
        g.id = o.at("id").get<std::string>();
        g.lead = o.at("lead").get<std::string>();
        for (const auto& m : o.at("members")) g.members.push_back(m.get<std::string>());
        for (auto it = o.at("roles").begin(); it != o.at("roles").end(); ++it) {
            auto role = role_from_string(it.value().get<std::string>());
            if (!role) throw std::runtime_error("unknown role in pool: " + it.value().dump());
            g.roles[it.key()] = *role;
        }
        g.prior = o.at("prior").get<double>();
        for (const auto& w : o.at("warnings")) g.warnings.push_back(w.get<std::string>());
        if (!b.library.contains(g.lead)) {
            throw std::runtime_error("pool group references unknown lead: " + g.lead);
        }
        for (const auto& m : g.members) {
            if (!b.library.contains(m)) {
                throw std::runtime_error("pool group references unknown member: " + m);
            }
        }
        // Facets and topology are derivable, so the file stays lean.
        collect_group_topology(g, b.library.graph());
        extract_group_facets(g, b.library);
        groups.push_back(std::move(g));
    }
    b.pool = GroupPool(std::move(groups));

    for (const auto& e : j.at("group_edges")) {
        GroupEdge ge;
        ge.a = e.at(0).get<std::string>();
        ge.b = e.at(1).get<std::string>();
        auto label = group_edge_label_from_string(e.at(2).get<std::string>());
        if (!label) throw std::runtime_error("unknown group edge label in pool");
        ge.label = *label;
        ge.weight = e.at(3).get<double>();
        b.graph.edges.push_back(std::move(ge));
    }
    b.graph.rebuild_incident();

    for (auto it = j.at("index").at("by_skill").begin(); it != j.at("index").at("by_skill").end();
         ++it) {
        b.index.by_skill[it.key()] = it.value().get<std::vector<std::string>>();
    }
    for (auto it = j.at("index").at("by_facet").begin(); it != j.at("index").at("by_facet").end();
         ++it) {
        b.index.by_facet[it.key()] = it.value().get<std::vector<std::string>>();
    }
    return b;
}

void save_bundle(const PoolBundle& bundle, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << serialize_bundle(bundle);
}

PoolBundle load_bundle(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open pool: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_bundle(ss.str());
}

}  // namespace goskills
