#include "goskills/library.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace goskills {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

bool Skill::is_generic() const { return facets.contains("generic"); }

int edge_priority(EdgeType t) {
    switch (t) {
        case EdgeType::dependency: return 0;
        case EdgeType::workflow: return 1;
        case EdgeType::artifact: return 2;
        case EdgeType::visible_check: return 3;
        case EdgeType::fallback: return 4;
        case EdgeType::alternative: return 5;
        case EdgeType::semantic: return 6;
    }
    return 6;
}

const char* to_string(EdgeType t) {
    switch (t) {
        case EdgeType::dependency: return "dependency";
        case EdgeType::workflow: return "workflow";
        case EdgeType::artifact: return "artifact";
        case EdgeType::visible_check: return "visible-check";
        case EdgeType::fallback: return "fallback";
        case EdgeType::alternative: return "alternative";
        case EdgeType::semantic: return "semantic";
    }
    return "semantic";
}

std::optional<EdgeType> edge_type_from_string(const std::string& s) {
    if (s == "dependency") return EdgeType::dependency;
    if (s == "workflow") return EdgeType::workflow;
    if (s == "artifact") return EdgeType::artifact;
    if (s == "visible-check") return EdgeType::visible_check;
    if (s == "fallback") return EdgeType::fallback;
    if (s == "alternative") return EdgeType::alternative;
    if (s == "semantic") return EdgeType::semantic;
    return std::nullopt;
}

void TypedSkillGraph::rebuild_incident() {
    incident.clear();
    for (std::size_t i = 0; i < edges.size(); ++i) {
        incident[edges[i].src].push_back(i);
        incident[edges[i].dst].push_back(i);
    }
}

std::vector<std::size_t> TypedSkillGraph::edges_of(const std::string& skill_id) const {
    auto it = incident.find(skill_id);
    if (it == incident.end()) return {};
    return it->second;
}

const SkillEdge* TypedSkillGraph::best_edge_between(const std::string& a,
                                                    const std::string& b) const {
    const SkillEdge* best = nullptr;
    for (std::size_t idx : edges_of(a)) {
        const SkillEdge& e = edges[idx];
        if (!((e.src == a && e.dst == b) || (e.src == b && e.dst == a))) continue;
        if (!best || e.weight > best->weight ||
            (e.weight == best->weight && edge_priority(e.type) < edge_priority(best->type))) {
            best = &e;
        }
    }
    return best;
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("missing " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// First line of the description counts as its documentation header.
std::string description_header(const std::string& description) {
    auto nl = description.find('\n');
    return nl == std::string::npos ? description : description.substr(0, nl);
}

void add_token(FacetSet& out, const Dictionaries& dicts, const std::string& raw,
               FacetCategory fallback, bool skip_stopwords) {
    std::string tok = normalize_token(raw);
    if (tok.empty()) return;
    auto [canon, aliased] = dicts.apply_alias(tok);
    if (skip_stopwords && (dicts.is_stopword(canon) || dicts.is_marker(canon))) return;
    FacetCategory cat = dicts.category_of(canon).value_or(fallback);
    out.insert({canon, cat, aliased});
}

}  // namespace

FacetSet extract_skill_facets(const Skill& skill, const Dictionaries& dicts) {
    FacetSet out;
    add_token(out, dicts, skill.name, FacetCategory::core, false);
    for (const auto& tag : skill.tags) {
        add_token(out, dicts, tag, FacetCategory::core, false);
    }
    for (const auto& word : tokenize(description_header(skill.description))) {
        add_token(out, dicts, word, FacetCategory::core, true);
    }
    for (const auto& art : skill.artifacts) {
        add_token(out, dicts, art, FacetCategory::artifact, false);
    }
    for (const auto& chk : skill.checks) {
        // Multi-word check cues collapse to one hyphenated token.
        add_token(out, dicts, chk, FacetCategory::check, false);
    }
    return out;
}

void extract_skill_facets(Skill& skill, const Dictionaries& dicts) {
    skill.facets = extract_skill_facets(static_cast<const Skill&>(skill), dicts);
    skill.negative_facets = FacetSet{};
    for (const auto& cue : skill.negatives) {
        // Keep both the whole cue and its content words so single-token
        // negatives ("xlsx") and sentence cues both match required facets.
        add_token(skill.negative_facets, dicts, cue, FacetCategory::core, false);
        for (const auto& word : tokenize(cue)) {
            add_token(skill.negative_facets, dicts, word, FacetCategory::core, true);
        }
    }
}

Library::Library(std::vector<Skill> skills, TypedSkillGraph graph)
    : skills_(std::move(skills)), graph_(std::move(graph)) {
    std::sort(skills_.begin(), skills_.end(),
              [](const Skill& a, const Skill& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < skills_.size(); ++i) {
        by_id_[skills_[i].id] = i;
        for (const auto& [tok, facet] : skills_[i].facets) {
            ++facet_df_[tok];
            facet_skills_[tok].push_back(skills_[i].id);
            auto it = vocab_category_.find(tok);
            if (it == vocab_category_.end() ||
                static_cast<int>(facet.category) < static_cast<int>(it->second)) {
                vocab_category_[tok] = facet.category;
            }
            if (facet.category == FacetCategory::check) check_vocab_.insert(tok);
        }
    }
    graph_.rebuild_incident();
}

const Skill* Library::find(const std::string& id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &skills_[it->second];
}

const Skill& Library::at(const std::string& id) const {
    const Skill* s = find(id);
    if (!s) throw std::runtime_error("unknown skill id: " + id);
    return *s;
}

std::optional<FacetCategory> Library::vocabulary_category(const std::string& token) const {
    auto it = vocab_category_.find(token);
    if (it == vocab_category_.end()) return std::nullopt;
    return it->second;
}

bool Library::check_vocabulary_contains(const std::string& token) const {
    return check_vocab_.count(token) > 0;
}

Library parse_library(const std::string& skills_json, const std::string& edges_json,
                      const Dictionaries& dicts) {
    json sk, ed;
    try {
        sk = json::parse(skills_json);
        ed = json::parse(edges_json);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("malformed JSON: ") + e.what());
    }
    if (!sk.is_array()) throw std::runtime_error("skills.json: expected an array");
    if (!ed.is_array()) throw std::runtime_error("edges.json: expected an array");

    std::vector<Skill> skills;
    std::set<std::string> seen;
    for (const auto& item : sk) {
        Skill s;
        s.id = item.at("id").get<std::string>();
        if (s.id.empty()) throw std::runtime_error("skill with empty id");
        if (!seen.insert(s.id).second) {
            throw std::runtime_error("duplicate skill id: " + s.id);
        }
        s.name = item.value("name", s.id);
        s.description = item.value("description", std::string{});
        s.payload = item.value("payload", std::string{});
        if (s.payload.empty()) {
            throw std::runtime_error("skill " + s.id + " has an empty payload");
        }
        auto strings = [&](const char* key) {
            std::vector<std::string> out;
            if (item.contains(key)) {
                for (const auto& v : item.at(key)) out.push_back(v.get<std::string>());
            }
            return out;
        };
        s.tags = strings("tags");
        s.artifacts = strings("artifacts");
        s.checks = strings("checks");
        s.negatives = strings("negatives");
        extract_skill_facets(s, dicts);
        skills.push_back(std::move(s));
    }

    TypedSkillGraph graph;
    for (const auto& item : ed) {
        if (!item.is_array() || item.size() != 4) {
            throw std::runtime_error("edges.json: each edge must be [src, dst, type, weight]");
        }
        SkillEdge e;
        e.src = item.at(0).get<std::string>();
        e.dst = item.at(1).get<std::string>();
        std::string type_s = item.at(2).get<std::string>();
        auto type = edge_type_from_string(type_s);
        if (!type) throw std::runtime_error("unknown edge type: " + type_s);
        e.type = *type;
        e.weight = item.at(3).get<double>();
        if (!seen.count(e.src)) throw std::runtime_error("edge references unknown skill: " + e.src);
        if (!seen.count(e.dst)) throw std::runtime_error("edge references unknown skill: " + e.dst);
        if (e.src == e.dst) throw std::runtime_error("self-loop edge on skill: " + e.src);
        if (!(e.weight > 0.0 && e.weight <= 1.0)) {
            throw std::runtime_error("edge weight outside (0,1] on " + e.src + " -> " + e.dst);
        }
        graph.edges.push_back(std::move(e));
    }
    return Library(std::move(skills), std::move(graph));
}

Library load_library(const std::string& dir, const Dictionaries& dicts) {
    std::string skills = read_file(dir + "/skills.json");
    std::string edges = read_file(dir + "/edges.json");
    return parse_library(skills, edges, dicts);
}

std::string serialize_skills(const Library& lib) {
    ordered_json arr = ordered_json::array();
    for (const Skill& s : lib.skills()) {
        ordered_json o;
        o["id"] = s.id;
        o["name"] = s.name;
        o["tags"] = s.tags;
        o["description"] = s.description;
        o["payload"] = s.payload;
        o["artifacts"] = s.artifacts;
        o["checks"] = s.checks;
        o["negatives"] = s.negatives;
        arr.push_back(std::move(o));
    }
    return arr.dump(2) + "\n";
}

std::string serialize_edges(const Library& lib) {
    ordered_json arr = ordered_json::array();
    for (const SkillEdge& e : lib.graph().edges) {
        arr.push_back(ordered_json::array({e.src, e.dst, to_string(e.type), e.weight}));
    }
    return arr.dump(2) + "\n";
}

}  // namespace goskills
