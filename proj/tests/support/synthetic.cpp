#include "support/synthetic.hpp"

#include <json.hpp>

namespace goskills::testing {

namespace {

const char* kOps[] = {"detect", "parse", "extract", "convert", "validate",
                      "merge",  "sort",  "render",  "compare", "summarize"};
const char* kArtifacts[] = {"pdf", "xlsx", "json", "csv", "md", "html", "png", "yaml"};
const char* kTechs[] = {"threejs", "lean4", "numpy", "pandas", "regex", "sql", "docker"};
const char* kEdgeTypes[] = {"dependency", "workflow", "artifact",
                            "visible-check", "fallback", "alternative", "semantic"};
const char* kNouns[] = {"ledger", "beacon", "lattice", "rotor",  "quarry", "sable",
                        "tundra", "vortex", "willow",  "zenith", "copper", "dagger",
                        "ember",  "fjord",  "garnet",  "harbor", "indigo", "jasper"};

std::string pad3(int n) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%03d", n);
    return buf;
}

}  // namespace

Library make_synthetic_library(const SyntheticOptions& options, const Dictionaries& dicts) {
    std::mt19937 rng(options.seed);
    auto pick = [&](auto& pool) { return pool[rng() % std::size(pool)]; };

    nlohmann::ordered_json skills = nlohmann::ordered_json::array();
    std::vector<std::string> ids;
    int clusters = std::max(1, (options.num_skills + options.cluster_size - 1) /
                                    options.cluster_size);

    for (int i = 0; i < options.num_skills; ++i) {
        int cluster = i / options.cluster_size;
        std::string noun = std::string(kNouns[(cluster * 5 + static_cast<int>(rng() % 5)) %
                                              std::size(kNouns)]) +
                           pad3(cluster);
        std::string op = pick(kOps);
        std::string id = "sk" + pad3(i) + "-" + op + "-" + noun;
        ids.push_back(id);

        nlohmann::ordered_json s;
        s["id"] = id;
        s["name"] = op + "-" + noun;
        nlohmann::ordered_json tags = nlohmann::ordered_json::array();
        tags.push_back(noun);
        if (rng() % 2) tags.push_back(pick(kOps));
        if (rng() % 4 == 0) tags.push_back(pick(kTechs));
        s["tags"] = std::move(tags);
        s["description"] = std::string(op) + " the " + noun + " records.";

        std::string payload = "# " + id + "\n";
        std::size_t target = 200 + rng() % static_cast<std::size_t>(options.max_payload - 200);
        while (payload.size() < target) {
            payload += "Step for " + noun + ": " + pick(kOps) + " then verify the result.\n";
        }
        s["payload"] = payload;

        nlohmann::ordered_json artifacts = nlohmann::ordered_json::array();
        if (rng() % 3 != 0) artifacts.push_back(std::string(".") + pick(kArtifacts));
        if (rng() % 5 == 0) artifacts.push_back(pick(kArtifacts));
        s["artifacts"] = std::move(artifacts);

        nlohmann::ordered_json checks = nlohmann::ordered_json::array();
        if (rng() % 4 == 0) checks.push_back("output format");
        s["checks"] = std::move(checks);

        nlohmann::ordered_json negatives = nlohmann::ordered_json::array();
        if (rng() % 6 == 0) negatives.push_back(std::string("not for ") + pick(kArtifacts));
        s["negatives"] = std::move(negatives);

        skills.push_back(std::move(s));
    }

    nlohmann::ordered_json edges = nlohmann::ordered_json::array();
    std::set<std::pair<int, int>> used;
    for (int i = 0; i < options.num_skills; ++i) {
        int cluster = i / options.cluster_size;
        int lo = cluster * options.cluster_size;
        int hi = std::min(options.num_skills, lo + options.cluster_size);
        int degree = static_cast<int>(rng() % 4);
        for (int d = 0; d < degree; ++d) {
            int j = lo + static_cast<int>(rng() % std::max(1, hi - lo));
            if (j == i) continue;
            if (!used.insert({std::min(i, j), std::max(i, j)}).second) continue;
            double w = 0.05 + 0.01 * static_cast<double>(rng() % 96);
            edges.push_back(nlohmann::ordered_json::array(
                {ids[i], ids[j], kEdgeTypes[rng() % std::size(kEdgeTypes)], w}));
        }
    }
    (void)clusters;
    return parse_library(skills.dump(), edges.dump(), dicts);
}

std::string make_synthetic_query(const Library& library, std::mt19937& rng) {
    if (library.size() == 0) return "nothing to see";
    const Skill& pivot = library.skills()[rng() % library.size()];
    std::string query;
    std::vector<std::string> toks = pivot.facets.tokens();
    int take = 2 + static_cast<int>(rng() % 3);
    for (int i = 0; i < take && !toks.empty(); ++i) {
        query += toks[rng() % toks.size()] + " ";
    }
    if (rng() % 3 == 0) {
        query += "and the rotor output ";
    }
    if (rng() % 3 == 0) {
        query += std::string("must be ") + kArtifacts[rng() % std::size(kArtifacts)] + " ";
    }
    if (rng() % 4 == 0) {
        query += "output format matters";
    }
    return query;
}

}  // namespace goskills::testing
