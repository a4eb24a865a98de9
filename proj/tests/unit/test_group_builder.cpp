#include <doctest.h>

#include <set>

#include "goskills/bundle.hpp"
#include "goskills/group_builder.hpp"
#include "support/fixtures.hpp"

using namespace goskills;
using goskills::testing::dicts;

TEST_CASE("typed neighborhood of the fixture hub orders by weight") {
    const Library& lib = testing::fixture_library();

    SUBCASE("cap 3 picks the three strongest neighbors") {
        auto n = typed_neighborhood("fuzzy-match", lib.graph(), 3);
        CHECK(n == std::vector<std::string>{"schema-check", "pdf-reading", "xlsx"});
    }
    SUBCASE("cap 1 is a prefix of the cap-3 result") {
        auto n = typed_neighborhood("fuzzy-match", lib.graph(), 1);
        CHECK(n == std::vector<std::string>{"schema-check"});
    }
    SUBCASE("isolated skill has no neighbors") {
        Library iso = parse_library(R"([{"id":"lone","payload":"p"}])", "[]", dicts());
        CHECK(typed_neighborhood("lone", iso.graph(), 3).empty());
    }
    SUBCASE("semantic edges do not join neighborhoods") {
        Library two = parse_library(R"([{"id":"a","payload":"p"},{"id":"b","payload":"p"}])",
                                    R"([["a","b","semantic",0.9]])", dicts());
        CHECK(typed_neighborhood("a", two.graph(), 3).empty());
    }
}

TEST_CASE("group enumeration emits singleton, pairs, and justified triples") {
    const Library& lib = testing::fixture_library();

    SUBCASE("empty neighborhood yields exactly the singleton") {
        auto groups = enumerate_groups("fuzzy-match", {}, 3, lib.graph(), lib);
        REQUIRE(groups.size() == 1);
        CHECK(groups[0].members.empty());
        CHECK(groups[0].roles.at("fuzzy-match") == Role::anchor);
    }
    SUBCASE("fixture hub yields one singleton, three pairs, three triples") {
        auto n = typed_neighborhood("fuzzy-match", lib.graph(), 3);
        auto groups = enumerate_groups("fuzzy-match", n, 3, lib.graph(), lib);
        std::size_t singles = 0, pairs = 0, triples = 0;
        for (const auto& g : groups) {
            if (g.members.empty()) ++singles;
            if (g.members.size() == 1) ++pairs;
            if (g.members.size() == 2) ++triples;
        }
        CHECK(singles == 1);
        CHECK(pairs == 3);
        CHECK(triples == 3);
    }
    SUBCASE("a second member adding neither role nor artifact/check is dropped") {
        // twin duplicates the first member's role (workflow predecessor) and
        // carries no artifact or check facet of its own.
        Library lib2 = parse_library(
            R"([{"id":"lead","payload":"p"},
                {"id":"pre","name":"pre","tags":["alpha"],"payload":"p"},
                {"id":"twin","name":"twin","tags":["beta"],"payload":"p"}])",
            R"([["pre","lead","workflow",0.8],["twin","lead","workflow",0.7]])", dicts());
        auto n = typed_neighborhood("lead", lib2.graph(), 3);
        auto groups = enumerate_groups("lead", n, 3, lib2.graph(), lib2);
        for (const auto& g : groups) CHECK(g.members.size() < 2);
    }
}

TEST_CASE("role assignment follows the strongest typed edge to the lead") {
    const Library& lib = testing::fixture_library();
    auto group_with = [&](std::vector<std::string> members) {
        SkillGroup g;
        g.lead = "fuzzy-match";
        std::sort(members.begin(), members.end());
        g.members = std::move(members);
        g.id = canonical_group_id(g.lead, g.members);
        assign_roles(g, lib.graph());
        return g;
    };

    CHECK(group_with({"schema-check"}).roles.at("schema-check") == Role::checker);
    CHECK(group_with({"regex-generic"}).roles.at("regex-generic") == Role::fallback);
    // pdf-reading reaches fuzzy-match over a workflow edge as its predecessor.
    CHECK(group_with({"pdf-reading"}).roles.at("pdf-reading") == Role::preprocessor);
    // xlsx has both artifact (0.7) and workflow (0.6) edges; the stronger
    // artifact edge wins, and an artifact predecessor parses.
    CHECK(group_with({"xlsx"}).roles.at("xlsx") == Role::parser);

    SUBCASE("singleton keeps only the anchor role") {
        auto g = group_with({});
        CHECK(g.roles.size() == 1);
        CHECK(g.roles.at("fuzzy-match") == Role::anchor);
    }
    SUBCASE("member without a typed edge falls back to preprocessor with a warning") {
        Library lib2 = parse_library(R"([{"id":"a","payload":"p"},{"id":"b","payload":"p"}])",
                                     "[]", dicts());
        SkillGroup g;
        g.lead = "a";
        g.members = {"b"};
        g.id = canonical_group_id(g.lead, g.members);
        assign_roles(g, lib2.graph());
        CHECK(g.roles.at("b") == Role::preprocessor);
        REQUIRE(g.warnings.size() == 1);
    }
    SUBCASE("artifact successor formats, workflow successor sets up") {
        Library lib2 = parse_library(
            R"([{"id":"lead","payload":"p"},{"id":"fmt","payload":"p"},{"id":"next","payload":"p"}])",
            R"([["lead","fmt","artifact",0.6],["lead","next","workflow",0.5]])", dicts());
        SkillGroup g;
        g.lead = "lead";
        g.members = {"fmt", "next"};
        g.id = canonical_group_id(g.lead, g.members);
        assign_roles(g, lib2.graph());
        CHECK(g.roles.at("fmt") == Role::formatter);
        CHECK(g.roles.at("next") == Role::setup);
    }
}

TEST_CASE("group facet extraction unions member evidence") {
    const Library& lib = testing::fixture_library();
    auto make = [&](std::vector<std::string> members) {
        SkillGroup g;
        g.lead = "fuzzy-match";
        std::sort(members.begin(), members.end());
        g.members = std::move(members);
        g.id = canonical_group_id(g.lead, g.members);
        assign_roles(g, lib.graph());
        extract_group_facets(g, lib);
        return g;
    };

    SUBCASE("singleton required facets are the lead facets, optional empty") {
        auto g = make({});
        CHECK(g.required_facets.tokens() == lib.at("fuzzy-match").facets.tokens());
        CHECK(g.optional_facets.empty());
    }
    SUBCASE("triple with pdf-reading and xlsx unions both artifacts") {
        auto g = make({"pdf-reading", "xlsx"});
        CHECK(g.artifacts == std::set<std::string>{"pdf", "xlsx"});
        CHECK(g.optional_facets.contains("pdf"));
        CHECK(g.required_facets.contains("matching"));
        CHECK_FALSE(g.required_facets.contains("pdf"));
    }
    SUBCASE("member negative cues land in the group negative set") {
        auto g = make({"pdf-reading"});
        CHECK(g.negative_facets.contains("scanned"));
        CHECK(g.negative_facets.contains("not-for-scanned-images"));
    }
}

TEST_CASE("compatibility rejects negative and exclusion clashes") {
    SUBCASE("well-formed singleton passes") {
        const PoolBundle& b = testing::fixture_bundle();
        CHECK(is_compatible(b.pool.at("fuzzy-match"), b.library, dicts()));
        CHECK(is_compatible(b.pool.at("fuzzy-match+pdf-reading+xlsx"), b.library, dicts()));
    }
    SUBCASE("a member negating another member's facet clashes") {
        Library lib2 = parse_library(
            R"([{"id":"needs-xlsx","tags":["xlsx"],"payload":"p"},
                {"id":"hates-xlsx","payload":"p","negatives":["xlsx"]},
                {"id":"lead","payload":"p"}])",
            R"([["needs-xlsx","lead","workflow",0.8],["hates-xlsx","lead","workflow",0.7]])",
            dicts());
        SkillGroup g;
        g.lead = "lead";
        g.members = {"hates-xlsx", "needs-xlsx"};
        g.id = canonical_group_id(g.lead, g.members);
        assign_roles(g, lib2.graph());
        extract_group_facets(g, lib2);
        CHECK_FALSE(is_compatible(g, lib2, dicts()));
    }
    SUBCASE("mutually exclusive formats from the shipped table clash") {
        Library lib2 = parse_library(
            R"([{"id":"json-writer","artifacts":[".json"],"payload":"p"},
                {"id":"binary-writer","artifacts":["binary"],"payload":"p"},
                {"id":"lead","payload":"p"}])",
            R"([["json-writer","lead","workflow",0.8],["binary-writer","lead","workflow",0.7]])",
            dicts());
        SkillGroup g;
        g.lead = "lead";
        g.members = {"binary-writer", "json-writer"};
        g.id = canonical_group_id(g.lead, g.members);
        assign_roles(g, lib2.graph());
        extract_group_facets(g, lib2);
        CHECK_FALSE(is_compatible(g, lib2, dicts()));
    }
}

TEST_CASE("redundancy rules") {
    const Library& lib = testing::fixture_library();

    SUBCASE("duplicate canonical group with lower prior is rejected") {
        const PoolBundle& b = testing::fixture_bundle();
        SkillGroup dup = b.pool.at("fuzzy-match+xlsx");
        double original_prior = dup.prior;
        dup.prior = original_prior - 0.1;
        CHECK_FALSE(is_non_redundant(dup, b.pool.groups(), b.library));
        dup.prior = original_prior + 0.1;
        CHECK(is_non_redundant(dup, b.pool.groups(), b.library));
    }
    SUBCASE("a pair whose member adds a new artifact facet is kept") {
        SkillGroup g;
        g.lead = "fuzzy-match";
        g.members = {"xlsx"};
        g.id = canonical_group_id(g.lead, g.members);
        assign_roles(g, lib.graph());
        extract_group_facets(g, lib);
        CHECK(is_non_redundant(g, {}, lib));
    }
    SUBCASE("a pair whose member clones the lead adds nothing") {
        Library lib2 = parse_library(
            R"([{"id":"lead","name":"lead","tags":["alpha","beta"],"payload":"p"},
                {"id":"clone","name":"lead","tags":["alpha","beta"],"payload":"p"}])",
            R"([["clone","lead","workflow",0.8]])", dicts());
        SkillGroup g;
        g.lead = "lead";
        g.members = {"clone"};
        g.id = canonical_group_id(g.lead, g.members);
        assign_roles(g, lib2.graph());
        extract_group_facets(g, lib2);
        CHECK_FALSE(is_non_redundant(g, {}, lib2));
    }
}

TEST_CASE("group graph construction") {
    SUBCASE("pool of one group has no edges") {
        Library lib2 = parse_library(R"([{"id":"lone","payload":"p"}])", "[]", dicts());
        BuiltPool built = build_pool(lib2, dicts());
        CHECK(built.pool.size() == 1);
        CHECK(built.graph.edges.empty());
    }
    SUBCASE("singleton groups joined by a workflow edge get a support edge") {
        const PoolBundle& b = testing::fixture_bundle();
        bool found = false;
        for (const auto& e : b.graph.edges) {
            if ((e.a == "fuzzy-match" && e.b == "pdf-reading") ||
                (e.a == "pdf-reading" && e.b == "fuzzy-match")) {
                found = true;
                CHECK(e.label == GroupEdgeLabel::support);
                CHECK(e.weight >= 0.35);
            }
        }
        CHECK(found);
    }
    SUBCASE("clashing negative facets force an incompat edge at any affinity") {
        Library lib2 = parse_library(
            R"([{"id":"alpha","name":"alpha","tags":["qux"],"payload":"p"},
                {"id":"omega","name":"omega","tags":["omega"],"payload":"p","negatives":["qux"]}])",
            "[]", dicts());
        BuiltPool built = build_pool(lib2, dicts());
        REQUIRE(built.pool.size() == 2);
        REQUIRE(built.graph.edges.size() == 1);
        CHECK(built.graph.edges[0].label == GroupEdgeLabel::incompat);
        // incompat edges never surface as positive neighbors
        CHECK(built.graph.positive_neighbors("alpha").empty());
        CHECK(built.graph.positive_neighbors("omega").empty());
    }
}

TEST_CASE("build_pool assembles a deterministic, bounded, indexed pool") {
    const PoolBundle& b = testing::fixture_bundle();

    SUBCASE("empty library yields an empty pool") {
        Library empty = parse_library("[]", "[]", dicts());
        BuiltPool built = build_pool(empty, dicts());
        CHECK(built.pool.size() == 0);
        CHECK(built.graph.edges.empty());
        CHECK(built.index.by_skill.empty());
    }
    SUBCASE("every skill leads its own singleton group") {
        for (const auto& s : b.library.skills()) {
            CHECK(b.pool.find(s.id) != nullptr);
        }
        CHECK(b.pool.size() == 21);
    }
    SUBCASE("index completeness: every group is indexed under all of its skills") {
        for (const auto& g : b.pool.groups()) {
            for (const auto& id : g.skill_ids()) {
                const auto& groups = b.index.by_skill.at(id);
                CHECK(std::find(groups.begin(), groups.end(), g.id) != groups.end());
            }
        }
    }
    SUBCASE("facet index covers every required and optional token") {
        for (const auto& g : b.pool.groups()) {
            for (const auto& tok : g.required_facets.tokens()) {
                const auto& groups = b.index.by_facet.at(tok);
                CHECK(std::find(groups.begin(), groups.end(), g.id) != groups.end());
            }
            for (const auto& tok : g.optional_facets.tokens()) {
                const auto& groups = b.index.by_facet.at(tok);
                CHECK(std::find(groups.begin(), groups.end(), g.id) != groups.end());
            }
        }
    }
    SUBCASE("canonical uniqueness") {
        std::set<std::string> ids;
        for (const auto& g : b.pool.groups()) {
            CHECK(ids.insert(g.id).second);
        }
    }
    SUBCASE("pool size respects the combinatorial bound") {
        std::size_t bound = 0;
        for (const auto& s : b.library.skills()) {
            std::size_t n = typed_neighborhood(s.id, b.library.graph(), 3).size();
            bound += 1 + n + (n * (n - 1)) / 2;
        }
        CHECK(b.pool.size() <= bound);
    }
    SUBCASE("every group keeps one to three skills and an anchored lead") {
        for (const auto& g : b.pool.groups()) {
            CHECK(g.size() >= 1);
            CHECK(g.size() <= 3);
            CHECK(g.roles.at(g.lead) == Role::anchor);
            for (const auto& m : g.members) {
                CHECK(m != g.lead);
                CHECK(g.roles.count(m) == 1);
            }
        }
    }
    SUBCASE("positive group-graph edges carry positive weight") {
        for (const auto& e : b.graph.edges) {
            if (e.label != GroupEdgeLabel::incompat) CHECK(e.weight > 0.0);
        }
    }
}

TEST_CASE("pool construction is deterministic, in parallel too") {
    Library lib = load_library(testing::fixture_library_dir(), dicts());
    BuildOptions serial;
    serial.threads = 1;
    BuildOptions parallel;
    parallel.threads = 4;

    PoolBundle a = make_bundle(dicts(), lib, build_pool(lib, dicts(), serial));
    PoolBundle b = make_bundle(dicts(), lib, build_pool(lib, dicts(), parallel));
    CHECK(serialize_bundle(a) == serialize_bundle(b));
}
