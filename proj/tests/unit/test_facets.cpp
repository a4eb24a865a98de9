#include <doctest.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "goskills/dictionaries.hpp"
#include "goskills/facets.hpp"
#include "support/fixtures.hpp"

using namespace goskills;

TEST_CASE("normalize_token lowercases, trims, and unifies separators") {
    CHECK(normalize_token(".XLSX") == "xlsx");
    CHECK(normalize_token("Fuzzy_Match") == "fuzzy-match");
    CHECK(normalize_token("  pdf  ") == "pdf");
    CHECK(normalize_token("output format") == "output-format");
    CHECK(normalize_token("...") == "");
}

TEST_CASE("tokenize keeps dotted extensions and drops bare numbers") {
    auto toks = tokenize("export the report in .pdf, 3 copies");
    CHECK(std::count(toks.begin(), toks.end(), "pdf") == 1);
    CHECK(std::count(toks.begin(), toks.end(), "3") == 0);
    CHECK(std::count(toks.begin(), toks.end(), "report") == 1);
    CHECK(tokenize("").empty());
}

TEST_CASE("facet set keeps the higher-precedence category on collision") {
    FacetSet s;
    s.insert({"json", FacetCategory::core, false});
    s.insert({"json", FacetCategory::artifact, false});
    CHECK(s.size() == 1);
    CHECK(s.find("json")->category == FacetCategory::artifact);

    // check outranks artifact
    s.insert({"json", FacetCategory::check, false});
    CHECK(s.find("json")->category == FacetCategory::check);
}

TEST_CASE("facet set difference and intersection") {
    FacetSet a, b;
    a.insert({"pdf", FacetCategory::artifact, false});
    a.insert({"xlsx", FacetCategory::artifact, false});
    b.insert({"xlsx", FacetCategory::artifact, false});
    CHECK(a.difference(b) == std::vector<std::string>{"pdf"});
    CHECK(a.intersection_size(b) == 1);
}

TEST_CASE("no facet token contains uppercase or surrounding whitespace") {
    for (const auto& skill : testing::fixture_library().skills()) {
        for (const auto& [tok, f] : skill.facets) {
            for (char c : tok) {
                CHECK_FALSE(static_cast<bool>(std::isupper(static_cast<unsigned char>(c))));
                CHECK_FALSE(static_cast<bool>(std::isspace(static_cast<unsigned char>(c))));
            }
        }
    }
}

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(static_cast<bool>(in));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("embedded dictionaries byte-match the shipped data files") {
    std::string dir = testing::source_dir() + "/data/dictionaries";
    CHECK(embedded_alias_json() == slurp(dir + "/alias.json"));
    CHECK(embedded_categories_json() == slurp(dir + "/categories.json"));
    CHECK(embedded_exclusions_json() == slurp(dir + "/exclusions.json"));
}

TEST_CASE("dictionary parsing round trips the load path") {
    Dictionaries from_files = load_dictionaries(testing::source_dir() + "/data/dictionaries");
    const Dictionaries& embedded = testing::dicts();
    CHECK(from_files.aliases == embedded.aliases);
    CHECK(from_files.stopwords == embedded.stopwords);
    CHECK(from_files.exclusive_pairs == embedded.exclusive_pairs);
    CHECK(from_files.version == embedded.version);
}
