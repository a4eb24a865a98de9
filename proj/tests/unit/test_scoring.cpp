#include <doctest.h>

#include <random>

#include "goskills/scoring.hpp"
#include "support/fixtures.hpp"

using namespace goskills;
using goskills::testing::dicts;
using goskills::testing::fixture_library;

TEST_CASE("shipped coefficients match the fixed scoring tables exactly") {
    ScoringWeights w;
    CHECK(w.grp.as_array() ==
          std::array<double, 8>{0.28, 0.22, 0.18, 0.12, 0.10, -0.05, -0.25, -0.04});
    CHECK(w.sup.as_array() ==
          std::array<double, 8>{0.12, 0.28, 0.06, 0.16, 0.16, -0.18, -0.25, -0.04});
    CHECK(w.bot.as_array() ==
          std::array<double, 8>{0.18, 0.24, 0.12, 0.20, 0.08, -0.12, -0.30, -0.08});
    CHECK(w.lambda_prior == 0.05);
    CHECK(w.lambda_anchor == 0.15);
    CHECK(w.delta_grp == 0.14);
    CHECK(w.delta_sup == 0.10);
    CHECK(w.delta_bot == 0.10);
}

TEST_CASE("shipped budget constants match the fixed settings exactly") {
    Budgets b;
    CHECK(b.top_n == 4);
    CHECK(b.seed_k == 4);
    CHECK(b.payload_cap == 1800);
    CHECK(b.context_cap == 9000);
    CHECK(b.group_cap == 3);
    CHECK(b.group_size_cap == 3);
    CHECK(b.backfill_cap == 2);
    CHECK(b.pool_cap == 32);
    CHECK(b.complexity_weight == 0.60);
    CHECK(b.ambiguity_weight == 0.40);
    CHECK(b.gap_weight == 0.55);
    CHECK(b.spread_weight == 0.45);
    CHECK(b.base_pool_min == 6);
    CHECK(b.topn_pool_multiplier == 2);
    CHECK(b.adaptive_extra_base == 1.0);
    CHECK(b.adaptive_difficulty_multiplier == 2.0);
    CHECK(b.floor_center == 0.55);
    CHECK(b.floor_slope == 0.30);
    CHECK(b.floor_min == 0.10);
    CHECK(b.floor_keep_min == 3);
    CHECK(b.floor_keep_max_below == 6);
    CHECK(b.affinity_threshold == 0.35);
}

TEST_CASE("stage scores are plain dot products over clipped features") {
    ScoringWeights w;
    FeatureVector x;

    SUBCASE("one-hot relevance under the group score") {
        x.relevance = 1.0;
        CHECK(u_grp(x, 0.0, w) == doctest::Approx(0.28));
    }
    SUBCASE("zero vector scores zero") {
        CHECK(u_grp(x, 0.0, w) == doctest::Approx(0.0));
        CHECK(u_sup(x, w) == doctest::Approx(0.0));
        CHECK(u_bot(x, w) == doctest::Approx(0.0));
    }
    SUBCASE("negative applicability penalties") {
        x.negative = 1.0;
        CHECK(u_grp(x, 0.0, w) == doctest::Approx(-0.25));
        CHECK(u_bot(x, w) == doctest::Approx(-0.30));
    }
    SUBCASE("support facet coverage and redundancy") {
        FeatureVector f;
        f.facet_coverage = 1.0;
        CHECK(u_sup(f, w) == doctest::Approx(0.28));
        FeatureVector r;
        r.redundancy = 1.0;
        CHECK(u_sup(r, w) == doctest::Approx(-0.18));
    }
    SUBCASE("bottleneck check support") {
        FeatureVector f;
        f.check_support = 1.0;
        CHECK(u_bot(f, w) == doctest::Approx(0.20));
    }
    SUBCASE("the prior enters the group score through lambda") {
        CHECK(u_grp(x, 1.0, w) == doctest::Approx(0.05));
    }
    SUBCASE("features are clipped before scoring") {
        FeatureVector big;
        big.relevance = 5.0;
        CHECK(u_grp(big, 0.0, w) == doctest::Approx(0.28));
        FeatureVector neg;
        neg.relevance = -2.0;
        CHECK(u_grp(neg, 0.0, w) == doctest::Approx(0.0));
    }
}

TEST_CASE("additivity over disjoint one-hot features") {
    ScoringWeights w;
    std::vector<FeatureVector> hots(4);
    hots[0].relevance = 1.0;
    hots[1].facet_coverage = 1.0;
    hots[2].check_support = 1.0;
    hots[3].cost = 1.0;
    FeatureVector sum;
    sum.relevance = 1.0;
    sum.facet_coverage = 1.0;
    sum.check_support = 1.0;
    sum.cost = 1.0;
    double parts = 0.0;
    for (const auto& h : hots) parts += u_grp(h, 0.0, w);
    CHECK(u_grp(sum, 0.0, w) == doctest::Approx(parts));
    parts = 0.0;
    for (const auto& h : hots) parts += u_bot(h, w);
    CHECK(u_bot(sum, w) == doctest::Approx(parts));
}

TEST_CASE("anchor bonus promotes technology leads and suppresses generic ones") {
    Skill threejs_skill;
    threejs_skill.id = "threejs";
    threejs_skill.name = "threejs";
    threejs_skill.payload = "p";
    extract_skill_facets(threejs_skill, dicts());

    QuerySchema anchored = extract_schema("parse the threejs scene", fixture_library(), dicts());
    REQUIRE(anchored.tech.contains("threejs"));
    FacetSet hc = high_confidence_facets(anchored, fixture_library());

    SUBCASE("exact technology match earns the full bonus") {
        CHECK(anchor_bonus(threejs_skill, anchored, hc) == doctest::Approx(1.0));
    }
    SUBCASE("generic lead on an anchored query is suppressed") {
        const Skill& generic = fixture_library().at("regex-generic");
        CHECK(anchor_bonus(generic, anchored, hc) == doctest::Approx(-1.0));
    }
    SUBCASE("no anchors in the query means no correction") {
        QuerySchema plain = extract_schema("find fraud", fixture_library(), dicts());
        CHECK(anchor_bonus(threejs_skill, plain, hc) == doctest::Approx(0.0));
        const Skill& generic = fixture_library().at("regex-generic");
        CHECK(anchor_bonus(generic, plain, hc) == doctest::Approx(0.0));
    }
    SUBCASE("lead whose negatives clash with a high-confidence facet is suppressed") {
        Skill sour;
        sour.id = "sour";
        sour.name = "sour";
        sour.payload = "p";
        sour.negatives = {"threejs"};
        extract_skill_facets(sour, dicts());
        CHECK(anchor_bonus(sour, anchored, hc) == doctest::Approx(-1.0));
    }
}

TEST_CASE("adaptive shortlist size") {
    Budgets b;
    QuerySchema empty_schema;

    SUBCASE("difficulty zero rests at the base floor of eight") {
        double d = query_difficulty(empty_schema, {}, b);
        CHECK(d == doctest::Approx(0.0));
        CHECK(shortlist_size(d, b) == 8);
    }
    SUBCASE("never exceeds the pool cap") {
        for (double d = 0.0; d <= 1.0; d += 0.05) {
            CHECK(shortlist_size(d, b) <= 32);
        }
        CHECK(shortlist_size(1.0, b) == 17);  // round(1 + 2*1*8) capped by 32
    }
    SUBCASE("monotone non-decreasing in difficulty") {
        int prev = 0;
        for (double d = 0.0; d <= 1.0; d += 0.01) {
            int s = shortlist_size(d, b);
            CHECK(s >= prev);
            prev = s;
        }
    }
}

TEST_CASE("adaptive score floor") {
    Budgets b;
    CHECK(score_floor(0.0, b) == doctest::Approx(0.55));
    CHECK(score_floor(1.0, b) == doctest::Approx(0.25));
    // the absolute minimum binds once the line dips under it
    Budgets steep = b;
    steep.floor_slope = 0.60;
    CHECK(score_floor(1.0, steep) == doctest::Approx(0.10));

    double prev = 1.0;
    for (double d = 0.0; d <= 1.0; d += 0.01) {
        double f = score_floor(d, b);
        CHECK(f <= prev);
        prev = f;
    }
}

TEST_CASE("argmax ordering is invariant to a constant utility shift") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int iter = 0; iter < 50; ++iter) {
        std::vector<double> scores(8);
        for (auto& s : scores) s = dist(rng);
        double shift = dist(rng) * 10.0;

        auto order = [](const std::vector<double>& v) {
            std::vector<std::size_t> idx(v.size());
            for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
            std::stable_sort(idx.begin(), idx.end(),
                             [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
            return idx;
        };
        std::vector<double> shifted = scores;
        for (auto& s : shifted) s += shift;
        CHECK(order(scores) == order(shifted));
    }
}
