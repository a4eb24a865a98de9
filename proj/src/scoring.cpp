#include "goskills/scoring.hpp"

#include <algorithm>
#include <cmath>

namespace goskills {

namespace {

double clip01(double v) { return std::min(1.0, std::max(0.0, v)); }

}  // namespace

FeatureVector FeatureVector::clipped() const {
    FeatureVector out = *this;
    out.relevance = clip01(out.relevance);
    out.facet_coverage = clip01(out.facet_coverage);
    out.anchor_match = clip01(out.anchor_match);
    out.check_support = clip01(out.check_support);
    out.connectivity = clip01(out.connectivity);
    out.redundancy = clip01(out.redundancy);
    out.negative = clip01(out.negative);
    out.cost = clip01(out.cost);
    return out;
}

double StageWeights::dot(const FeatureVector& x) const {
    return relevance * x.relevance + facet * x.facet_coverage + anchor * x.anchor_match +
           check * x.check_support + connectivity * x.connectivity +
           redundancy * x.redundancy + negative * x.negative + cost * x.cost;
}

std::array<double, 8> StageWeights::as_array() const {
    return {relevance, facet, anchor, check, connectivity, redundancy, negative, cost};
}

double u_grp(const FeatureVector& features, double prior, const ScoringWeights& w) {
    return w.grp.dot(features.clipped()) + w.lambda_prior * prior;
}

double u_sup(const FeatureVector& features, const ScoringWeights& w) {
    return w.sup.dot(features.clipped());
}

double u_bot(const FeatureVector& features, const ScoringWeights& w) {
    return w.bot.dot(features.clipped());
}

double anchor_bonus(const Skill& lead, const QuerySchema& schema,
                    const FacetSet& high_confidence) {
    if (!schema.has_anchors()) return 0.0;

    // Only named technologies and APIs pull the entry point; plain artifact
    // mentions stay support evidence (they still steer facets and debt).
    bool exact = false;
    bool alias = false;
    for (const auto& [tok, f] : schema.tech) {
        const Facet* hit = lead.facets.find(tok);
        if (!hit) continue;
        if (f.from_alias || hit->from_alias) {
            alias = true;
        } else {
            exact = true;
        }
    }
    if (exact) return 1.0;
    if (alias) return 0.5;

    bool conflicting = false;
    for (const auto& [tok, f] : high_confidence) {
        if (lead.negative_facets.contains(tok)) conflicting = true;
    }
    if (lead.is_generic() || conflicting) return -1.0;
    return 0.0;
}

double query_difficulty(const QuerySchema& schema, const std::vector<double>& ranked_scores,
                        const Budgets& b) {
    double complexity = clip01(static_cast<double>(schema.token_count()) / 12.0);

    double top_gap = 1.0;  // an empty or single-entry ranking is unambiguous
    if (ranked_scores.size() >= 2) {
        top_gap = clip01(ranked_scores[0] - ranked_scores[1]);
    }
    double spread = 0.0;
    std::size_t n = std::min<std::size_t>(6, ranked_scores.size());
    if (n >= 2) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += ranked_scores[i];
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double d = ranked_scores[i] - mean;
            var += d * d;
        }
        var /= static_cast<double>(n);
        spread = clip01(std::sqrt(var) / 0.25);
    }
    double ambiguity = b.gap_weight * (1.0 - top_gap) + b.spread_weight * spread;
    return clip01(b.complexity_weight * complexity + b.ambiguity_weight * ambiguity);
}

int shortlist_size(double difficulty, const Budgets& b) {
    int base = std::max(b.base_pool_min, b.topn_pool_multiplier * b.top_n);
    double adaptive =
        b.adaptive_extra_base + b.adaptive_difficulty_multiplier * difficulty * base;
    int size = std::max(base, static_cast<int>(std::lround(adaptive)));
    return std::min(b.pool_cap, size);
}

double score_floor(double difficulty, const Budgets& b) {
    return std::max(b.floor_min, b.floor_center - b.floor_slope * difficulty);
}

}  // namespace goskills
