#include "goskills/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

namespace goskills {

using ordered_json = nlohmann::ordered_json;

namespace {

double clip01(double v) { return std::min(1.0, std::max(0.0, v)); }

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

std::vector<std::string> GroupPlan::all() const {
    std::vector<std::string> out;
    if (!anchor.empty()) out.push_back(anchor);
    out.insert(out.end(), supports.begin(), supports.end());
    return out;
}

bool PresentedSkills::contains(const std::string& id) const {
    return std::any_of(skills.begin(), skills.end(),
                       [&](const PresentedSkill& p) { return p.id == id; });
}

std::vector<std::string> PresentedSkills::ids() const {
    std::vector<std::string> out;
    out.reserve(skills.size());
    for (const auto& p : skills) out.push_back(p.id);
    return out;
}

void RetrievalContext::note(const std::string& line) const {
    if (trace) trace->push_back(line);
}

std::vector<SeedHit> seed_retrieve_tokens(const std::vector<std::string>& tokens,
                                          const Library& library, int k, int posting_cap) {
    std::set<std::string> uniq(tokens.begin(), tokens.end());
    const double n = static_cast<double>(library.size());

    std::map<std::string, double> raw;
    for (const auto& tok : uniq) {
        auto hit = library.facet_to_skills().find(tok);
        if (hit == library.facet_to_skills().end()) continue;
        if (hit->second.size() > static_cast<std::size_t>(posting_cap)) continue;
        double idf = std::log(1.0 + n / static_cast<double>(hit->second.size()));
        for (const auto& id : hit->second) raw[id] += idf;
    }

    std::vector<SeedHit> ranked;
    ranked.reserve(raw.size());
    for (const auto& [id, score] : raw) ranked.push_back({id, score});
    std::sort(ranked.begin(), ranked.end(), [](const SeedHit& a, const SeedHit& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.id < b.id;
    });
    if (k >= 0 && ranked.size() > static_cast<std::size_t>(k)) {
        ranked.resize(static_cast<std::size_t>(k));
    }
    if (!ranked.empty()) {
        double max = ranked.front().score;
        double min = ranked.back().score;
        for (auto& hit : ranked) {
            hit.score = (max == min) ? 1.0 : (hit.score - min) / (max - min);
        }
    }
    return ranked;
}

std::vector<SeedHit> seed_retrieve(const std::string& query, const Library& library,
                                   const Dictionaries& dicts, int k) {
    QuerySchema schema = extract_schema(query, library, dicts);
    return seed_retrieve_tokens(schema.all().tokens(), library, k);
}

std::vector<std::string> candidate_groups(const RetrievalContext& ctx) {
    std::set<std::string> ids;
    for (const auto& [tok, f] : ctx.schema.all()) {
        auto it = ctx.index.by_facet.find(tok);
        if (it == ctx.index.by_facet.end()) continue;
        if (it->second.size() > static_cast<std::size_t>(ctx.config.budgets.posting_cap)) {
            continue;
        }
        ids.insert(it->second.begin(), it->second.end());
    }
    for (const auto& seed : ctx.seeds) {
        auto it = ctx.index.by_skill.find(seed.id);
        if (it == ctx.index.by_skill.end()) continue;
        ids.insert(it->second.begin(), it->second.end());
    }
    std::vector<std::string> out;
    for (const auto& id : ids) {
        const SkillGroup& g = ctx.pool.at(id);
        bool conflict = false;
        for (const auto& [tok, f] : ctx.high_confidence) {
            if (g.negative_facets.contains(tok)) conflict = true;
        }
        if (!conflict) out.push_back(id);
    }
    return out;
}

namespace {

double lead_anchor_feature(const Skill& lead, const QuerySchema& schema) {
    if (schema.tech.empty()) return 0.0;
    bool exact = false, alias = false;
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
    return 0.0;
}

bool negative_conflict(const FacetSet& negatives, const RetrievalContext& ctx) {
    for (const auto& [tok, f] : ctx.high_confidence) {
        if (negatives.contains(tok)) return true;
    }
    for (const auto& [tok, f] : ctx.schema.failure) {
        if (negatives.contains(tok)) return true;
    }
    return false;
}

double group_cost_feature(const SkillGroup& g, const RetrievalContext& ctx) {
    const int cap = ctx.config.budgets.payload_cap;
    double total = 0.0;
    auto ids = g.skill_ids();
    for (const auto& id : ids) {
        total += static_cast<double>(
            std::min<std::size_t>(ctx.library.at(id).payload.size(), cap));
    }
    return clip01(total / (static_cast<double>(cap) * static_cast<double>(ids.size())));
}

double group_connectivity_feature(const SkillGroup& g) {
    double sum = 0.0;
    for (const auto& e : g.topology) sum += e.weight;
    return clip01(sum / 2.0);
}

// Schema tokens covered by any group of the plan.
std::set<std::string> plan_covered_tokens(const GroupPlan& plan, const RetrievalContext& ctx) {
    std::set<std::string> covered;
    for (const auto& gid : plan.all()) {
        const SkillGroup& g = ctx.pool.at(gid);
        for (const auto& [tok, f] : ctx.schema.all()) {
            if (g.covers_facet(tok)) covered.insert(tok);
        }
    }
    return covered;
}

std::set<std::string> plan_facet_union(const GroupPlan& plan, const RetrievalContext& ctx) {
    std::set<std::string> out;
    for (const auto& gid : plan.all()) {
        const SkillGroup& g = ctx.pool.at(gid);
        for (const auto& t : g.required_facets.tokens()) out.insert(t);
        for (const auto& t : g.optional_facets.tokens()) out.insert(t);
    }
    return out;
}

std::set<std::string> plan_skill_union(const GroupPlan& plan, const RetrievalContext& ctx) {
    std::set<std::string> out;
    for (const auto& gid : plan.all()) {
        for (const auto& id : ctx.pool.at(gid).skill_ids()) out.insert(id);
    }
    return out;
}

FacetSet check_and_constraint(const QuerySchema& schema) {
    FacetSet out;
    out.merge(schema.check);
    out.merge(schema.constraint);
    return out;
}

}  // namespace

FeatureVector group_features(const SkillGroup& g, const RetrievalContext& ctx) {
    FeatureVector x;
    for (const auto& id : g.skill_ids()) {
        auto it = ctx.seed_score.find(id);
        if (it != ctx.seed_score.end()) x.relevance = std::max(x.relevance, it->second);
    }
    FacetSet all = ctx.schema.all();
    if (!all.empty()) {
        std::size_t covered = 0;
        for (const auto& [tok, f] : all) {
            if (g.covers_facet(tok)) ++covered;
        }
        x.facet_coverage = static_cast<double>(covered) / static_cast<double>(all.size());
    }
    x.anchor_match = lead_anchor_feature(ctx.library.at(g.lead), ctx.schema);
    FacetSet cc = check_and_constraint(ctx.schema);
    if (!cc.empty()) {
        std::size_t covered = 0;
        for (const auto& [tok, f] : cc) {
            if (g.covers_facet(tok) || g.checks.count(tok)) ++covered;
        }
        x.check_support = static_cast<double>(covered) / static_cast<double>(cc.size());
    }
    x.connectivity = group_connectivity_feature(g);
    x.redundancy = 0.0;  // stage-inapplicable before anything is selected
    x.negative = negative_conflict(g.negative_facets, ctx) ? 1.0 : 0.0;
    x.cost = group_cost_feature(g, ctx);
    return x;
}

FeatureVector support_features(const SkillGroup& g, const GroupPlan& plan,
                               const RetrievalContext& ctx) {
    FeatureVector z;
    std::set<std::string> in_plan = plan_skill_union(plan, ctx);
    for (const auto& id : g.skill_ids()) {
        if (in_plan.count(id)) continue;  // marginal relevance only
        auto it = ctx.seed_score.find(id);
        if (it != ctx.seed_score.end()) z.relevance = std::max(z.relevance, it->second);
    }
    std::set<std::string> covered = plan_covered_tokens(plan, ctx);
    FacetSet all = ctx.schema.all();
    if (!all.empty()) {
        std::size_t marginal = 0;
        for (const auto& [tok, f] : all) {
            if (!covered.count(tok) && g.covers_facet(tok)) ++marginal;
        }
        z.facet_coverage = static_cast<double>(marginal) / static_cast<double>(all.size());
    }
    z.anchor_match = lead_anchor_feature(ctx.library.at(g.lead), ctx.schema);
    FacetSet cc = check_and_constraint(ctx.schema);
    if (!cc.empty()) {
        std::size_t marginal = 0;
        for (const auto& [tok, f] : cc) {
            if (!covered.count(tok) && (g.covers_facet(tok) || g.checks.count(tok))) ++marginal;
        }
        z.check_support = static_cast<double>(marginal) / static_cast<double>(cc.size());
    }
    if (!ctx.config.ablation.no_group_graph) {
        z.connectivity = clip01(ctx.graph.positive_weight_to(g.id, plan.all()));
    }
    std::set<std::string> plan_facets = plan_facet_union(plan, ctx);
    std::set<std::string> own;
    for (const auto& t : g.required_facets.tokens()) own.insert(t);
    for (const auto& t : g.optional_facets.tokens()) own.insert(t);
    if (!own.empty()) {
        std::size_t overlap = 0;
        for (const auto& t : own) overlap += plan_facets.count(t);
        z.redundancy = static_cast<double>(overlap) / static_cast<double>(own.size());
    }
    z.negative = negative_conflict(g.negative_facets, ctx) ? 1.0 : 0.0;
    z.cost = group_cost_feature(g, ctx);
    return z;
}

FeatureVector skill_features(const Skill& s, const PresentedSkills& presented,
                             const GroupPlan& /*plan*/, const RetrievalContext& ctx) {
    FeatureVector h;
    auto it = ctx.seed_score.find(s.id);
    if (it != ctx.seed_score.end()) h.relevance = it->second;

    std::set<std::string> covered;
    std::set<std::string> presented_facets;
    std::set<std::string> presented_artifacts;
    for (const auto& p : presented.skills) {
        const Skill& b = ctx.library.at(p.id);
        for (const auto& [tok, f] : b.facets) {
            presented_facets.insert(tok);
            if (f.category == FacetCategory::artifact) presented_artifacts.insert(tok);
        }
    }
    FacetSet all = ctx.schema.all();
    for (const auto& [tok, f] : all) {
        if (presented_facets.count(tok)) covered.insert(tok);
    }
    if (!all.empty()) {
        std::size_t marginal = 0;
        for (const auto& [tok, f] : all) {
            if (!covered.count(tok) && s.facets.contains(tok)) ++marginal;
        }
        h.facet_coverage = static_cast<double>(marginal) / static_cast<double>(all.size());
    }
    h.anchor_match = lead_anchor_feature(s, ctx.schema);
    FacetSet cc = check_and_constraint(ctx.schema);
    if (!cc.empty()) {
        std::size_t marginal = 0;
        for (const auto& [tok, f] : cc) {
            if (!covered.count(tok) && s.facets.contains(tok)) ++marginal;
        }
        h.check_support = static_cast<double>(marginal) / static_cast<double>(cc.size());
    }
    for (const auto& p : presented.skills) {
        const SkillEdge* e = ctx.library.graph().best_edge_between(s.id, p.id);
        if (e) h.connectivity = std::max(h.connectivity, e->weight);
    }
    h.connectivity = clip01(h.connectivity);
    if (!s.facets.empty()) {
        std::size_t overlap = 0;
        for (const auto& [tok, f] : s.facets) overlap += presented_facets.count(tok);
        h.redundancy = static_cast<double>(overlap) / static_cast<double>(s.facets.size());
    }
    h.negative = negative_conflict(s.negative_facets, ctx) ? 1.0 : 0.0;
    h.cost = clip01(static_cast<double>(std::min<std::size_t>(
                        s.payload.size(), ctx.config.budgets.payload_cap)) /
                    static_cast<double>(ctx.config.budgets.payload_cap));
    return h;
}

namespace {

int seed_rank_of(const std::string& skill_id, const RetrievalContext& ctx) {
    auto it = ctx.seed_rank.find(skill_id);
    return it == ctx.seed_rank.end() ? std::numeric_limits<int>::max() : it->second;
}

// Shared ordering for scored groups: score, seed rank of the lead, smaller
// group, id.
bool scored_group_before(const ScoredGroup& a, const ScoredGroup& b,
                         const RetrievalContext& ctx) {
    if (a.score != b.score) return a.score > b.score;
    const SkillGroup& ga = ctx.pool.at(a.id);
    const SkillGroup& gb = ctx.pool.at(b.id);
    int ra = seed_rank_of(ga.lead, ctx);
    int rb = seed_rank_of(gb.lead, ctx);
    if (ra != rb) return ra < rb;
    if (ga.size() != gb.size()) return ga.size() < gb.size();
    return a.id < b.id;
}

}  // namespace

std::vector<ScoredGroup> top_groups(const std::vector<std::string>& candidates,
                                    const RetrievalContext& ctx) {
    std::vector<ScoredGroup> scored;
    scored.reserve(candidates.size());
    for (const auto& id : candidates) {
        const SkillGroup& g = ctx.pool.at(id);
        double score = u_grp(group_features(g, ctx), g.prior, ctx.config.weights);
        scored.push_back({id, score});
    }
    std::sort(scored.begin(), scored.end(), [&](const ScoredGroup& a, const ScoredGroup& b) {
        return scored_group_before(a, b, ctx);
    });

    std::vector<double> ranked_scores;
    ranked_scores.reserve(scored.size());
    for (const auto& s : scored) ranked_scores.push_back(s.score);
    double difficulty = query_difficulty(ctx.schema, ranked_scores, ctx.config.budgets);
    double floor = score_floor(difficulty, ctx.config.budgets);
    int cap = shortlist_size(difficulty, ctx.config.budgets);
    ctx.note("rank: candidates=" + std::to_string(scored.size()) +
             " difficulty=" + fmt(difficulty) + " floor=" + fmt(floor) +
             " shortlist_cap=" + std::to_string(cap));

    std::vector<ScoredGroup> kept;
    int below = 0;
    for (const auto& s : scored) {
        if (s.score >= floor) {
            kept.push_back(s);
        }
    }
    // The floor never cuts below the keep minimum, and never forces more than
    // the below-floor ceiling back in.
    for (const auto& s : scored) {
        if (kept.size() >= static_cast<std::size_t>(ctx.config.budgets.floor_keep_min)) break;
        if (s.score >= floor) continue;
        if (below >= ctx.config.budgets.floor_keep_max_below) break;
        kept.push_back(s);
        ++below;
    }
    std::sort(kept.begin(), kept.end(), [&](const ScoredGroup& a, const ScoredGroup& b) {
        return scored_group_before(a, b, ctx);
    });
    if (kept.size() > static_cast<std::size_t>(cap)) {
        kept.resize(static_cast<std::size_t>(cap));
    }
    for (const auto& s : kept) {
        ctx.note("shortlist: " + s.id + " u_grp=" + fmt(s.score));
    }
    return kept;
}

std::optional<std::string> select_anchor(const std::vector<ScoredGroup>& shortlist,
                                         const RetrievalContext& ctx) {
    if (shortlist.empty()) return std::nullopt;

    if (ctx.config.ablation.no_anchor_selection) {
        ctx.note("anchor: " + shortlist.front().id + " (no anchor correction)");
        return shortlist.front().id;
    }

    std::vector<ScoredGroup> corrected;
    corrected.reserve(shortlist.size());
    std::map<std::string, double> bonus_of;
    for (const auto& s : shortlist) {
        const SkillGroup& g = ctx.pool.at(s.id);
        double bonus = anchor_bonus(ctx.library.at(g.lead), ctx.schema, ctx.high_confidence);
        bonus_of[s.id] = bonus;
        corrected.push_back({s.id, s.score + ctx.config.weights.lambda_anchor * bonus});
    }
    std::sort(corrected.begin(), corrected.end(),
              [&](const ScoredGroup& a, const ScoredGroup& b) {
                  return scored_group_before(a, b, ctx);
              });

    ScoredGroup best = corrected.front();
    // A generic or conflicting winner yields to the best anchored candidate
    // whose corrected score clears the group-selection minimum.
    if (ctx.schema.has_anchors() && bonus_of[best.id] < 0.0) {
        for (const auto& s : corrected) {
            if (bonus_of[s.id] > 0.0) {
                if (s.score >= ctx.config.weights.delta_grp) {
                    ctx.note("anchor: promote anchored " + s.id + " corrected=" + fmt(s.score) +
                             " over generic " + best.id);
                    best = s;
                }
                break;
            }
        }
    }
    ctx.note("anchor: " + best.id + " corrected=" + fmt(best.score));
    return best.id;
}

namespace {

std::size_t estimated_group_stage_cost(const std::vector<std::string>& plan_groups,
                                       const RetrievalContext& ctx) {
    std::size_t total = 0;
    for (const auto& gid : plan_groups) {
        const SkillGroup& g = ctx.pool.at(gid);
        total += std::min<std::size_t>(ctx.library.at(g.lead).payload.size(),
                                       ctx.config.budgets.payload_cap);
    }
    return total;
}

}  // namespace

GroupPlan expand_supports(GroupPlan plan, const std::vector<ScoredGroup>& shortlist,
                          RetrievalContext& ctx) {
    if (plan.empty() || ctx.config.ablation.no_group_expansion) return plan;

    while (true) {
        // Group cap first, then the character guard.
        if (plan.all().size() >= static_cast<std::size_t>(ctx.config.budgets.group_cap)) {
            ctx.note("support stop: group cap reached");
            break;
        }
        std::set<std::string> in_plan;
        for (const auto& id : plan.all()) in_plan.insert(id);

        std::set<std::string> eligible;
        for (const auto& s : shortlist) {
            if (!in_plan.count(s.id)) eligible.insert(s.id);
        }
        if (!ctx.config.ablation.no_group_graph) {
            for (const auto& gid : plan.all()) {
                for (const auto& n : ctx.graph.positive_neighbors(gid)) {
                    if (!in_plan.count(n)) eligible.insert(n);
                }
            }
        }
        if (eligible.empty()) {
            ctx.note("support stop: no eligible groups");
            break;
        }

        std::string best_id;
        double best_score = -std::numeric_limits<double>::infinity();
        for (const auto& id : eligible) {
            double score = u_sup(support_features(ctx.pool.at(id), plan, ctx),
                                 ctx.config.weights);
            if (score > best_score || (score == best_score && id < best_id)) {
                best_score = score;
                best_id = id;
            }
        }
        if (best_score < ctx.config.weights.delta_sup) {
            ctx.note("support stop: best " + best_id + " u_sup=" + fmt(best_score) +
                     " < delta_sup=" + fmt(ctx.config.weights.delta_sup));
            break;
        }
        std::vector<std::string> prospective = plan.all();
        prospective.push_back(best_id);
        if (estimated_group_stage_cost(prospective, ctx) >
            static_cast<std::size_t>(ctx.config.budgets.context_cap)) {
            ctx.note("support stop: context guard");
            break;
        }
        plan.supports.push_back(best_id);
        for (const auto& id : ctx.pool.at(best_id).skill_ids()) ctx.activated.insert(id);
        ctx.note("support add: " + best_id + " u_sup=" + fmt(best_score));
    }
    return plan;
}

namespace {

// Exact context guard: render the prospective contract and measure it.
bool fits_context(const GroupPlan& plan, const std::vector<PresentedSkill>& skills,
                  const RetrievalContext& ctx) {
    PresentedSkills tmp;
    tmp.skills = skills;
    CoverageDebt debt = coverage_debt(ctx.high_confidence, tmp, ctx.library);
    ContractInputs in;
    if (!plan.anchor.empty()) in.anchor = &ctx.pool.at(plan.anchor);
    for (const auto& gid : plan.supports) in.supports.push_back(&ctx.pool.at(gid));
    in.presented = skills;
    in.debt = debt.uncovered;
    ExecutionContract c = format_contract(in, ctx.schema, ctx.high_confidence, ctx.library);
    return render_contract(c).size() <= static_cast<std::size_t>(ctx.config.budgets.context_cap);
}

bool can_add_skill(const GroupPlan& plan, const PresentedSkills& presented,
                   const PresentedSkill& candidate, const RetrievalContext& ctx) {
    if (presented.skills.size() >= static_cast<std::size_t>(ctx.config.budgets.top_n)) {
        return false;
    }
    std::vector<PresentedSkill> prospective = presented.skills;
    prospective.push_back(candidate);
    return fits_context(plan, prospective, ctx);
}

PresentedSkill make_presented(const Skill& s, const RetrievalContext& ctx) {
    return {s.id, truncate_payload(s.payload, ctx.config.budgets.payload_cap)};
}

// Positive marginal facet, check, artifact, or connectivity evidence is the
// bottleneck admission requirement.
bool positive_marginal_evidence(const Skill& s, const FeatureVector& h,
                                const PresentedSkills& presented,
                                const RetrievalContext& ctx) {
    if (h.facet_coverage > 0.0 || h.check_support > 0.0 || h.connectivity > 0.0) return true;
    std::set<std::string> presented_artifacts;
    for (const auto& p : presented.skills) {
        for (const auto& [tok, f] : ctx.library.at(p.id).facets) {
            if (f.category == FacetCategory::artifact) presented_artifacts.insert(tok);
        }
    }
    for (const auto& [tok, f] : s.facets) {
        if (f.category == FacetCategory::artifact && !presented_artifacts.count(tok)) {
            return true;
        }
    }
    return false;
}

}  // namespace

PresentedSkills bottleneck(const GroupPlan& plan, const RetrievalContext& ctx) {
    PresentedSkills presented;
    if (plan.empty()) return presented;

    // Leads first, anchor then supports in selection order, duplicates once.
    for (const auto& gid : plan.all()) {
        const SkillGroup& g = ctx.pool.at(gid);
        if (presented.contains(g.lead)) continue;
        PresentedSkill p = make_presented(ctx.library.at(g.lead), ctx);
        if (!can_add_skill(plan, presented, p, ctx)) {
            ctx.note("leads stop: budget at " + g.lead);
            break;
        }
        presented.total_cost += p.payload.size();
        presented.skills.push_back(std::move(p));
        ctx.note("lead add: " + g.lead);
    }

    std::set<std::string> members = plan_skill_union(plan, ctx);
    while (true) {
        if (presented.skills.size() >= static_cast<std::size_t>(ctx.config.budgets.top_n)) {
            ctx.note("bottleneck stop: budget full");
            break;
        }
        std::string best_id;
        double best_score = -std::numeric_limits<double>::infinity();
        FeatureVector best_features;
        for (const auto& id : members) {
            if (!ctx.activated.count(id) || presented.contains(id)) continue;
            const Skill& s = ctx.library.at(id);
            FeatureVector h = skill_features(s, presented, plan, ctx);
            if (!positive_marginal_evidence(s, h, presented, ctx)) continue;
            double score = u_bot(h, ctx.config.weights);
            if (score > best_score || (score == best_score && id < best_id)) {
                best_score = score;
                best_id = id;
                best_features = h;
            }
        }
        if (best_id.empty()) {
            ctx.note("bottleneck stop: no candidate with marginal evidence");
            break;
        }
        if (best_score < ctx.config.weights.delta_bot) {
            ctx.note("bottleneck stop: best " + best_id + " u_bot=" + fmt(best_score) +
                     " < delta_bot=" + fmt(ctx.config.weights.delta_bot));
            break;
        }
        PresentedSkill p = make_presented(ctx.library.at(best_id), ctx);
        if (!can_add_skill(plan, presented, p, ctx)) {
            ctx.note("bottleneck stop: context guard at " + best_id);
            break;
        }
        presented.total_cost += p.payload.size();
        presented.skills.push_back(std::move(p));
        ctx.note("bottleneck add: " + best_id + " u_bot=" + fmt(best_score));
    }
    return presented;
}

CoverageDebt coverage_debt(const FacetSet& high_confidence, const PresentedSkills& presented,
                           const Library& library) {
    CoverageDebt debt;
    for (const auto& [tok, f] : high_confidence) {
        bool covered = false;
        for (const auto& p : presented.skills) {
            if (library.at(p.id).facets.contains(tok)) {
                covered = true;
                break;
            }
        }
        if (!covered) debt.uncovered.push_back(tok);
    }
    return debt;
}

void backfill(PresentedSkills& presented, CoverageDebt& debt, const GroupPlan& plan,
              const RetrievalContext& ctx) {
    if (ctx.config.ablation.no_backfill) return;
    int used = 0;
    while (!debt.empty() && used < ctx.config.budgets.backfill_cap &&
           presented.skills.size() < static_cast<std::size_t>(ctx.config.budgets.top_n)) {
        std::set<std::string> debt_tokens(debt.uncovered.begin(), debt.uncovered.end());

        std::string best_id;
        std::size_t best_covered = 0;
        double best_score = 0.0;
        for (const auto& id : ctx.activated) {
            if (presented.contains(id)) continue;
            const Skill& s = ctx.library.at(id);
            std::size_t covers = 0;
            for (const auto& tok : debt_tokens) {
                if (s.facets.contains(tok)) ++covers;
            }
            if (covers == 0) continue;
            if (negative_conflict(s.negative_facets, ctx)) continue;
            PresentedSkill p = make_presented(s, ctx);
            if (!can_add_skill(plan, presented, p, ctx)) continue;
            double score = u_bot(skill_features(s, presented, plan, ctx), ctx.config.weights);
            if (covers > best_covered ||
                (covers == best_covered &&
                 (score > best_score || (score == best_score && id < best_id)))) {
                best_covered = covers;
                best_score = score;
                best_id = id;
            }
        }
        if (best_id.empty()) {
            ctx.note("backfill stop: no eligible skill");
            break;
        }
        PresentedSkill p = make_presented(ctx.library.at(best_id), ctx);
        presented.total_cost += p.payload.size();
        presented.skills.push_back(std::move(p));
        ++used;
        debt = coverage_debt(ctx.high_confidence, presented, ctx.library);
        ctx.note("backfill add: " + best_id + " covered=" + std::to_string(best_covered) +
                 " remaining_debt=" + std::to_string(debt.uncovered.size()));
    }
}

GroupPlan anchor_prune(GroupPlan plan, const PresentedSkills& presented,
                       const RetrievalContext& ctx) {
    if (plan.empty()) return plan;

    // Promote an anchored support over a generic anchor it was demoted by.
    if (!ctx.config.ablation.no_anchor_selection && ctx.schema.has_anchors()) {
        const SkillGroup& anchor_group = ctx.pool.at(plan.anchor);
        double anchor_b =
            anchor_bonus(ctx.library.at(anchor_group.lead), ctx.schema, ctx.high_confidence);
        if (anchor_b < 0.0) {
            for (std::size_t i = 0; i < plan.supports.size(); ++i) {
                const SkillGroup& g = ctx.pool.at(plan.supports[i]);
                double b = anchor_bonus(ctx.library.at(g.lead), ctx.schema, ctx.high_confidence);
                if (b > 0.0 && presented.contains(g.lead)) {
                    ctx.note("prune: promote " + g.id + " to anchor over " + plan.anchor);
                    std::string old = plan.anchor;
                    plan.anchor = plan.supports[i];
                    plan.supports[i] = old;
                    break;
                }
            }
        }
    }

    // Drop supports that contribute neither a presented skill nor a contract
    // field (negative cues feed AVOID).
    std::vector<std::string> kept;
    for (const auto& gid : plan.supports) {
        const SkillGroup& g = ctx.pool.at(gid);
        bool contributes = false;
        for (const auto& id : g.skill_ids()) {
            if (presented.contains(id)) contributes = true;
        }
        if (!contributes) {
            for (const auto& id : g.skill_ids()) {
                if (!ctx.library.at(id).negatives.empty()) contributes = true;
            }
        }
        if (contributes) {
            kept.push_back(gid);
        } else {
            ctx.note("prune: drop " + gid + " (no contribution)");
        }
    }
    plan.supports = std::move(kept);
    return plan;
}

namespace {

RetrievalResult finish(const GroupPlan& plan, PresentedSkills presented, CoverageDebt debt,
                       RetrievalContext& ctx) {
    RetrievalResult result;
    result.plan = plan;
    result.presented = std::move(presented);
    result.debt = std::move(debt);
    result.schema = ctx.schema;
    result.high_confidence = ctx.high_confidence;

    ContractInputs in;
    if (!plan.anchor.empty()) in.anchor = &ctx.pool.at(plan.anchor);
    for (const auto& gid : plan.supports) in.supports.push_back(&ctx.pool.at(gid));
    in.presented = result.presented.skills;
    in.debt = result.debt.uncovered;
    result.contract = format_contract(in, ctx.schema, ctx.high_confidence, ctx.library);
    result.contract_text = render_contract(result.contract);
    if (ctx.trace) result.trace = *ctx.trace;
    return result;
}

}  // namespace

RetrievalResult retrieve(const std::string& query, const Library& library,
                         const GroupPool& pool, const GroupGraph& graph,
                         const InvertedIndex& index, const Dictionaries& dicts,
                         const Config& config, bool want_trace) {
    std::vector<std::string> trace;
    RetrievalContext ctx{library, pool, graph, index, config};
    ctx.trace = want_trace ? &trace : nullptr;

    ctx.schema = extract_schema(query, library, dicts);
    ctx.high_confidence = high_confidence_facets(ctx.schema, library, config.gate_mode);
    ctx.seeds = seed_retrieve_tokens(ctx.schema.all().tokens(), library, config.budgets.seed_k,
                                     config.budgets.posting_cap);
    for (std::size_t i = 0; i < ctx.seeds.size(); ++i) {
        ctx.seed_score[ctx.seeds[i].id] = ctx.seeds[i].score;
        ctx.seed_rank[ctx.seeds[i].id] = static_cast<int>(i);
        ctx.activated.insert(ctx.seeds[i].id);
        ctx.note("seed: " + ctx.seeds[i].id + " score=" + fmt(ctx.seeds[i].score));
    }

    if (config.ablation.retrieved_skills_only) {
        GroupPlan plan;  // groups bypassed entirely
        PresentedSkills presented;
        for (const auto& seed : ctx.seeds) {
            PresentedSkill p = make_presented(library.at(seed.id), ctx);
            if (!can_add_skill(plan, presented, p, ctx)) break;
            presented.total_cost += p.payload.size();
            presented.skills.push_back(std::move(p));
        }
        CoverageDebt debt = coverage_debt(ctx.high_confidence, presented, library);
        ctx.note("retrieved_skills_only: presented=" + std::to_string(presented.skills.size()));
        return finish(plan, std::move(presented), std::move(debt), ctx);
    }

    std::vector<std::string> candidates = candidate_groups(ctx);
    for (const auto& gid : candidates) {
        for (const auto& id : pool.at(gid).skill_ids()) ctx.activated.insert(id);
    }
    ctx.note("candidates: " + std::to_string(candidates.size()));

    std::vector<ScoredGroup> shortlist = top_groups(candidates, ctx);
    std::optional<std::string> anchor = select_anchor(shortlist, ctx);
    if (!anchor) {
        ctx.note("no anchor: empty shortlist");
        PresentedSkills presented;
        CoverageDebt debt = coverage_debt(ctx.high_confidence, presented, library);
        GroupPlan plan;
        return finish(plan, std::move(presented), std::move(debt), ctx);
    }

    GroupPlan plan;
    plan.anchor = *anchor;
    plan = expand_supports(std::move(plan), shortlist, ctx);

    PresentedSkills presented = bottleneck(plan, ctx);
    CoverageDebt debt = coverage_debt(ctx.high_confidence, presented, library);
    ctx.note("debt: " + std::to_string(debt.uncovered.size()));
    backfill(presented, debt, plan, ctx);
    plan = anchor_prune(std::move(plan), presented, ctx);

    return finish(plan, std::move(presented), std::move(debt), ctx);
}

std::string retrieval_result_json(const RetrievalResult& result, const Config& config,
                                  bool include_trace) {
    ordered_json j;
    j["plan"]["anchor"] = result.plan.anchor.empty() ? ordered_json(nullptr)
                                                     : ordered_json(result.plan.anchor);
    j["plan"]["supports"] = result.plan.supports;
    ordered_json skills = ordered_json::array();
    for (const auto& p : result.presented.skills) {
        ordered_json s;
        s["id"] = p.id;
        s["payload"] = p.payload;
        s["chars"] = p.payload.size();
        skills.push_back(std::move(s));
    }
    j["skills"] = std::move(skills);
    j["debt"] = result.debt.uncovered;

    ordered_json contract;
    contract["start"]["skill"] = result.contract.start_skill;
    contract["start"]["reason"] = result.contract.start_reason;
    ordered_json support = ordered_json::array();
    for (const auto& line : result.contract.support) {
        ordered_json s;
        s["skill"] = line.skill;
        s["role"] = line.role;
        s["reason"] = line.reason;
        support.push_back(std::move(s));
    }
    contract["support"] = std::move(support);
    contract["check"] = result.contract.check;
    contract["avoid"] = result.contract.avoid;
    ordered_json presented_ids = ordered_json::array();
    for (const auto& p : result.contract.skills) presented_ids.push_back(p.id);
    contract["skills"] = std::move(presented_ids);
    contract["debt"] = result.contract.debt;
    j["contract"] = std::move(contract);

    j["contract_text"] = result.contract_text;
    if (include_trace) j["trace"] = result.trace;
    j["config"] = ordered_json::parse(config_provenance_json(config));
    return j.dump(2) + "\n";
}

}  // namespace goskills
