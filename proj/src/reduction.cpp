#include "rlift/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "rlift/error.hpp"
#include "rlift/numeric.hpp"

namespace rlift {

const char* branch_name(Branch b) {
    switch (b) {
        case Branch::LD: return "LD";
        case Branch::SD: return "SD";
        case Branch::General: return "general";
    }
    return "?";
}

namespace {

struct Condition {
    std::string name;
    double threshold;
};

EdgeFilter filter_of(Branch b) {
    return b == Branch::LD ? EdgeFilter::LD : b == Branch::SD ? EdgeFilter::SD : EdgeFilter::All;
}

double budget_factor(Branch b) { return b == Branch::LD ? 30.0 : b == Branch::SD ? 55.0 : 150.0; }

void require_l(double L) {
    if (!(L >= 20.0)) throw Error(ErrorCode::DomainError, "reductions need L >= 20");
}

std::vector<Condition> conditions_for(const Pattern& p, const GammaView& g, const VertexAggregates& ag, int v,
                                      Branch b, double L) {
    const double sd = std::sqrt(static_cast<double>(p.d()));
    const double a = static_cast<double>(g.size_of(v));
    const double w = g.weight(v);
    const double n = static_cast<double>(p.n());
    const double mass = a * w * w * sd;
    switch (b) {
        case Branch::LD: return {{"LD1", L * mass}, {"LD2", L * ag.n_hat / sd}};
        case Branch::SD:
            return {{"SD1", L * mass}, {"SD2", L * ag.n_fibre * a / (n * sd)}, {"SD3", L * ag.n_fibre * ag.small_m / sd}};
        case Branch::General:
            return {{"G1", 2 * L * mass},
                    {"G2", 2 * L * ag.n_hat / sd},
                    {"G3", 2 * L * ag.n_fibre * a / (n * sd)},
                    {"G4", 2 * L * ag.n_fibre * ag.small_m / sd}};
    }
    return {};
}

std::vector<char> mask_of(const GammaView& g, const ClassSet& s) {
    std::vector<char> mask(g.size(), 0);
    for (const ClassId& c : s) {
        int v = g.index_of(c);
        if (v >= 0) mask[v] = 1;
    }
    return mask;
}

ReductionResult run_reduction(const Pattern& p, double L, Branch b) {
    require_l(L);
    GammaView g(p);
    const auto ag = aggregates(p);
    const EdgeFilter f = filter_of(b);
    std::vector<std::vector<Condition>> conds;
    for (std::size_t v = 0; v < g.size(); ++v) conds.push_back(conditions_for(p, g, ag[v], static_cast<int>(v), b, L));

    ReductionResult r;
    r.branch = b;
    r.L = L;
    r.budget_cap = budget_factor(b) * L * std::sqrt(static_cast<double>(p.d()));
    std::vector<char> mask(g.size(), 1);
    r.initial_potency = g.potency(mask, f);

    CompensatedSum removed;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t vi = 0; vi < g.size(); ++vi) {
            if (!mask[vi]) continue;
            int v = static_cast<int>(vi);
            double lp = g.local_potency(v, mask, f);
            for (const Condition& c : conds[vi]) {
                if (lp < c.threshold) {
                    mask[vi] = 0;
                    r.transcript.push_back({g.id(v), c.name, lp, c.threshold});
                    removed.add(lp);
                    changed = true;
                    break;
                }
            }
        }
    }
    for (std::size_t v = 0; v < g.size(); ++v)
        if (mask[v]) r.kept.push_back(g.id(static_cast<int>(v)));
    r.final_potency = g.potency(mask, f);
    r.removed_total = removed.value();
    r.budget_ok = r.removed_total <= r.budget_cap;
    const double slack = 1e-9 * std::max(1.0, r.initial_potency);
    r.retention_ok = r.final_potency >= r.initial_potency - r.removed_total - slack;
    return r;
}

}  // namespace

ReductionResult reduce_ld(const Pattern& p, double L) { return run_reduction(p, L, Branch::LD); }
ReductionResult reduce_sd(const Pattern& p, double L) { return run_reduction(p, L, Branch::SD); }
ReductionResult reduce_general(const Pattern& p, double L) { return run_reduction(p, L, Branch::General); }

std::vector<std::string> failed_conditions(const Pattern& p, const ClassSet& kept, const ClassId& c, Branch b,
                                           double L) {
    require_l(L);
    GammaView g(p);
    int v = g.index_of(c);
    if (v < 0) throw Error(ErrorCode::InvalidArgument, "class not present in the pattern");
    const auto ag = aggregates(p);
    auto mask = mask_of(g, kept);
    mask[v] = 1;
    double lp = g.local_potency(v, mask, filter_of(b));
    std::vector<std::string> out;
    for (const Condition& cond : conditions_for(p, g, ag[v], v, b, L))
        if (lp < cond.threshold) out.push_back(cond.name);
    return out;
}

UnlikelinessReport local_unlikeliness(const Pattern& p, const ClassSet& kept, double L, Branch b) {
    GammaView g(p);
    auto mask = mask_of(g, kept);
    const double n = static_cast<double>(p.n());
    UnlikelinessReport rep;
    rep.b_min_ratio = rep.regime_min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t vi = 0; vi < g.size(); ++vi) {
        if (!mask[vi]) continue;
        const double a = static_cast<double>(g.size_of(static_cast<int>(vi)));
        const double log_term = a * std::log(std::exp(1.0) * n / a);
        CompensatedSum b_sum, regime_sum;
        for (const GammaEdge& e : g.edges(static_cast<int>(vi))) {
            if (!mask[e.to]) continue;
            b_sum.add(e.mu * b_function(e.eps));
            if (b == Branch::LD && e.ld) regime_sum.add(e.mu * (1.0 + e.eps / 2.0) * std::log1p(e.eps));
            if (b == Branch::SD && !e.ld) regime_sum.add(e.mu * e.eps * e.eps / 15.0);
        }
        rep.b_min_ratio = std::min(rep.b_min_ratio, b_sum.value() / (L / 10.0 * log_term));
        double regime_ratio = b == Branch::LD   ? regime_sum.value() / (L / 4.0 * log_term)
                              : b == Branch::SD ? regime_sum.value() / (L / 10.0 * log_term)
                                                : b_sum.value() / (L / 10.0 * log_term);
        rep.regime_min_ratio = std::min(rep.regime_min_ratio, regime_ratio);
    }
    rep.b_form_ok = rep.b_min_ratio >= 1.0 - 1e-9;
    rep.regime_form_ok = rep.regime_min_ratio >= 1.0 - 1e-9;
    return rep;
}

DispatchResult reduce(const Pattern& p, double L) {
    require_l(L);
    DispatchResult out;
    GammaView g(p);
    std::vector<char> all(g.size(), 1);
    out.p = g.potency(all, EdgeFilter::All);
    out.p_ld = g.potency(all, EdgeFilter::LD);
    out.p_sd = g.potency(all, EdgeFilter::SD);
    out.reduction = out.p_ld >= out.p / 2.0 ? reduce_ld(p, L) : reduce_sd(p, L);
    out.p_tilde_kept = potency_tilde(p.restricted(out.reduction.kept));
    const double floor = out.p / 2.0 - 55.0 * L * std::sqrt(static_cast<double>(p.d()));
    out.guarantee_ok = out.p_tilde_kept >= floor - 1e-9 * std::max(1.0, out.p);
    out.unlikeliness = local_unlikeliness(p, out.reduction.kept, L, out.reduction.branch);
    return out;
}

ClassSet u_select(const Pattern& p, const ClassSet& u, const ClassId& c, EdgeFilter regime, double L) {
    if (!std::binary_search(u.begin(), u.end(), c)) throw Error(ErrorCode::VertexNotInU, "selection centre not in U");
    if (regime == EdgeFilter::All) throw Error(ErrorCode::InvalidArgument, "u_select needs the LD or SD regime");
    GammaView g(p);
    int v = g.index_of(c);
    if (v < 0) return {};
    auto mask = mask_of(g, u);
    const double n = static_cast<double>(p.n());
    const double d = p.d();
    const double a = static_cast<double>(g.size_of(v));
    const double w = g.weight(v);
    ClassSet out;
    if (regime == EdgeFilter::LD) {
        const double cutoff = L * n / (2.0 * a);
        for (const GammaEdge& e : g.edges(v)) {
            if (!mask[e.to] || !e.ld) continue;
            double w2 = g.weight(e.to);
            if (e.eps * w * w * d / (w2 * w2) >= cutoff) out.push_back(g.id(e.to));
        }
    } else {
        const double n_fibre = aggregates(p)[v].n_fibre;
        const double cutoff = g.local_potency(v, mask, EdgeFilter::SD) / (2.0 * w * w * a * n_fibre);
        for (const GammaEdge& e : g.edges(v)) {
            if (!mask[e.to] || e.ld) continue;
            if (std::fabs(e.eps) / (w * g.weight(e.to) * n) >= cutoff) out.push_back(g.id(e.to));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::size_t> measure_select(const std::vector<std::array<double, 3>>& triples, double c) {
    if (triples.empty()) throw Error(ErrorCode::EmptyInput, "measure_select needs at least one triple");
    if (!(c > 0.0 && c < 1.0)) throw Error(ErrorCode::InvalidArgument, "c must lie in (0,1)");
    CompensatedSum hs, gs;
    for (const auto& [mu, h, g] : triples) {
        if (!(mu > 0 && h > 0 && g > 0)) throw Error(ErrorCode::InvalidArgument, "triples must be positive");
        hs.add(h * mu);
        gs.add(g * mu);
    }
    const double cut = c * hs.value() / gs.value();
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < triples.size(); ++k)
        if (triples[k][1] / triples[k][2] >= cut) out.push_back(k);
    return out;
}

std::string transcript_to_json(const ReductionResult& r) {
    using nlohmann::json;
    json j;
    j["branch"] = branch_name(r.branch);
    j["L"] = r.L;
    j["budget_cap"] = r.budget_cap;
    j["removed_total"] = r.removed_total;
    j["initial_potency"] = r.initial_potency;
    j["final_potency"] = r.final_potency;
    j["budget_ok"] = r.budget_ok;
    j["retention_ok"] = r.retention_ok;
    json kept = json::array();
    for (const ClassId& c : r.kept) kept.push_back({c.fibre, c.exponent});
    j["kept"] = kept;
    json rem = json::array();
    for (const Removal& x : r.transcript)
        rem.push_back({{"fibre", x.vertex.fibre},
                       {"exponent", x.vertex.exponent},
                       {"condition", x.condition},
                       {"local_potency", x.local_potency},
                       {"threshold", x.threshold}});
    j["removals"] = rem;
    return j.dump(2);
}

}  // namespace rlift
