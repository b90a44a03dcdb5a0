#include "rlift/pattern.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "rlift/error.hpp"
#include "rlift/numeric.hpp"

namespace rlift {

namespace {

ClassPair ordered(const ClassId& x, const ClassId& y) { return x < y ? ClassPair{x, y} : ClassPair{y, x}; }

bool gamma_adjacent_exponents(int k1, int k2, int d) {
    int diff = std::abs(k1 - k2);
    // 4^diff < d, without overflow for large gaps
    return diff < 31 && std::ldexp(1.0, 2 * diff) < d;
}

}  // namespace

Pattern::Pattern(BaseGraph base, long long n, std::map<ClassId, long long> a, std::map<ClassPair, long long> e)
    : base_(std::move(base)), n_(n) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "pattern needs n >= 1");
    for (const auto& [c, cnt] : a) {
        if (c.fibre < 0 || c.fibre >= base_.h() || c.exponent < 0)
            throw Error(ErrorCode::InvalidArgument, "class outside the base graph or negative exponent");
        if (cnt < 0 || cnt > n) throw Error(ErrorCode::InvalidArgument, "class size outside [0, n]");
        if (cnt > 0) a_[c] = cnt;
    }
    for (const auto& [pr, cnt] : e) {
        if (cnt == 0) continue;
        const auto& [x, y] = pr;
        if (!base_.adjacent(x.fibre, y.fibre))
            throw Error(ErrorCode::InvalidArgument, "edge count between non-adjacent fibres");
        long long ax = size_of(x), ay = size_of(y);
        if (cnt < 0 || cnt > std::min(ax, ay))
            throw Error(ErrorCode::InvalidArgument, "edge count outside [0, min(a, a')]");
        e_[ordered(x, y)] += cnt;
    }
    for (const auto& [pr, cnt] : e_)
        if (cnt > std::min(size_of(pr.first), size_of(pr.second)))
            throw Error(ErrorCode::InvalidArgument, "edge count listed twice exceeds min(a, a')");
}

double Pattern::weight(const ClassId& c) const {
    return std::ldexp(1.0, c.exponent) / std::sqrt(static_cast<double>(n_) * base_.h());
}

long long Pattern::size_of(const ClassId& c) const {
    auto it = a_.find(c);
    return it == a_.end() ? 0 : it->second;
}

long long Pattern::count_of(const ClassId& x, const ClassId& y) const {
    auto it = e_.find(ordered(x, y));
    return it == e_.end() ? 0 : it->second;
}

int Pattern::w0_exponent() const {
    int k = -1;
    for (const auto& [c, cnt] : a_) k = k < 0 ? c.exponent : std::min(k, c.exponent);
    return k;
}

ClassSet Pattern::classes() const {
    ClassSet s;
    for (const auto& [c, cnt] : a_) s.push_back(c);
    return s;
}

Pattern Pattern::restricted(const ClassSet& s) const {
    std::map<ClassId, long long> a;
    for (const ClassId& c : s) {
        long long v = size_of(c);
        if (v > 0) a[c] = v;
    }
    std::map<ClassPair, long long> e;
    for (const auto& [pr, cnt] : e_)
        if (a.count(pr.first) && a.count(pr.second)) e[pr] = cnt;
    return Pattern(base_, n_, std::move(a), std::move(e));
}

std::optional<std::string> z_type_violation(const Pattern& p) {
    std::vector<long long> per_fibre(p.h(), 0);
    long double sum4 = 0.0L;
    int kmin = -1, kmax = -1;
    for (const auto& [c, cnt] : p.sizes()) {
        per_fibre[c.fibre] += cnt;
        sum4 += std::ldexp(1.0L, 2 * c.exponent) * cnt;
        kmin = kmin < 0 ? c.exponent : std::min(kmin, c.exponent);
        kmax = std::max(kmax, c.exponent);
    }
    for (int i = 0; i < p.h(); ++i)
        if (per_fibre[i] > p.n()) return "fibre " + std::to_string(i) + " holds more than n vertices";
    if (kmax >= 0 && std::ldexp(1.0, kmax - kmin) > p.d()) return "weights span more than one [w0, w0 d] band";
    if (sum4 > 10.0L * p.n() * p.h()) return "sum of w^2 a exceeds 10";
    return std::nullopt;
}

GammaView::GammaView(const Pattern& p) {
    for (const auto& [c, cnt] : p.sizes()) {
        ids_.push_back(c);
        a_.push_back(cnt);
        w_.push_back(p.weight(c));
    }
    adj_.assign(ids_.size(), {});
    const int d = p.d();
    const long long n = p.n();
    const double cutoff = std::exp(2.0) - 1.0;
    // classes grouped by fibre for the neighbour scan
    std::vector<std::vector<int>> by_fibre(p.h());
    for (std::size_t v = 0; v < ids_.size(); ++v) by_fibre[ids_[v].fibre].push_back(static_cast<int>(v));
    for (std::size_t v = 0; v < ids_.size(); ++v) {
        const ClassId& x = ids_[v];
        for (int f : p.base().neighbours(x.fibre))
            for (int u : by_fibre[f]) {
                const ClassId& y = ids_[u];
                if (!gamma_adjacent_exponents(x.exponent, y.exponent, d)) continue;
                long long e = p.count_of(x, y);
                __int128 num = static_cast<__int128>(e) * n - static_cast<__int128>(a_[v]) * a_[u];
                double mu = static_cast<double>(a_[v]) * static_cast<double>(a_[u]) / static_cast<double>(n);
                double eps = static_cast<double>(num) / (static_cast<double>(a_[v]) * static_cast<double>(a_[u]));
                double term = w_[v] * w_[u] * (static_cast<double>(num) / static_cast<double>(n));
                adj_[v].push_back({u, mu, eps, eps > cutoff, term});
            }
    }
}

int GammaView::index_of(const ClassId& c) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), c);
    return it != ids_.end() && *it == c ? static_cast<int>(it - ids_.begin()) : -1;
}

std::size_t GammaView::edge_count() const {
    std::size_t m = 0;
    for (const auto& a : adj_) m += a.size();
    return m / 2;
}

static bool passes(const GammaEdge& e, EdgeFilter f) {
    return f == EdgeFilter::All || (f == EdgeFilter::LD) == e.ld;
}

double GammaView::local_potency(int v, const std::vector<char>& mask, EdgeFilter f) const {
    CompensatedSum s;
    for (const GammaEdge& e : adj_[v])
        if (mask[e.to] && passes(e, f)) s.add(e.term);
    return std::fabs(s.value());
}

double GammaView::potency(const std::vector<char>& mask, EdgeFilter f) const {
    CompensatedSum s;
    for (std::size_t v = 0; v < adj_.size(); ++v) {
        if (!mask[v]) continue;
        for (const GammaEdge& e : adj_[v])
            if (e.to > static_cast<int>(v) && mask[e.to] && passes(e, f)) s.add(e.term);
    }
    return std::fabs(s.value());
}

std::vector<DeviationRow> deviation_table(const Pattern& p) {
    GammaView g(p);
    std::vector<DeviationRow> rows;
    for (std::size_t v = 0; v < g.size(); ++v)
        for (const GammaEdge& e : g.edges(static_cast<int>(v)))
            if (e.to > static_cast<int>(v)) rows.push_back({g.id(static_cast<int>(v)), g.id(e.to), e.mu, e.eps, e.term, e.ld});
    return rows;
}

std::vector<VertexAggregates> aggregates(const Pattern& p) {
    GammaView g(p);
    const double d = p.d(), sd = std::sqrt(d);
    std::vector<double> fibre_mass(p.h(), 0.0);
    for (std::size_t v = 0; v < g.size(); ++v) {
        double w = g.weight(static_cast<int>(v));
        fibre_mass[g.id(static_cast<int>(v)).fibre] += w * w * static_cast<double>(g.size_of(static_cast<int>(v)));
    }
    std::vector<char> all(g.size(), 1);
    std::vector<VertexAggregates> out;
    for (std::size_t vi = 0; vi < g.size(); ++vi) {
        int v = static_cast<int>(vi);
        VertexAggregates ag;
        ag.id = g.id(v);
        for (int f : p.base().neighbours(ag.id.fibre)) ag.n_fibre += fibre_mass[f];
        const double w = g.weight(v);
        const double a = static_cast<double>(g.size_of(v));
        for (const GammaEdge& e : g.edges(v)) {
            double w2 = g.weight(e.to);
            ag.n_hat += w2 * w2 * static_cast<double>(g.size_of(e.to)) * (w2 / (w * sd));
        }
        ag.big_m = std::max(ag.n_fibre / (a * w * w * d), std::exp(1.0) * static_cast<double>(p.n()) / a);
        ag.small_m = std::log(ag.big_m) / ag.big_m;
        ag.local = g.local_potency(v, all, EdgeFilter::All);
        ag.local_ld = g.local_potency(v, all, EdgeFilter::LD);
        ag.local_sd = g.local_potency(v, all, EdgeFilter::SD);
        out.push_back(ag);
    }
    return out;
}

double potency(const Pattern& p) {
    GammaView g(p);
    return g.potency(std::vector<char>(g.size(), 1), EdgeFilter::All);
}

double potency_ld(const Pattern& p) {
    GammaView g(p);
    return g.potency(std::vector<char>(g.size(), 1), EdgeFilter::LD);
}

double potency_sd(const Pattern& p) {
    GammaView g(p);
    return g.potency(std::vector<char>(g.size(), 1), EdgeFilter::SD);
}

double potency_tilde(const Pattern& p) {
    CompensatedSum pos, neg;
    for (const auto& row : deviation_table(p)) (row.term > 0 ? pos : neg).add(std::fabs(row.term));
    return std::max(pos.value(), neg.value());
}

ExtractedPattern extract_pattern(const ZVector& y, const Lift& lift) {
    const LiftVector& v = y.vector();
    if (v.n() != lift.n() || v.h() != lift.h()) throw Error(ErrorCode::DimensionMismatch, "vector/lift mismatch");
    if (y.d() != lift.d()) throw Error(ErrorCode::NotZVector, "Z-vector built for a different degree");
    std::map<ClassId, long long> a;
    std::map<ClassId, std::vector<int>> witness;
    const int n = lift.n();
    for (std::size_t t = 0; t < v.size(); ++t) {
        int k = y.exponent(t);
        if (k < 0) continue;
        ClassId c{static_cast<int>(t) / n, k};
        ++a[c];
        witness[c].push_back(static_cast<int>(t));
    }
    std::map<ClassPair, long long> e;
    const auto& edges = lift.base().edges();
    for (std::size_t ei = 0; ei < edges.size(); ++ei) {
        const auto& p = lift.perm(static_cast<int>(ei));
        for (int j = 0; j < n; ++j) {
            int ku = y.exponent(static_cast<std::size_t>(edges[ei].u) * n + j);
            int kv = y.exponent(static_cast<std::size_t>(edges[ei].v) * n + p[j]);
            if (ku < 0 || kv < 0) continue;
            ++e[ordered({edges[ei].u, ku}, {edges[ei].v, kv})];
        }
    }
    return {Pattern(lift.base(), n, std::move(a), std::move(e)), std::move(witness)};
}

using nlohmann::json;

std::string pattern_to_json(const Pattern& p) {
    json j;
    j["n"] = p.n();
    j["h"] = p.h();
    j["d"] = p.d();
    j["w0_exponent"] = p.w0_exponent();
    json edges = json::array();
    for (const Edge& e : p.base().edges()) edges.push_back({e.u, e.v});
    j["base_edges"] = edges;
    json a = json::array();
    for (const auto& [c, cnt] : p.sizes()) a.push_back({c.fibre, c.exponent, cnt});
    j["a"] = a;
    json e = json::array();
    for (const auto& [pr, cnt] : p.counts())
        e.push_back({pr.first.fibre, pr.first.exponent, pr.second.fibre, pr.second.exponent, cnt});
    j["e"] = e;
    return j.dump();
}

Pattern pattern_from_json(const std::string& text) {
    try {
        json j = json::parse(text);
        std::vector<std::pair<int, int>> edges;
        for (const auto& e : j.at("base_edges")) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
        BaseGraph base = make_base_graph(j.at("h").get<int>(), edges);
        if (j.contains("d") && j.at("d").get<int>() != base.d())
            throw Error(ErrorCode::ParseError, "declared degree does not match base_edges");
        std::map<ClassId, long long> a;
        for (const auto& r : j.at("a")) a[{r.at(0).get<int>(), r.at(1).get<int>()}] = r.at(2).get<long long>();
        std::map<ClassPair, long long> e;
        for (const auto& r : j.at("e")) {
            ClassId x{r.at(0).get<int>(), r.at(1).get<int>()}, y{r.at(2).get<int>(), r.at(3).get<int>()};
            e[ordered(x, y)] = r.at(4).get<long long>();
        }
        return Pattern(std::move(base), j.at("n").get<long long>(), std::move(a), std::move(e));
    } catch (const json::exception& ex) {
        throw Error(ErrorCode::ParseError, std::string("pattern JSON: ") + ex.what());
    }
}

}  // namespace rlift
