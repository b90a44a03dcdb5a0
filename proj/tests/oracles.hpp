#pragma once
// Reference implementations used only by tests. They avoid the library's
// operators and aggregate code paths: dense matrices built straight from the
// permutations, potencies and thresholds summed straight from the pattern maps.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "rlift/graph.hpp"
#include "rlift/pattern.hpp"
#include "rlift/quadform.hpp"
#include "rlift/reduction.hpp"

namespace oracle {

using rlift::BaseGraph;
using rlift::ClassId;
using rlift::Lift;
using rlift::Pattern;

inline Eigen::MatrixXd adjacency(const Lift& lift) {
    const int n = lift.n();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(lift.size(), lift.size());
    const auto& edges = lift.base().edges();
    for (std::size_t e = 0; e < edges.size(); ++e)
        for (int j = 0; j < n; ++j) {
            int u = edges[e].u * n + j, v = edges[e].v * n + lift.perm(static_cast<int>(e))[j];
            a(u, v) = a(v, u) = 1.0;
        }
    return a;
}

inline Eigen::MatrixXd base_adjacency(const BaseGraph& g) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.h(), g.h());
    for (const auto& e : g.edges()) a(e.u, e.v) = a(e.v, e.u) = 1.0;
    return a;
}

// N = M - Mbar with Mbar_uv = 1/n when the fibres are adjacent.
inline Eigen::MatrixXd n_matrix(const Lift& lift) {
    Eigen::MatrixXd m = adjacency(lift);
    const int n = lift.n();
    for (std::size_t u = 0; u < lift.size(); ++u)
        for (std::size_t v = 0; v < lift.size(); ++v)
            if (lift.base().adjacent(static_cast<int>(u) / n, static_cast<int>(v) / n)) m(u, v) -= 1.0 / n;
    return m;
}

inline std::vector<double> eigenvalues(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(v.begin(), v.end());
    return v;
}

inline Eigen::VectorXd to_eigen(const rlift::LiftVector& x) {
    Eigen::VectorXd v(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) v(t) = x[t];
    return v;
}

// sum over ordered pairs with (x_u, y_v) inside (estar) or outside E*
inline double restricted_form(const Eigen::MatrixXd& a, const rlift::LiftVector& x, const rlift::LiftVector& y,
                              double sqrt_d, bool estar) {
    long double s = 0.0L;
    for (std::size_t u = 0; u < x.size(); ++u)
        for (std::size_t v = 0; v < y.size(); ++v) {
            if (a(u, v) == 0.0) continue;
            bool in = x[u] > 0 && y[v] > 0 && x[u] / y[v] < sqrt_d && y[v] / x[u] < sqrt_d;
            if (in == estar) s += static_cast<long double>(x[u]) * a(u, v) * y[v];
        }
    return static_cast<double>(s);
}

inline bool gamma_adjacent(const Pattern& p, const ClassId& x, const ClassId& y) {
    if (!p.base().adjacent(x.fibre, y.fibre)) return false;
    double ratio = p.weight(x) / p.weight(y);
    double sd = std::sqrt(static_cast<double>(p.d()));
    return ratio > 1.0 / sd && ratio < sd;
}

inline double edge_term(const Pattern& p, const ClassId& x, const ClassId& y) {
    long double a = p.size_of(x), b = p.size_of(y), e = p.count_of(x, y);
    return static_cast<double>(static_cast<long double>(p.weight(x)) * p.weight(y) * (e - a * b / p.n()));
}

inline double edge_eps(const Pattern& p, const ClassId& x, const ClassId& y) {
    long double a = p.size_of(x), b = p.size_of(y), e = p.count_of(x, y);
    return static_cast<double>(e * p.n() / (a * b) - 1.0L);
}

inline bool is_ld(const Pattern& p, const ClassId& x, const ClassId& y) {
    return edge_eps(p, x, y) > std::exp(2.0) - 1.0;
}

enum class Kind { All, LD, SD };

inline bool keep_edge(const Pattern& p, const ClassId& x, const ClassId& y, Kind k) {
    if (k == Kind::All) return true;
    return (k == Kind::LD) == is_ld(p, x, y);
}

// |sum over unordered Gamma edges inside s|
inline double potency_direct(const Pattern& p, const std::vector<ClassId>& s, Kind k = Kind::All) {
    long double sum = 0.0L;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (gamma_adjacent(p, s[i], s[j]) && keep_edge(p, s[i], s[j], k)) sum += edge_term(p, s[i], s[j]);
    return std::fabs(static_cast<double>(sum));
}

inline double local_direct(const Pattern& p, const std::vector<ClassId>& s, const ClassId& v, Kind k) {
    long double sum = 0.0L;
    for (const ClassId& u : s)
        if (!(u == v) && gamma_adjacent(p, v, u) && keep_edge(p, v, u, k)) sum += edge_term(p, v, u);
    return std::fabs(static_cast<double>(sum));
}

struct DirectAggregates {
    double n_fibre, n_hat, m;
};

inline DirectAggregates aggregates_direct(const Pattern& p, const ClassId& v) {
    DirectAggregates ag{0, 0, 0};
    const double w = p.weight(v), a = static_cast<double>(p.size_of(v)), d = p.d(), sd = std::sqrt(d);
    for (const auto& [c, cnt] : p.sizes()) {
        if (!p.base().adjacent(v.fibre, c.fibre)) continue;
        double w2 = p.weight(c);
        ag.n_fibre += w2 * w2 * cnt;
        if (gamma_adjacent(p, v, c)) ag.n_hat += w2 * w2 * cnt * w2 / (w * sd);
    }
    double big = std::max(ag.n_fibre / (a * w * w * d), std::exp(1.0) * p.n() / a);
    ag.m = std::log(big) / big;
    return ag;
}

// Every condition of the branch at every kept class, recomputed from scratch.
inline std::string check_reduction(const Pattern& p, const std::vector<ClassId>& kept, double L, rlift::Branch b,
                                   double rel_tol = 1e-9) {
    const double sd = std::sqrt(static_cast<double>(p.d()));
    const Kind k = b == rlift::Branch::LD ? Kind::LD : b == rlift::Branch::SD ? Kind::SD : Kind::All;
    const double f = b == rlift::Branch::General ? 2.0 : 1.0;
    for (const ClassId& v : kept) {
        const double lp = local_direct(p, kept, v, k);
        const auto ag = aggregates_direct(p, v);
        const double a = static_cast<double>(p.size_of(v)), w = p.weight(v);
        std::vector<std::pair<std::string, double>> th;
        th.emplace_back("mass", f * L * a * w * w * sd);
        if (b != rlift::Branch::SD) th.emplace_back("nhat", f * L * ag.n_hat / sd);
        if (b != rlift::Branch::LD) {
            th.emplace_back("fibre", f * L * ag.n_fibre * a / (p.n() * sd));
            th.emplace_back("m", f * L * ag.n_fibre * ag.m / sd);
        }
        for (const auto& [name, t] : th)
            if (lp < t * (1.0 - rel_tol))
                return "class (" + std::to_string(v.fibre) + "," + std::to_string(v.exponent) + ") fails " + name;
    }
    return "";
}

inline BaseGraph k33() {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < 3; ++i)
        for (int j = 3; j < 6; ++j) e.emplace_back(i, j);
    return rlift::make_base_graph(6, e);
}

inline BaseGraph octahedron() {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j)
            if (j != i + 3) e.emplace_back(i, j);
    return rlift::make_base_graph(6, e);
}

inline BaseGraph prism() {
    return rlift::make_base_graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {0, 3}, {1, 4}, {2, 5}});
}

inline std::vector<BaseGraph> small_bases() {
    return {rlift::complete_graph(3), rlift::complete_graph(4), rlift::complete_graph(5), rlift::complete_graph(6),
            rlift::cycle_power(4, 1),  rlift::cycle_power(5, 1),  rlift::cycle_power(6, 1),  k33(),
            octahedron(),              prism()};
}

// Valid Z-type pattern with a mix of near-expected, inflated and deflated
// edge counts.
inline Pattern random_pattern(std::mt19937_64& eng, const BaseGraph& base, long long n) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int d = base.d(), h = base.h();
    int band = 0;
    while ((1 << (band + 1)) <= d) ++band;  // exponents k0..k0+band
    const long double budget = 10.0L * n * h;
    int kmax = 0;
    while (std::ldexp(1.0L, 2 * (kmax + 1)) <= budget) ++kmax;
    const int k0 = std::uniform_int_distribution<int>(0, std::min(kmax, 6))(eng);
    std::map<ClassId, long long> a;
    long double mass = 0.0L;
    for (int i = 0; i < h; ++i) {
        long long left = n;
        for (int t = 0; t <= band; ++t) {
            if (unif(eng) < 0.3) continue;
            long double w2 = std::ldexp(1.0L, 2 * (k0 + t));
            long long cap = std::min<long long>(left, static_cast<long long>((budget - mass) / w2));
            if (cap <= 0) continue;
            // sizes spread over several scales
            double frac = std::pow(unif(eng), 3.0);
            long long v = std::max<long long>(1, static_cast<long long>(frac * cap));
            a[{i, k0 + t}] = v;
            left -= v;
            mass += w2 * v;
        }
    }
    std::map<rlift::ClassPair, long long> e;
    for (auto it = a.begin(); it != a.end(); ++it)
        for (auto jt = std::next(it); jt != a.end(); ++jt) {
            if (!base.adjacent(it->first.fibre, jt->first.fibre)) continue;
            long long cap = std::min(it->second, jt->second);
            double mu = static_cast<double>(it->second) * jt->second / n;
            double r = unif(eng);
            long long v;
            if (r < 0.3)
                v = std::llround(mu);
            else if (r < 0.6)
                v = std::llround(mu * (1 + 20 * unif(eng)) + 3 * unif(eng));
            else if (r < 0.8)
                v = std::llround(mu * unif(eng));
            else
                v = std::uniform_int_distribution<long long>(0, cap)(eng);
            v = std::clamp<long long>(v, 0, cap);
            if (v > 0) e[{it->first, jt->first}] = v;
        }
    return Pattern(base, n, a, e);
}

// Pattern on K_{d+1} with one class of size about s per fibre. Pairs of
// "strong" fibres are matched almost fully; pairs touching a weak fibre sit at
// their expected count, so weak classes get removed first. Strong classes
// survive a reduction once d is well above L^2.
inline Pattern dense_pattern(std::mt19937_64& eng, int d, long long n, long long s, double weak_share) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    BaseGraph base = rlift::complete_graph(d + 1);
    std::map<ClassId, long long> a;
    std::vector<char> weak(d + 1);
    for (int i = 0; i <= d; ++i) {
        weak[i] = unif(eng) < weak_share;
        a[{i, 0}] = std::max<long long>(1, std::llround(s * (0.95 + 0.1 * unif(eng))));
    }
    std::map<rlift::ClassPair, long long> e;
    for (auto it = a.begin(); it != a.end(); ++it)
        for (auto jt = std::next(it); jt != a.end(); ++jt) {
            long long cap = std::min(it->second, jt->second);
            long long mu = std::llround(static_cast<double>(it->second) * jt->second / n);
            long long v = weak[it->first.fibre] || weak[jt->first.fibre]
                              ? mu
                              : std::llround(cap * (0.95 + 0.05 * unif(eng)));
            v = std::clamp<long long>(v, 0, cap);
            if (v > 0) e.emplace_hint(e.end(), rlift::ClassPair{it->first, jt->first}, v);
        }
    return Pattern(base, n, a, e);
}

// Random Z-vector on a lift: one band, random support, norm within 10.
inline rlift::ZVector random_zvector(std::mt19937_64& eng, const Lift& lift) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int d = lift.d();
    int band = 0;
    while ((1 << (band + 1)) <= d) ++band;
    const long double nh = static_cast<long double>(lift.size());
    const int k0 = std::uniform_int_distribution<int>(0, 2)(eng);
    const double density = 0.05 + 0.9 * unif(eng);
    std::vector<double> vals(lift.size(), 0.0);
    long double mass = 0.0L;
    std::vector<std::size_t> order(lift.size());
    for (std::size_t t = 0; t < order.size(); ++t) order[t] = t;
    std::shuffle(order.begin(), order.end(), eng);
    for (std::size_t t : order) {
        if (unif(eng) > density) continue;
        int k = k0 + std::uniform_int_distribution<int>(0, band)(eng);
        long double w2 = std::ldexp(1.0L, 2 * k);
        if (mass + w2 > 10.0L * nh) continue;
        mass += w2;
        vals[t] = std::ldexp(1.0, k) / std::sqrt(static_cast<double>(nh));
    }
    return rlift::ZVector(rlift::LiftVector(lift.n(), lift.h(), vals), d);
}

}  // namespace oracle
