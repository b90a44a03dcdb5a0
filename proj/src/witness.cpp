#include "rlift/witness.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rlift/error.hpp"
#include "rlift/linalg.hpp"
#include "rlift/numeric.hpp"
#include "rlift/spectrum.hpp"

namespace rlift {

namespace {

// Top eigenpair of the induced subgraph, dense.
std::pair<double, std::vector<double>> top_eigenpair(const Lift& lift, const std::vector<int>& vertices,
                                                     std::size_t cap) {
    if (vertices.size() > cap) throw Error(ErrorCode::DenseGuard, "induced subgraph exceeds the dense cap");
    const std::size_t k = vertices.size();
    if (k == 0) return {0.0, {}};
    DenseMatrix a(k);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = r + 1; c < k; ++c)
            if (lift.adjacent(vertices[r], vertices[c])) a(r, c) = a(c, r) = 1.0;
    SymmetricEigen eig = symmetric_eigen(a, true);
    std::vector<double> vec(k);
    for (std::size_t r = 0; r < k; ++r) vec[r] = eig.vectors(r, k - 1);
    double s = 0.0;
    for (double v : vec) s += v;
    if (s < 0)
        for (double& v : vec) v = -v;
    return {eig.values.back(), vec};
}

void check_vertices(const Lift& lift, const std::vector<int>& vertices) {
    std::set<int> seen;
    for (int v : vertices) {
        if (v < 0 || static_cast<std::size_t>(v) >= lift.size())
            throw Error(ErrorCode::VertexOutOfRange, "vertex outside the lift");
        if (!seen.insert(v).second) throw Error(ErrorCode::InvalidArgument, "repeated vertex");
    }
}

}  // namespace

double rayleigh_quotient(const Lift& lift, const LiftVector& x) {
    double nx = x.norm2();
    if (nx == 0.0) return 0.0;
    LiftVector nxv = apply_N(lift, x);
    return std::fabs(compensated_dot(x.values(), nxv.values())) / nx;
}

WitnessResult clique_witness(const Lift& lift, const std::vector<int>& vertices) {
    check_vertices(lift, vertices);
    const int n = lift.n();
    if (n < 2 && !vertices.empty()) throw Error(ErrorCode::InvalidArgument, "clique witness needs n >= 2");
    std::vector<int> fibres;
    for (int v : vertices) fibres.push_back(lift.fibre_of(v));
    std::vector<int> sorted = fibres;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw Error(ErrorCode::FibresNotDistinct, "two vertices share a fibre");
    for (std::size_t a = 0; a < fibres.size(); ++a)
        for (std::size_t b = a + 1; b < fibres.size(); ++b)
            if (!lift.base().adjacent(fibres[a], fibres[b]))
                throw Error(ErrorCode::FibresNotAdjacent, "fibres are not adjacent in the base graph");

    WitnessResult r;
    r.vector = LiftVector(n, lift.h());
    auto x = r.vector.mutable_values();
    for (int v : vertices) {
        int f = lift.fibre_of(v);
        for (int j = 0; j < n; ++j) x[lift.vertex(f, j)] = -1.0 / (n - 1);
        x[v] = 1.0;
    }
    const double s = static_cast<double>(vertices.size());
    r.claimed_bound = s - 1.0;
    r.rayleigh = rayleigh_quotient(lift, r.vector);
    r.bound_met = r.rayleigh >= r.claimed_bound - 1e-10;

    LiftVector mx = apply_M(lift, r.vector);
    CompensatedSum full, support;
    std::vector<char> on_support(lift.h(), 0);
    for (int f : fibres) on_support[f] = 1;
    for (std::size_t t = 0; t < mx.size(); ++t) {
        double diff = mx[t] - r.claimed_bound * r.vector[t];
        full.add(diff * diff);
        if (on_support[lift.fibre_of(static_cast<int>(t))]) support.add(diff * diff);
    }
    r.residual = std::sqrt(full.value());
    r.support_residual = std::sqrt(support.value());
    return r;
}

WitnessResult bipartition_witness(const Lift& lift, const std::vector<std::vector<int>>& halves) {
    const int n = lift.n(), h = lift.h();
    if (n % 2 != 0) throw Error(ErrorCode::BadHalfSizes, "n must be even");
    if (static_cast<int>(halves.size()) != h) throw Error(ErrorCode::BadHalfSizes, "one half per fibre required");
    std::vector<std::vector<char>> in_half(h, std::vector<char>(n, 0));
    for (int i = 0; i < h; ++i) {
        if (static_cast<int>(halves[i].size()) != n / 2) throw Error(ErrorCode::BadHalfSizes, "half of wrong size");
        for (int j : halves[i]) {
            if (j < 0 || j >= n || in_half[i][j]) throw Error(ErrorCode::BadHalfSizes, "bad or repeated index");
            in_half[i][j] = 1;
        }
    }
    WitnessResult r;
    r.vector = LiftVector(n, h);
    auto x = r.vector.mutable_values();
    const double s = 1.0 / std::sqrt(static_cast<double>(n) * h);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < n; ++j) x[lift.vertex(i, j)] = in_half[i][j] ? s : -s;

    long long acc = 0;
    const auto& edges = lift.base().edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto& p = lift.perm(static_cast<int>(e));
        long long same = 0;
        for (int j = 0; j < n; ++j) same += in_half[edges[e].u][j] && in_half[edges[e].v][p[j]];
        acc += 4 * same - n;
    }
    r.claimed_bound = 2.0 * static_cast<double>(acc) / (static_cast<double>(n) * h);
    LiftVector nx = apply_N(lift, r.vector);
    double form = compensated_dot(r.vector.values(), nx.values());
    r.rayleigh = std::fabs(form) / r.vector.norm2();
    r.residual = std::fabs(form / r.vector.norm2() - r.claimed_bound);
    r.bound_met = r.residual <= 1e-9 * std::max(1.0, std::fabs(r.claimed_bound));
    return r;
}

double induced_top_eigenvalue(const Lift& lift, const std::vector<int>& vertices, std::size_t dense_cap) {
    check_vertices(lift, vertices);
    return top_eigenpair(lift, vertices, dense_cap).first;
}

double star_lambda(int d) {
    if (d < 1) throw Error(ErrorCode::InvalidArgument, "star needs d >= 1");
    DenseMatrix a(static_cast<std::size_t>(d) + 1);
    for (int k = 1; k <= d; ++k) a(0, k) = a(k, 0) = 1.0;
    return symmetric_eigen(a, false).values.back();
}

WitnessResult embed_subgraph_witness(const Lift& lift, const std::vector<int>& vertices, std::size_t dense_cap) {
    check_vertices(lift, vertices);
    const int n = lift.n(), h = lift.h();
    if (static_cast<double>(vertices.size()) > n - h * std::sqrt(static_cast<double>(n)))
        throw Error(ErrorCode::SubgraphTooLarge, "subgraph exceeds n - h sqrt(n) vertices");
    auto [lambda, top] = top_eigenpair(lift, vertices, dense_cap);

    WitnessResult r;
    r.subgraph_lambda = lambda;
    r.claimed_bound = lambda - 3.5;
    r.vector = LiftVector(n, h);
    auto x = r.vector.mutable_values();
    std::vector<char> inside(lift.size(), 0);
    std::vector<CompensatedSum> fibre_sum(h);
    std::vector<int> outside(h, n);
    for (std::size_t k = 0; k < vertices.size(); ++k) {
        int v = vertices[k];
        x[v] = top[k];
        inside[v] = 1;
        fibre_sum[lift.fibre_of(v)].add(top[k]);
        --outside[lift.fibre_of(v)];
    }
    for (std::size_t t = 0; t < lift.size(); ++t) {
        if (inside[t]) continue;
        int f = lift.fibre_of(static_cast<int>(t));
        x[t] = -fibre_sum[f].value() / outside[f];
    }
    r.rayleigh = rayleigh_quotient(lift, r.vector);
    r.bound_met = r.rayleigh >= r.claimed_bound;
    return r;
}

PatternWitnessBound pattern_witness_bound(const Lift& lift, const Pattern& p,
                                          const std::map<ClassId, std::vector<int>>& witness, bool compute_spectra) {
    if (p.n() != lift.n() || !(p.base() == lift.base()))
        throw Error(ErrorCode::WitnessMismatch, "pattern and lift disagree on n or the base graph");
    const int n = lift.n();
    std::vector<int> label_of(lift.size(), -1);
    std::vector<ClassId> labels;
    std::vector<int> support;
    for (const auto& [c, cnt] : p.sizes()) {
        auto it = witness.find(c);
        if (it == witness.end() || static_cast<long long>(it->second.size()) != cnt)
            throw Error(ErrorCode::WitnessMismatch, "witness set missing or of wrong size");
        for (int v : it->second) {
            if (v < 0 || static_cast<std::size_t>(v) >= lift.size() || lift.fibre_of(v) != c.fibre ||
                label_of[v] >= 0)
                throw Error(ErrorCode::WitnessMismatch, "witness vertex outside its fibre or reused");
            label_of[v] = static_cast<int>(labels.size());
            support.push_back(v);
        }
        labels.push_back(c);
    }
    for (const auto& [c, vs] : witness)
        if (!vs.empty() && p.size_of(c) == 0) throw Error(ErrorCode::WitnessMismatch, "witness for an absent class");

    std::map<ClassPair, long long> recount;
    const auto& edges = lift.base().edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto& perm = lift.perm(static_cast<int>(e));
        for (int j = 0; j < n; ++j) {
            int lu = label_of[lift.vertex(edges[e].u, j)], lv = label_of[lift.vertex(edges[e].v, perm[j])];
            if (lu < 0 || lv < 0) continue;
            ClassId x = labels[lu], y = labels[lv];
            ++recount[x < y ? ClassPair{x, y} : ClassPair{y, x}];
        }
    }
    if (recount != p.counts()) throw Error(ErrorCode::WitnessMismatch, "edge counts differ from the pattern");

    PatternWitnessBound b;
    const double sd = std::sqrt(static_cast<double>(p.d()));
    b.potency = potency(p);
    std::vector<long double> fibre_sum(p.h(), 0.0L);
    long double nu = 0.0L, alpha = 0.0L;
    for (const auto& [c, cnt] : p.sizes()) {
        long double w = p.weight(c);
        alpha += cnt;
        nu += w * w * cnt;
        fibre_sum[c.fibre] += w * cnt;
    }
    long double mbar = 0.0L;
    for (int i = 0; i < p.h(); ++i)
        for (int j : p.base().neighbours(i)) mbar += fibre_sum[i] * fibre_sum[j];
    b.alpha = static_cast<double>(alpha);
    b.nu = static_cast<double>(nu);
    b.mbar_form = static_cast<double>(mbar / n);
    b.literal_star_bound = 2.0 * b.potency - 40.0 * sd;
    b.literal_subgraph_bound = b.literal_star_bound - b.alpha * std::sqrt(10.0) / n;
    if (b.nu > 0) {
        b.normalized_star_bound = (2.0 * b.potency - 4.0 * sd * b.nu) / b.nu;
        b.normalized_subgraph_bound = (2.0 * b.potency - 4.0 * sd * b.nu - b.mbar_form) / b.nu;
    }
    if (compute_spectra && support.size() <= kSubgraphDenseLimit) {
        b.spectra_computed = true;
        b.lambda_star = lift.size() <= kDenseLimit ? lambda_star_dense(lift).lambda_star : lambda_star(lift).lambda_star;
        std::sort(support.begin(), support.end());
        b.lambda_subgraph = top_eigenpair(lift, support, kSubgraphDenseLimit).first;
        const double tol = 1e-8 * std::max(1.0, b.lambda_star);
        b.literal_star_ok = b.lambda_star >= b.literal_star_bound - tol;
        b.literal_subgraph_ok = b.lambda_subgraph >= b.literal_subgraph_bound - tol;
        b.normalized_star_ok = b.lambda_star >= b.normalized_star_bound - tol;
        b.normalized_subgraph_ok = b.lambda_subgraph >= b.normalized_subgraph_bound - tol;
    }
    return b;
}

}  // namespace rlift
