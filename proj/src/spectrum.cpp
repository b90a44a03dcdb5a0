#include "rlift/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "rlift/error.hpp"
#include "rlift/numeric.hpp"

namespace rlift {

namespace {

using Operator = std::function<void(std::span<const double>, std::span<double>)>;
using Projector = std::function<void(std::span<double>)>;

double norm_of(std::span<const double> v) { return std::sqrt(compensated_dot(v, v)); }

void balance_in_place(int n, int h, std::span<double> v) {
    for (int i = 0; i < h; ++i) {
        CompensatedSum s;
        for (int j = 0; j < n; ++j) s.add(v[static_cast<std::size_t>(i) * n + j]);
        double mean = s.value() / n;
        for (int j = 0; j < n; ++j) v[static_cast<std::size_t>(i) * n + j] -= mean;
    }
}

struct Extreme {
    double ritz = 0.0;
    double estimate = 0.0;  // beta_k |s_k|
    std::vector<double> s;  // eigenvector of T_k
};

struct LanczosOutcome {
    std::vector<double> vec_max, vec_min;  // unit vectors in the original space
    std::size_t iterations = 0;
    bool converged = false;
};

// Plain three-term Lanczos with a second pass to form Ritz vectors, so memory
// stays O(dim) regardless of the number of steps. Loss of orthogonality only
// produces duplicate copies of converged Ritz values, which is harmless for
// the two extremes we want.
LanczosOutcome lanczos_extremes(std::size_t dim, const Operator& op, const Projector& project,
                                std::vector<double> start, double tol, std::size_t max_iter, bool want_min) {
    LanczosOutcome out;
    if (project) project(start);
    double s0 = norm_of(start);
    if (s0 == 0.0) throw Error(ErrorCode::InvalidArgument, "degenerate Lanczos start vector");
    for (double& t : start) t /= s0;

    std::vector<double> alpha, beta;
    std::vector<double> q_prev(dim, 0.0), q = start, w(dim);
    double beta_prev = 0.0;

    // one recurrence step; returns alpha and leaves the unnormalised next vector in w
    auto step = [&](const std::vector<double>& qc, const std::vector<double>& qp, double bp) {
        op(qc, w);
        if (project) project(w);
        for (std::size_t t = 0; t < dim; ++t) w[t] -= bp * qp[t];
        double a = compensated_dot(w, qc);
        for (std::size_t t = 0; t < dim; ++t) w[t] -= a * qc[t];
        double a2 = compensated_dot(w, qc);
        for (std::size_t t = 0; t < dim; ++t) w[t] -= a2 * qc[t];
        return a + a2;
    };

    auto extreme = [&](bool want_max, double b_last) {
        Extreme e;
        e.ritz = tridiagonal_extreme(alpha, beta, want_max);
        e.s = tridiagonal_eigenvector(alpha, beta, e.ritz);
        e.estimate = b_last * std::fabs(e.s.back());
        return e;
    };

    Extreme emax, emin;
    double scale = 0.0;
    std::size_t next_check = 1;
    for (std::size_t k = 0; k < max_iter; ++k) {
        double a = step(q, q_prev, beta_prev);
        alpha.push_back(a);
        double b = norm_of(w);
        scale = std::max(scale, std::fabs(a) + b + beta_prev);
        bool breakdown = b <= 1e-12 * std::max(scale, 1.0);
        out.iterations = k + 1;
        if (breakdown || k + 1 == max_iter || k + 1 >= next_check) {
            double b_last = breakdown ? 0.0 : b;
            emax = extreme(true, b_last);
            if (want_min) emin = extreme(false, b_last);
            bool ok = emax.estimate <= tol && (!want_min || emin.estimate <= tol);
            if (ok || breakdown) {
                out.converged = true;
                break;
            }
            next_check = k + 1 + std::max<std::size_t>(4, (k + 1) / 10);
        }
        beta.push_back(b);
        q_prev.swap(q);
        for (std::size_t t = 0; t < dim; ++t) q[t] = w[t] / b;
        beta_prev = b;
    }
    // keep T consistent with the Ritz data even if the loop ran out
    if (beta.size() >= alpha.size()) beta.resize(alpha.size() - 1);

    // second pass: replay the recurrence and accumulate the Ritz vectors
    const std::size_t k_used = alpha.size();
    out.vec_max.assign(dim, 0.0);
    if (want_min) out.vec_min.assign(dim, 0.0);
    std::fill(q_prev.begin(), q_prev.end(), 0.0);
    q = start;
    beta_prev = 0.0;
    for (std::size_t k = 0; k < k_used; ++k) {
        for (std::size_t t = 0; t < dim; ++t) out.vec_max[t] += emax.s[k] * q[t];
        if (want_min)
            for (std::size_t t = 0; t < dim; ++t) out.vec_min[t] += emin.s[k] * q[t];
        if (k + 1 == k_used) break;
        step(q, q_prev, beta_prev);
        q_prev.swap(q);
        for (std::size_t t = 0; t < dim; ++t) q[t] = w[t] / beta[k];
        beta_prev = beta[k];
    }
    for (auto* v : {&out.vec_max, &out.vec_min}) {
        if (v->empty()) continue;
        if (project) project(*v);
        double nv = norm_of(*v);
        if (nv > 0)
            for (double& t : *v) t /= nv;
    }
    return out;
}

std::vector<double> random_start(std::size_t dim, const SeededRng& rng) {
    auto eng = rng.engine();
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> v(dim);
    for (double& t : v) t = g(eng);
    return v;
}

struct Rayleigh {
    double value;
    double residual;
};

Rayleigh rayleigh_of(const Operator& op, std::span<const double> v) {
    std::vector<double> av(v.size());
    op(v, av);
    double vv = compensated_dot(v, v);
    if (vv == 0.0) return {0.0, 0.0};
    double r = compensated_dot(v, av) / vv;
    CompensatedSum res;
    for (std::size_t t = 0; t < v.size(); ++t) {
        double z = av[t] - r * v[t];
        res.add(z * z);
    }
    return {r, std::sqrt(res.value() / vv)};
}

// Helmert basis of the balanced subspace of one fibre: column k (1..n-1) is
// (1,..,1,-k,0,..)/sqrt(k(k+1)) with k ones.
void helmert_transpose(int n, std::span<const double> v, std::span<double> coords) {
    double prefix = 0.0;
    for (int k = 1; k < n; ++k) {
        prefix += v[k - 1];
        coords[k - 1] = (prefix - k * v[k]) / std::sqrt(static_cast<double>(k) * (k + 1));
    }
}

void helmert_apply(int n, std::span<const double> coords, std::span<double> v) {
    double suffix = 0.0;  // sum over k > j of c_k / sqrt(k(k+1))
    for (int j = n - 1; j >= 0; --j) {
        double own = j >= 1 ? -j * coords[j - 1] / std::sqrt(static_cast<double>(j) * (j + 1)) : 0.0;
        v[j] = suffix + own;
        if (j >= 1) suffix += coords[j - 1] / std::sqrt(static_cast<double>(j) * (j + 1));
    }
}

DenseMatrix balanced_block(const Lift& lift) {
    const int n = lift.n(), h = lift.h();
    const std::size_t m = static_cast<std::size_t>(n - 1) * h;
    DenseMatrix b(m);
    std::vector<double> coords(n - 1, 0.0), x(lift.size()), mx(lift.size());
    for (int i = 0; i < h; ++i)
        for (int k = 0; k < n - 1; ++k) {
            std::fill(coords.begin(), coords.end(), 0.0);
            coords[k] = 1.0;
            std::fill(x.begin(), x.end(), 0.0);
            helmert_apply(n, coords, std::span<double>(x).subspan(static_cast<std::size_t>(i) * n, n));
            apply_M_into(lift, x, mx);
            const std::size_t col = static_cast<std::size_t>(i) * (n - 1) + k;
            for (int f = 0; f < h; ++f) {
                helmert_transpose(n, std::span<const double>(mx).subspan(static_cast<std::size_t>(f) * n, n),
                                  coords);
                for (int r = 0; r < n - 1; ++r) b(static_cast<std::size_t>(f) * (n - 1) + r, col) = coords[r];
            }
        }
    // symmetrise away rounding differences
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = r + 1; c < m; ++c) {
            double avg = 0.5 * (b(r, c) + b(c, r));
            b(r, c) = b(c, r) = avg;
        }
    return b;
}

void require_dense(const Lift& lift) {
    if (lift.size() > kDenseLimit)
        throw Error(ErrorCode::TooLarge, "dense path limited to nh <= " + std::to_string(kDenseLimit));
}

}  // namespace

DenseMatrix dense_adjacency(const Lift& lift) {
    require_dense(lift);
    DenseMatrix a(lift.size());
    const int n = lift.n();
    const auto& edges = lift.base().edges();
    for (std::size_t e = 0; e < edges.size(); ++e)
        for (int j = 0; j < n; ++j) {
            std::size_t u = static_cast<std::size_t>(edges[e].u) * n + j;
            std::size_t v = static_cast<std::size_t>(edges[e].v) * n + lift.perm(static_cast<int>(e))[j];
            a(u, v) += 1.0;
            a(v, u) += 1.0;
        }
    return a;
}

std::vector<double> dense_spectrum(const Lift& lift) {
    auto vals = symmetric_eigen(dense_adjacency(lift), false).values;
    std::reverse(vals.begin(), vals.end());
    return vals;
}

std::vector<double> new_spectrum(const Lift& lift) {
    require_dense(lift);
    if (lift.n() == 1) return {};
    auto vals = symmetric_eigen(balanced_block(lift), false).values;
    std::reverse(vals.begin(), vals.end());
    return vals;
}

double lambda_top(const Lift& lift, double tol, const SeededRng& rng) {
    const std::size_t dim = lift.size();
    Operator op = [&](std::span<const double> x, std::span<double> y) { apply_M_into(lift, x, y); };
    auto start = random_start(dim, rng.derive(1));
    auto res = lanczos_extremes(dim, op, nullptr, start, tol, 10 * dim + 10, false);
    return rayleigh_of(op, res.vec_max).value;
}

SpectralReport lambda_star(const Lift& lift, double tol, std::size_t max_iter, const SeededRng& rng) {
    if (!(tol > 0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
    const int n = lift.n(), h = lift.h();
    const std::size_t dim = lift.size();
    SpectralReport rep;
    rep.method = "iterative";
    rep.lambda_top = lambda_top(lift, tol, rng);
    rep.witness = LiftVector(n, h);
    if (n == 1) return rep;  // balanced subspace is {0}

    if (max_iter == 0) max_iter = 10 * dim;
    Operator op = [&](std::span<const double> x, std::span<double> y) { apply_N_into(lift, x, y); };
    Projector proj = [&](std::span<double> v) { balance_in_place(n, h, v); };
    auto res = lanczos_extremes(dim, op, proj, random_start(dim, rng.derive(2)), tol, max_iter, true);

    Rayleigh top = rayleigh_of(op, res.vec_max), bottom = rayleigh_of(op, res.vec_min);
    bool use_top = std::fabs(top.value) >= std::fabs(bottom.value);
    const Rayleigh& best = use_top ? top : bottom;
    rep.lambda_star = std::fabs(best.value);
    rep.residual = best.residual;
    rep.iterations = res.iterations;
    rep.converged = res.converged;
    rep.witness = LiftVector(n, h, use_top ? res.vec_max : res.vec_min);
    return rep;
}

SpectralReport lambda_star_dense(const Lift& lift) {
    require_dense(lift);
    const int n = lift.n(), h = lift.h();
    SpectralReport rep;
    rep.method = "dense";
    rep.lambda_top = dense_spectrum(lift).front();
    rep.witness = LiftVector(n, h);
    if (n == 1) return rep;
    auto eig = symmetric_eigen(balanced_block(lift), true);
    std::size_t m = eig.values.size();
    std::size_t pick = std::fabs(eig.values.front()) > std::fabs(eig.values.back()) ? 0 : m - 1;
    std::vector<double> x(lift.size());
    std::vector<double> coords(n - 1);
    for (int i = 0; i < h; ++i) {
        for (int k = 0; k < n - 1; ++k) coords[k] = eig.vectors(static_cast<std::size_t>(i) * (n - 1) + k, pick);
        helmert_apply(n, coords, std::span<double>(x).subspan(static_cast<std::size_t>(i) * n, n));
    }
    Operator op = [&](std::span<const double> a, std::span<double> b) { apply_N_into(lift, a, b); };
    Rayleigh r = rayleigh_of(op, x);
    rep.lambda_star = std::fabs(r.value);
    rep.residual = r.residual;
    rep.witness = LiftVector(n, h, std::move(x));
    return rep;
}

}  // namespace rlift
