#include "rlift/linalg.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "rlift/error.hpp"

namespace rlift {

namespace {

// Householder reduction to tridiagonal form (after the EISPACK tred2
// routine). On exit d holds the diagonal, e the subdiagonal in e[1..n), and
// v the accumulated orthogonal transform when want_vectors.
void tred2(std::size_t n, std::vector<double>& v, std::vector<double>& d, std::vector<double>& e,
           bool want_vectors) {
    auto V = [&](std::size_t i, std::size_t j) -> double& { return v[i * n + j]; };
    for (std::size_t j = 0; j < n; ++j) d[j] = V(n - 1, j);

    for (std::size_t i = n - 1; i > 0; --i) {
        double scale = 0.0, h = 0.0;
        for (std::size_t k = 0; k < i; ++k) scale += std::fabs(d[k]);
        if (scale == 0.0) {
            e[i] = d[i - 1];
            for (std::size_t j = 0; j < i; ++j) {
                d[j] = V(i - 1, j);
                V(i, j) = 0.0;
                V(j, i) = 0.0;
            }
        } else {
            for (std::size_t k = 0; k < i; ++k) {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            double f = d[i - 1];
            double g = std::sqrt(h);
            if (f > 0) g = -g;
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                V(j, i) = f;
                g = e[j] + V(j, j) * f;
                for (std::size_t k = j + 1; k <= i - 1; ++k) {
                    g += V(k, j) * d[k];
                    e[k] += V(k, j) * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for (std::size_t j = 0; j < i; ++j) {
                e[j] /= h;
                f += e[j] * d[j];
            }
            double hh = f / (h + h);
            for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                g = e[j];
                for (std::size_t k = j; k <= i - 1; ++k) V(k, j) -= (f * e[k] + g * d[k]);
                d[j] = V(i - 1, j);
                V(i, j) = 0.0;
            }
        }
        d[i] = h;
    }

    if (!want_vectors) {
        for (std::size_t j = 0; j < n; ++j) d[j] = V(j, j);
        e[0] = 0.0;
        return;
    }

    for (std::size_t i = 0; i + 1 < n; ++i) {
        V(n - 1, i) = V(i, i);
        V(i, i) = 1.0;
        double h = d[i + 1];
        if (h != 0.0) {
            for (std::size_t k = 0; k <= i; ++k) d[k] = V(k, i + 1) / h;
            for (std::size_t j = 0; j <= i; ++j) {
                double g = 0.0;
                for (std::size_t k = 0; k <= i; ++k) g += V(k, i + 1) * V(k, j);
                for (std::size_t k = 0; k <= i; ++k) V(k, j) -= g * d[k];
            }
        }
        for (std::size_t k = 0; k <= i; ++k) V(k, i + 1) = 0.0;
    }
    for (std::size_t j = 0; j < n; ++j) {
        d[j] = V(n - 1, j);
        V(n - 1, j) = 0.0;
    }
    V(n - 1, n - 1) = 1.0;
    e[0] = 0.0;
}

// Implicit QL on the tridiagonal matrix left by tred2.
void tql2(std::size_t n, std::vector<double>& v, std::vector<double>& d, std::vector<double>& e,
          bool want_vectors) {
    auto V = [&](std::size_t i, std::size_t j) -> double& { return v[i * n + j]; };
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    double f = 0.0, tst1 = 0.0;
    const double eps = DBL_EPSILON;
    const std::size_t max_sweeps = 60 * n + 60;
    std::size_t sweeps = 0;
    for (std::size_t l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::fabs(d[l]) + std::fabs(e[l]));
        std::size_t m = l;
        while (m < n - 1 && std::fabs(e[m]) > eps * tst1) ++m;

        if (m > l) {
            do {
                if (++sweeps > max_sweeps) throw Error(ErrorCode::InvalidArgument, "QL iteration did not converge");
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                double dl1 = d[l + 1];
                double h = g - d[l];
                for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
                f += h;

                p = d[m];
                double c = 1.0, c2 = c, c3 = c;
                double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (std::size_t ii = m; ii-- > l;) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[ii];
                    h = c * p;
                    r = std::hypot(p, e[ii]);
                    e[ii + 1] = s * r;
                    s = e[ii] / r;
                    c = p / r;
                    p = c * d[ii] - s * g;
                    d[ii + 1] = h + s * (c * g + s * d[ii]);
                    if (want_vectors)
                        for (std::size_t k = 0; k < n; ++k) {
                            h = V(k, ii + 1);
                            V(k, ii + 1) = s * V(k, ii) + c * h;
                            V(k, ii) = c * V(k, ii) - s * h;
                        }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::fabs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

}  // namespace

SymmetricEigen symmetric_eigen(const DenseMatrix& a, bool want_vectors) {
    const std::size_t n = a.dim();
    SymmetricEigen out;
    if (n == 0) return out;
    std::vector<double> v = a.data(), d(n), e(n);
    tred2(n, v, d, e, want_vectors);
    tql2(n, v, d, e, want_vectors);

    std::vector<std::size_t> order(n);
    for (std::size_t k = 0; k < n; ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return d[x] < d[y]; });
    out.values.resize(n);
    for (std::size_t k = 0; k < n; ++k) out.values[k] = d[order[k]];
    if (want_vectors) {
        out.vectors = DenseMatrix(n);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v[r * n + order[k]];
    }
    return out;
}

static double pivmin_of(const std::vector<double>& beta) {
    double m = 1.0;
    for (double b : beta) m = std::max(m, b * b);
    return DBL_MIN * m;
}

std::size_t sturm_count(const std::vector<double>& alpha, const std::vector<double>& beta, double x) {
    const double pivmin = pivmin_of(beta);
    std::size_t count = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        double b2 = i == 0 ? 0.0 : beta[i - 1] * beta[i - 1];
        q = alpha[i] - x - (i == 0 ? 0.0 : b2 / q);
        if (std::fabs(q) < pivmin) q = -pivmin;
        if (q < 0) ++count;
    }
    return count;
}

double tridiagonal_extreme(const std::vector<double>& alpha, const std::vector<double>& beta, bool want_max) {
    const std::size_t k = alpha.size();
    if (k == 0) return 0.0;
    double lo = alpha[0], hi = alpha[0];
    for (std::size_t i = 0; i < k; ++i) {
        double r = (i > 0 ? std::fabs(beta[i - 1]) : 0.0) + (i + 1 < k ? std::fabs(beta[i]) : 0.0);
        lo = std::min(lo, alpha[i] - r);
        hi = std::max(hi, alpha[i] + r);
    }
    const double pivmin = pivmin_of(beta);
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (hi - lo <= 2.0 * DBL_EPSILON * std::max(std::fabs(lo), std::fabs(hi)) + pivmin) break;
        std::size_t c = sturm_count(alpha, beta, mid);
        bool above = want_max ? (c == k) : (c >= 1);
        (above ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> tridiagonal_eigenvector(const std::vector<double>& alpha, const std::vector<double>& beta,
                                            double lambda) {
    const std::size_t n = alpha.size();
    if (n == 0) return {};
    if (n == 1) return {1.0};
    double scale = 0.0;
    for (double a : alpha) scale = std::max(scale, std::fabs(a));
    for (double b : beta) scale = std::max(scale, std::fabs(b));
    const double tiny = DBL_EPSILON * std::max(scale, std::fabs(lambda)) + DBL_MIN;

    // LU with partial pivoting of T - lambda I (LAPACK gttrf layout)
    std::vector<double> dl(beta.begin(), beta.begin() + (n - 1)), dd(n), du = dl, du2(n, 0.0);
    std::vector<char> swapped(n, 0);
    for (std::size_t i = 0; i < n; ++i) dd[i] = alpha[i] - lambda;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::fabs(dd[i]) >= std::fabs(dl[i])) {
            if (dd[i] == 0.0) dd[i] = tiny;
            double fact = dl[i] / dd[i];
            dl[i] = fact;
            dd[i + 1] -= fact * du[i];
        } else {
            double fact = dd[i] / dl[i];
            dd[i] = dl[i];
            dl[i] = fact;
            double temp = du[i];
            du[i] = dd[i + 1];
            dd[i + 1] = temp - fact * dd[i + 1];
            if (i + 2 < n) {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du[i + 1];
            }
            swapped[i] = 1;
        }
    }
    if (dd[n - 1] == 0.0) dd[n - 1] = tiny;

    auto solve = [&](std::vector<double>& b) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (!swapped[i]) {
                b[i + 1] -= dl[i] * b[i];
            } else {
                double temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - dl[i] * b[i];
            }
        }
        b[n - 1] /= dd[n - 1];
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / dd[n - 2];
        for (std::size_t i = n - 2; i-- > 0;) b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / dd[i];
    };

    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = 1.0 + 0.37 * std::sin(1.0 + static_cast<double>(i));
    for (int it = 0; it < 3; ++it) {
        solve(y);
        double nrm = 0.0;
        for (double t : y) nrm = std::max(nrm, std::fabs(t));
        if (!(nrm > 0.0) || !std::isfinite(nrm)) break;
        for (double& t : y) t /= nrm;
    }
    double s = 0.0;
    for (double t : y) s += t * t;
    s = std::sqrt(s);
    for (double& t : y) t /= s;
    return y;
}

}  // namespace rlift
