#include "rlift/quadform.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "rlift/error.hpp"
#include "rlift/numeric.hpp"

namespace rlift {

namespace {

void check_shape(const Lift& lift, const LiftVector& x) {
    if (x.size() != lift.size() || x.n() != lift.n())
        throw Error(ErrorCode::DimensionMismatch, "vector does not live on this lift");
}

// integer k >= 0 with t == 2^k, else -1; t is expected to be integral
int exact_log2(double t) {
    if (!(t >= 1.0)) return -1;
    int e;
    double m = std::frexp(t, &e);
    return m == 0.5 ? e - 1 : -1;
}

// nearest k with t ~ 2^k up to relative 1e-9, else -1
int near_log2(double t) {
    if (!(t > 0)) return -1;
    int k = static_cast<int>(std::lround(std::log2(t)));
    if (k < 0) return -1;
    double p = std::ldexp(1.0, k);
    return std::fabs(t - p) <= 1e-9 * p ? k : -1;
}

struct MbarSplit {
    double estar = 0.0;
    double total = 0.0;
};

// M-bar part of the form, both over E* and in total.
MbarSplit mbar_parts(const Lift& lift, const LiftVector& x, const LiftVector& y, double sd) {
    const int n = lift.n(), h = lift.h();
    std::vector<std::vector<double>> ypos(h);
    std::vector<std::vector<long double>> prefix(h);
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < n; ++j)
            if (y.at(i, j) > 0) ypos[i].push_back(y.at(i, j));
        std::sort(ypos[i].begin(), ypos[i].end());
        prefix[i].assign(ypos[i].size() + 1, 0.0L);
        for (std::size_t k = 0; k < ypos[i].size(); ++k) prefix[i][k + 1] = prefix[i][k] + ypos[i][k];
    }
    CompensatedSum estar, total;
    for (int i = 0; i < h; ++i)
        for (int k : lift.base().neighbours(i)) {
            total.add(x.fibre_sum(i) * y.fibre_sum(k) / n);
            const auto& ys = ypos[k];
            for (int j = 0; j < n; ++j) {
                double xu = x.at(i, j);
                if (!(xu > 0)) continue;
                auto lo = std::partition_point(ys.begin(), ys.end(), [&](double v) { return !(xu < sd * v); });
                auto hi = std::partition_point(lo, ys.end(), [&](double v) { return v < sd * xu; });
                long double s = prefix[k][hi - ys.begin()] - prefix[k][lo - ys.begin()];
                estar.add(static_cast<double>(xu * s) / n);
            }
        }
    return {estar.value(), total.value()};
}

struct MSplit {
    double estar = 0.0;
    double total = 0.0;
};

MSplit m_parts(const Lift& lift, const LiftVector& x, const LiftVector& y, double sd) {
    const int n = lift.n();
    CompensatedSum estar, total;
    const auto& edges = lift.base().edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto& p = lift.perm(static_cast<int>(e));
        for (int j = 0; j < n; ++j) {
            std::size_t a = static_cast<std::size_t>(edges[e].u) * n + j;
            std::size_t b = static_cast<std::size_t>(edges[e].v) * n + p[j];
            double t1 = x[a] * y[b], t2 = x[b] * y[a];
            total.add(t1);
            total.add(t2);
            if (in_estar(x[a], y[b], sd)) estar.add(t1);
            if (in_estar(x[b], y[a], sd)) estar.add(t2);
        }
    }
    return {estar.value(), total.value()};
}

}  // namespace

double quad_form(const Lift& lift, OperatorKind kind, const LiftVector& x, const LiftVector& y) {
    check_shape(lift, x);
    check_shape(lift, y);
    switch (kind) {
        case OperatorKind::M: return dot(x, apply_M(lift, y));
        case OperatorKind::Mbar: return dot(x, apply_Mbar(lift, y));
        case OperatorKind::N: return dot(x, apply_N(lift, y));
    }
    return 0.0;
}

double quad_form_restricted(const Lift& lift, OperatorKind kind, const LiftVector& x, const LiftVector& y,
                            Region region) {
    check_shape(lift, x);
    check_shape(lift, y);
    const double sd = std::sqrt(static_cast<double>(lift.d()));
    MSplit m;
    MbarSplit mb;
    if (kind != OperatorKind::Mbar) m = m_parts(lift, x, y, sd);
    if (kind != OperatorKind::M) mb = mbar_parts(lift, x, y, sd);
    double in_m = m.estar, in_mb = mb.estar;
    double out_m = m.total - m.estar, out_mb = mb.total - mb.estar;
    bool inside = region == Region::Estar;
    switch (kind) {
        case OperatorKind::M: return inside ? in_m : out_m;
        case OperatorKind::Mbar: return inside ? in_mb : out_mb;
        case OperatorKind::N: return inside ? in_m - in_mb : out_m - out_mb;
    }
    return 0.0;
}

ZVector::ZVector(LiftVector v, int d) : v_(std::move(v)), d_(d) {
    const double scale = std::sqrt(static_cast<double>(v_.n()) * v_.h());
    exps_.assign(v_.size(), -1);
    hist_.assign(v_.h(), {});
    long double sum4 = 0.0L;
    int kmin = 1 << 30, kmax = -1;
    auto vals = v_.mutable_values();
    for (std::size_t t = 0; t < vals.size(); ++t) {
        if (vals[t] == 0.0) continue;
        if (vals[t] < 0) throw Error(ErrorCode::NotZVector, "negative entry");
        int k = near_log2(vals[t] * scale);
        if (k < 0) throw Error(ErrorCode::NotZVector, "entry is not 2^k/sqrt(nh) with k >= 0");
        vals[t] = std::ldexp(1.0, k) / scale;  // canonical value
        exps_[t] = k;
        sum4 += std::ldexp(1.0L, 2 * k);
        kmin = std::min(kmin, k);
        kmax = std::max(kmax, k);
    }
    if (sum4 > 10.0L * v_.n() * v_.h()) throw Error(ErrorCode::NotZVector, "squared norm exceeds 10");
    if (kmax >= 0 && std::ldexp(1.0, kmax - kmin) > d_)
        throw Error(ErrorCode::NotZVector, "nonzero entries span more than a factor d");
    for (int i = 0; i < v_.h(); ++i) {
        std::map<int, long long> c;
        for (int j = 0; j < v_.n(); ++j) {
            int k = exps_[static_cast<std::size_t>(i) * v_.n() + j];
            if (k >= 0) ++c[k];
        }
        hist_[i].assign(c.begin(), c.end());
    }
}

bool ZVector::empty() const {
    return std::all_of(exps_.begin(), exps_.end(), [](int k) { return k < 0; });
}

LiftVector dyadic_round(const LiftVector& x, const SeededRng& rng) {
    const double nh = static_cast<double>(x.n()) * x.h();
    if (x.norm2() > nh * (1.0 + 1e-9)) throw Error(ErrorCode::NormTooLarge, "rounding needs ||x||^2 <= nh");
    auto eng = rng.engine();
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    LiftVector out(x.n(), x.h());
    auto o = out.mutable_values();
    for (std::size_t v = 0; v < x.size(); ++v) {
        double r = std::fabs(x[v]);
        double u = unif(eng);
        double mag;
        if (r < 1.0) {
            mag = u < r ? 1.0 : 0.0;
        } else {
            int e;
            std::frexp(r, &e);
            double lo = std::ldexp(1.0, e - 1);
            mag = u < (r - lo) / lo ? 2.0 * lo : lo;
        }
        o[v] = x[v] < 0 ? -mag : mag;
    }
    return out;
}

bool in_y_plus(const LiftVector& y) {
    long double sum = 0.0L;
    for (double v : y.values()) {
        if (v == 0.0) continue;
        if (exact_log2(v) < 0) return false;
        sum += static_cast<long double>(v) * v;
    }
    return sum <= 10.0L * y.n() * y.h();
}

namespace {

bool in_d(double v) { return v == 0.0 || exact_log2(std::fabs(v)) >= 0; }

LiftVector positive_part(const LiftVector& v) {
    LiftVector out(v.n(), v.h());
    auto o = out.mutable_values();
    for (std::size_t t = 0; t < v.size(); ++t) o[t] = std::max(v[t], 0.0);
    return out;
}

LiftVector negative_part(const LiftVector& v) {
    LiftVector out(v.n(), v.h());
    auto o = out.mutable_values();
    for (std::size_t t = 0; t < v.size(); ++t) o[t] = std::max(-v[t], 0.0);
    return out;
}

}  // namespace

std::vector<Candidate> polarize(const LiftVector& y, const LiftVector& z) {
    if (y.n() != z.n() || y.h() != z.h()) throw Error(ErrorCode::DimensionMismatch, "shapes differ");
    const double nh = static_cast<double>(y.n()) * y.h();
    for (std::size_t v = 0; v < y.size(); ++v) {
        double a = y[v], b = z[v];
        if (!in_d(a) || !in_d(b)) throw Error(ErrorCode::NotSignCompatible, "entry outside {0, ±2^k}");
        if (a * b < 0) throw Error(ErrorCode::NotSignCompatible, "opposite signs at a vertex");
        double lo = std::min(std::fabs(a), std::fabs(b)), hi = std::max(std::fabs(a), std::fabs(b));
        bool bracket = lo == hi || (lo == 0.0 && hi == 1.0) || (lo >= 1.0 && hi == 2.0 * lo);
        if (!bracket) throw Error(ErrorCode::NotSignCompatible, "entries are not neighbouring roundings");
    }
    if (y.norm2() > 5.0 * nh || z.norm2() > 5.0 * nh)
        throw Error(ErrorCode::NormTooLarge, "roundings must have squared norm at most 5nh");

    LiftVector yp = positive_part(y), ym = negative_part(y), zp = positive_part(z), zm = negative_part(z);
    LiftVector w = yp - zp, u = ym - zm;
    LiftVector wp = positive_part(w), wm = negative_part(w), up = positive_part(u), um = negative_part(u);

    std::vector<Candidate> out;
    out.push_back({"y+", yp});
    out.push_back({"y-", ym});
    out.push_back({"z+", zp});
    out.push_back({"z-", zm});
    out.push_back({"y+ + z-", yp + zm});
    out.push_back({"y- + z+", ym + zp});
    out.push_back({"w+", wp});
    out.push_back({"w-", wm});
    out.push_back({"w+ + w-", wp + wm});
    out.push_back({"u+", up});
    out.push_back({"u-", um});
    out.push_back({"u+ + u-", up + um});
    for (const auto& c : out)
        if (!in_y_plus(c.vec)) throw std::logic_error("polarize produced a vector outside Y+: " + c.label);
    return out;
}

DyadicCertificate dyprop_certificate(const Lift& lift, const LiftVector& x, std::size_t trials,
                                     const SeededRng& rng) {
    check_shape(lift, x);
    DyadicCertificate cert;
    cert.best = LiftVector(lift.n(), lift.h());
    cert.target = std::fabs(quad_form(lift, OperatorKind::N, x, x)) / 12.0;
    if (x.is_zero()) {
        cert.target_met = true;
        return cert;
    }
    bool have = false;
    for (std::size_t t = 0; t < trials; ++t) {
        LiftVector y = dyadic_round(x, rng.derive(2 * t));
        LiftVector z = dyadic_round(x, rng.derive(2 * t + 1));
        for (auto& c : polarize(y, z)) {
            double val = std::fabs(quad_form(lift, OperatorKind::N, c.vec, c.vec));
            if (!have || val > cert.value) {
                have = true;
                cert.value = val;
                cert.best = std::move(c.vec);
                cert.label = c.label;
                cert.trial = t;
            }
        }
    }
    cert.target_met = cert.value >= cert.target;
    return cert;
}

BandSelection band_select(const LiftVector& y, const Lift& lift) {
    check_shape(lift, y);
    if (!in_y_plus(y)) throw Error(ErrorCode::InvalidArgument, "band selection needs a vector in Y+");
    if (y.is_zero()) throw Error(ErrorCode::EmptyVector, "nothing to select from");
    const int d = lift.d();
    const long double nh = static_cast<long double>(lift.n()) * lift.h();
    const double dd = d;

    // window m holds values v with d^m <= v^2 < d^(m+2)
    double vmax = 0.0;
    for (double v : y.values()) vmax = std::max(vmax, v);
    int top = 0;
    while (std::pow(dd, top + 1) <= vmax * vmax) ++top;

    BandSelection out{ZVector::zero(lift.n(), lift.h(), d), -1, 0.0, {}, 0.0, 0.0, false};
    out.input_value = std::fabs(quad_form_restricted(lift, OperatorKind::N, y, y, Region::Estar));
    const double total = y.norm2();
    out.masses.assign(top + 1, 0.0);

    double best_value = -1.0;
    for (int m = 0; m <= top; ++m) {
        const double lo = std::pow(dd, m), hi = std::pow(dd, m + 2);
        LiftVector zm(lift.n(), lift.h());
        auto zv = zm.mutable_values();
        long double norm = 0.0L;
        for (std::size_t t = 0; t < y.size(); ++t) {
            double v2 = y[t] * y[t];
            if (y[t] > 0 && lo <= v2 && v2 < hi) {
                zv[t] = y[t];
                norm += v2;
            }
        }
        out.masses[m] = static_cast<double>(norm) / total;
        if (norm == 0.0L) continue;
        double form = std::fabs(quad_form_restricted(lift, OperatorKind::N, zm, zm, Region::Estar));
        int k = 0;
        while (std::ldexp(1.0L, 2 * (k + 1)) * norm <= 10.0L * nh) ++k;
        double value = std::ldexp(form, 2 * k) / static_cast<double>(nh);
        // The proof picks any band with alpha >= 1/2; taking the band with the
        // largest rescaled form keeps that guarantee whenever such a band exists.
        if (value > best_value) {
            best_value = value;
            out.band = m;
            out.alpha = out.input_value > 0 ? form / (out.input_value * out.masses[m]) : 0.0;
            out.value = value;
            LiftVector x(lift.n(), lift.h());
            auto xv = x.mutable_values();
            const double s = std::sqrt(static_cast<double>(nh));
            for (std::size_t t = 0; t < y.size(); ++t) xv[t] = zv[t] > 0 ? std::ldexp(zv[t], k) / s : 0.0;
            out.x = ZVector(std::move(x), d);
        }
    }
    // recompute on the canonical output so the reported value is exact for it
    out.value = std::fabs(quad_form_restricted(lift, OperatorKind::N, out.x.vector(), out.x.vector(), Region::Estar));
    out.guarantee_met = out.value >= out.input_value / (8.0 * static_cast<double>(nh)) * (1.0 - 1e-12);
    return out;
}

ZCertificate z_certificate(const Lift& lift, const ZCertificateOptions& opts) {
    SpectralReport rep = lambda_star(lift, opts.tol, 0, opts.rng.derive(0x5eed));
    return z_certificate(lift, rep, opts);
}

ZCertificate z_certificate(const Lift& lift, const SpectralReport& rep, const ZCertificateOptions& opts) {
    ZCertificate cert{ZVector::zero(lift.n(), lift.h(), lift.d())};
    const double sqrt_d = std::sqrt(static_cast<double>(lift.d()));
    cert.lambda_star = rep.lambda_star;
    cert.converged = rep.converged;
    auto finish = [&] {
        cert.bound_met = cert.value >= cert.lambda_star / 96.0 - 5.0 * sqrt_d;
        return cert;
    };
    if (rep.witness.is_zero()) return finish();

    const double nh = static_cast<double>(lift.size());
    double wn = std::sqrt(rep.witness.norm2());
    LiftVector x = (std::sqrt(nh) / wn * (1.0 - 1e-12)) * rep.witness;
    DyadicCertificate dy = dyprop_certificate(lift, x, opts.trials, opts.rng.derive(0xd1ad));
    cert.dyprop_met = dy.target_met;
    cert.dyprop_value = dy.value;
    cert.dyprop_target = dy.target;
    if (dy.best.is_zero()) return finish();
    BandSelection band = band_select(dy.best, lift);
    cert.band_guarantee_met = band.guarantee_met;
    cert.x = band.x;
    cert.value = band.value;
    return finish();
}

}  // namespace rlift
