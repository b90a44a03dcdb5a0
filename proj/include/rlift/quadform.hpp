#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "rlift/graph.hpp"
#include "rlift/rng.hpp"
#include "rlift/spectrum.hpp"

namespace rlift {

enum class OperatorKind { M, Mbar, N };
enum class Region { Estar, ComplementEstar };

// Scale data for the dyadic classes: nonzero weights of a Z-vector are
// 2^k / sqrt(nh) with k >= 0, and the band ratio is sqrt(d).
struct DyadicConfig {
    int n, h, d;
    explicit DyadicConfig(const Lift& lift) : n(lift.n()), h(lift.h()), d(lift.d()) {}
    DyadicConfig(int n_, int h_, int d_) : n(n_), h(h_), d(d_) {}
    double nh() const { return static_cast<double>(n) * h; }
    double scale() const { return std::sqrt(nh()); }
    double band_ratio() const { return std::sqrt(static_cast<double>(d)); }
};

// Both values positive and x1/x2 strictly inside (1/sqrt_d, sqrt_d).
inline bool in_estar(double x1, double x2, double sqrt_d) {
    return x1 > 0 && x2 > 0 && x1 < sqrt_d * x2 && x2 < sqrt_d * x1;
}

double quad_form(const Lift& lift, OperatorKind kind, const LiftVector& x, const LiftVector& y);
// Sum of x_u A_uv y_v over ordered pairs with (x_u, y_v) in the region.
double quad_form_restricted(const Lift& lift, OperatorKind kind, const LiftVector& x, const LiftVector& y,
                            Region region);

// Nonnegative vector with entries 0 or 2^k/sqrt(nh) (k >= 0), squared norm at
// most 10 and all nonzero entries within a factor d of each other.
class ZVector {
public:
    ZVector(LiftVector v, int d);  // throws NotZVector
    static ZVector zero(int n, int h, int d) { return ZVector(LiftVector(n, h), d); }

    const LiftVector& vector() const { return v_; }
    int d() const { return d_; }
    // -1 for a zero entry
    int exponent(std::size_t vertex) const { return exps_[vertex]; }
    const std::vector<int>& exponents() const { return exps_; }
    // per fibre: sorted (exponent, count) pairs
    const std::vector<std::vector<std::pair<int, long long>>>& histogram() const { return hist_; }
    bool empty() const;

private:
    LiftVector v_;
    int d_;
    std::vector<int> exps_;
    std::vector<std::vector<std::pair<int, long long>>> hist_;
};

// Unbiased stochastic rounding of each entry to the two nearest members of
// {0, ±1, ±2, ±4, ...}. Requires ||x||^2 <= nh.
LiftVector dyadic_round(const LiftVector& x, const SeededRng& rng);

// Entries 0 or 2^k (integer k >= 0) and squared norm at most 10nh.
bool in_y_plus(const LiftVector& y);

struct Candidate {
    std::string label;
    LiftVector vec;
};

// Candidate set from splitting two compatible roundings y, z into positive
// and negative parts. One of them has |<c,c>_N| >= |<y,z>_N| / 12.
std::vector<Candidate> polarize(const LiftVector& y, const LiftVector& z);

struct DyadicCertificate {
    LiftVector best;
    std::string label;
    std::size_t trial = 0;
    double value = 0.0;   // |<best,best>_N|
    double target = 0.0;  // |<x,x>_N| / 12
    bool target_met = false;
};

DyadicCertificate dyprop_certificate(const Lift& lift, const LiftVector& x, std::size_t trials,
                                     const SeededRng& rng);

struct BandSelection {
    ZVector x;
    int band = -1;                 // window index m*
    double alpha = 0.0;            // share of the restricted form kept, normalised by band mass
    std::vector<double> masses;    // p_m
    double input_value = 0.0;      // |<y,y>_{N,E*}|
    double value = 0.0;            // |<x,x>_{N,E*}|
    bool guarantee_met = false;    // value >= input_value / (8nh)
};

BandSelection band_select(const LiftVector& y, const Lift& lift);

struct ZCertificateOptions {
    double tol = 1e-8;
    std::size_t trials = 200;
    SeededRng rng{};
};

struct ZCertificate {
    ZVector x;
    double value = 0.0;  // |<x,x>_{N,E*}|
    double lambda_star = 0.0;
    bool converged = true;
    bool dyprop_met = true;
    double dyprop_value = 0.0;
    double dyprop_target = 0.0;
    bool band_guarantee_met = true;
    bool bound_met = true;  // value >= lambda_star/96 - 5 sqrt(d)
};

ZCertificate z_certificate(const Lift& lift, const ZCertificateOptions& opts = {});
// Variant reusing an already computed spectral report.
ZCertificate z_certificate(const Lift& lift, const SpectralReport& report, const ZCertificateOptions& opts);

}  // namespace rlift
