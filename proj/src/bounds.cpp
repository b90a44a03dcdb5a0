#include "rlift/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "rlift/error.hpp"
#include "rlift/numeric.hpp"

namespace rlift {

namespace {

double log_binomial(long long n, long long k) {
    return std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
           std::lgamma(static_cast<double>(n - k) + 1);
}

}  // namespace

double pattern_probability_bound(const Pattern& p, const ClassSet& s, double L) {
    if (!(L >= 20.0)) throw Error(ErrorCode::DomainError, "probability bound needs L >= 20");
    CompensatedSum size_part, binom_part;
    for (const ClassId& c : s) {
        long long a = p.size_of(c);
        if (a == 0) continue;
        size_part.add(std::log(static_cast<double>(a)));
        binom_part.add(log_binomial(p.n(), std::min(a, p.n() / 2)));
    }
    return p.d() / 4.0 * size_part.value() + (1.0 - L / 10.0) * binom_part.value();
}

double patcount_bound(long long n, int h, int d, long long A) {
    if (n < 1 || h < 1 || d < 1 || A < 1) throw Error(ErrorCode::InvalidArgument, "patcount_bound needs positive arguments");
    return std::log(std::log2(static_cast<double>(n) * h)) +
           2.0 * h * d * std::log2(static_cast<double>(d)) * std::log(static_cast<double>(A));
}

long double enumerate_patterns(const BaseGraph& base, long long n, long long A, bool gamma_only, double guard) {
    if (n < 1 || A < 1) throw Error(ErrorCode::InvalidArgument, "enumerate_patterns needs n, A >= 1");
    const int h = base.h(), d = base.d();
    const long long nh = n * h;
    // exponents k0..k0+band-1 keep 2^(k - k0) <= d
    int band = 0;
    while ((1LL << band) <= d) ++band;
    int kmax = 0;
    while (std::ldexp(1.0, 2 * (kmax + 1)) <= 10.0 * nh) ++kmax;
    const int slots = h * band;
    const double assignments = (kmax + 1) * std::pow(static_cast<double>(A), slots);
    if (assignments > guard) throw Error(ErrorCode::TooLarge, "pattern enumeration exceeds the guard");

    long double total = 1.0L;  // empty pattern
    std::vector<long long> a(slots, 0);
    for (int k0 = 0; k0 <= kmax; ++k0) {
        std::fill(a.begin(), a.end(), 0);
        while (true) {
            int pos = slots - 1;
            while (pos >= 0 && a[pos] == A - 1) a[pos--] = 0;
            if (pos < 0) break;
            ++a[pos];
            // slot i*band + t holds class (i, k0 + t)
            bool lowest_used = false, ok = true;
            long double mass = 0.0L;
            for (int i = 0; i < h && ok; ++i) {
                long long fibre_total = 0;
                for (int t = 0; t < band; ++t) {
                    long long v = a[i * band + t];
                    fibre_total += v;
                    mass += std::ldexp(1.0L, 2 * (k0 + t)) * v;
                }
                if (a[i * band] > 0) lowest_used = true;
                ok = fibre_total <= n;
            }
            if (!ok || !lowest_used || mass > 10.0L * nh) continue;
            long double ways = 1.0L;
            for (const Edge& e : base.edges())
                for (int t = 0; t < band; ++t)
                    for (int t2 = 0; t2 < band; ++t2) {
                        if (gamma_only && std::ldexp(1.0, 2 * std::abs(t - t2)) >= d) continue;
                        ways *= 1 + std::min(a[e.u * band + t], a[e.v * band + t2]);
                    }
            total += ways;
        }
    }
    return total;
}

}  // namespace rlift
