#pragma once

#include "rlift/graph.hpp"
#include "rlift/pattern.hpp"

namespace rlift {

// log of prod_S a^{d/4} * (prod_S C(n, min(a, floor(n/2))))^{1 - L/10}.
// 0 for an empty S. DomainError if L < 20.
double pattern_probability_bound(const Pattern& p, const ClassSet& s, double L);

// log( log2(nh) * A^{2 h d log2 d} )
double patcount_bound(long long n, int h, int d, long long A);

// Number of distinct Z-type patterns on lifts of `base` with every class size
// below A: the lowest exponent k0 fixes the band, then sizes, then counts.
// The empty pattern is counted once. With gamma_only, counts are only chosen
// on Gamma-adjacent class pairs. TooLarge when more than `guard` size
// assignments would have to be visited.
long double enumerate_patterns(const BaseGraph& base, long long n, long long A, bool gamma_only = false,
                               double guard = 1e6);

}  // namespace rlift
