#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rlift/rng.hpp"

namespace rlift {

using Rational = boost::multiprecision::cpp_rational;

// One uniform perfect matching between two n-sets partitioned into blocks
// a_0..a_s and b_0..b_t; e[i][j] matched pairs from block A_i to block B_j.
struct MatchingSpec {
    long long n = 0;
    std::vector<long long> a, b;
    std::vector<std::vector<long long>> e;
};

// InvalidMarginals unless sizes sum to n and e has those row/column sums.
void validate(const MatchingSpec& spec);
std::string spec_to_json(const MatchingSpec& spec);
MatchingSpec spec_from_json(const std::string& text);

struct Probability {
    double log_value = 0.0;
    double value = 0.0;
    std::optional<Rational> exact;  // present for n <= 64
};

// prod a_i! prod b_j! / (n! prod e_ij!)
Probability exact_probability(const MatchingSpec& spec);

// Zero-size blocks are dropped first; they change neither side.
struct BigBound {
    double log_chi = 0.0;  // log of n^{-1/2} (prod a prod b / prod_{e>0} e)^{1/2}
    double exponent = 0.0; // sum mu b(eps)
    double log_asymptotic = 0.0;  // log_chi - exponent
};
BigBound bigbound_form(const MatchingSpec& spec);

// Interval for log(exact / asymptotic) from Stirling with Robbins' remainder
// bounds 1/(12m+1) < r_m < 1/(12m).
struct LogInterval {
    double lo = 0.0, hi = 0.0;
};
LogInterval stirling_interval(const MatchingSpec& spec);

// log of (prod_{i>=1} a_i prod_{j>=1} b_j)^{1/4} exp(-sum mu b(eps))
double corollary_bound(const MatchingSpec& spec);
// log C with C = (2 pi)^{(min(R,C)-1)/2} e^{(R+C)/12}, R and C the numbers of
// nonempty blocks; exact <= C * corollary.
double corollary_log_constant(const MatchingSpec& spec);

// Counts permutations of n <= 8 points (blocks taken as contiguous ranges).
Rational brute_force_probability(const MatchingSpec& spec);

struct MonteCarloEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};
// Shards of fixed size use independent streams, so the result does not depend
// on the thread count (RLIFT_THREADS).
MonteCarloEstimate monte_carlo_probability(const MatchingSpec& spec, std::size_t samples, const SeededRng& rng);

// Every nonnegative integer matrix with the given margins. TooLarge past guard.
std::vector<std::vector<std::vector<long long>>> contingency_tables(const std::vector<long long>& a,
                                                                    const std::vector<long long>& b,
                                                                    std::size_t guard = 1000000);

// Worker count from RLIFT_THREADS, else the hardware concurrency (at least 1).
unsigned thread_count();

}  // namespace rlift
