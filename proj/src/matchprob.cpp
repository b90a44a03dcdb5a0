#include "rlift/matchprob.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <numeric>
#include <thread>

#include "json.hpp"
#include "rlift/error.hpp"
#include "rlift/numeric.hpp"

namespace rlift {

namespace {

using boost::multiprecision::cpp_int;

cpp_int factorial(long long m) {
    cpp_int r = 1;
    for (long long k = 2; k <= m; ++k) r *= k;
    return r;
}

double lfact(long long m) { return std::lgamma(static_cast<double>(m) + 1.0); }

// Spec with empty blocks removed.
MatchingSpec compact(const MatchingSpec& s) {
    MatchingSpec out;
    out.n = s.n;
    std::vector<std::size_t> rows, cols;
    for (std::size_t i = 0; i < s.a.size(); ++i)
        if (s.a[i] > 0) rows.push_back(i);
    for (std::size_t j = 0; j < s.b.size(); ++j)
        if (s.b[j] > 0) cols.push_back(j);
    for (std::size_t i : rows) out.a.push_back(s.a[i]);
    for (std::size_t j : cols) out.b.push_back(s.b[j]);
    for (std::size_t i : rows) {
        std::vector<long long> row;
        for (std::size_t j : cols) row.push_back(s.e[i][j]);
        out.e.push_back(std::move(row));
    }
    return out;
}

}  // namespace

unsigned thread_count() {
    if (const char* env = std::getenv("RLIFT_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void validate(const MatchingSpec& s) {
    auto bad = [](const std::string& why) { return Error(ErrorCode::InvalidMarginals, why); };
    if (s.n < 1) throw bad("n must be positive");
    if (s.a.empty() || s.b.empty()) throw bad("need at least one block on each side");
    for (long long v : s.a)
        if (v < 0) throw bad("negative block size");
    for (long long v : s.b)
        if (v < 0) throw bad("negative block size");
    if (std::accumulate(s.a.begin(), s.a.end(), 0LL) != s.n) throw bad("row blocks do not sum to n");
    if (std::accumulate(s.b.begin(), s.b.end(), 0LL) != s.n) throw bad("column blocks do not sum to n");
    if (s.e.size() != s.a.size()) throw bad("e has the wrong number of rows");
    std::vector<long long> col(s.b.size(), 0);
    for (std::size_t i = 0; i < s.e.size(); ++i) {
        if (s.e[i].size() != s.b.size()) throw bad("e has the wrong number of columns");
        long long row = 0;
        for (std::size_t j = 0; j < s.b.size(); ++j) {
            if (s.e[i][j] < 0) throw bad("negative count");
            row += s.e[i][j];
            col[j] += s.e[i][j];
        }
        if (row != s.a[i]) throw bad("row sums differ from a");
    }
    if (col != s.b) throw bad("column sums differ from b");
}

std::string spec_to_json(const MatchingSpec& s) {
    nlohmann::json j;
    j["n"] = s.n;
    j["a"] = s.a;
    j["b"] = s.b;
    j["e"] = s.e;
    return j.dump();
}

MatchingSpec spec_from_json(const std::string& text) {
    try {
        auto j = nlohmann::json::parse(text);
        MatchingSpec s;
        s.n = j.at("n").get<long long>();
        s.a = j.at("a").get<std::vector<long long>>();
        s.b = j.at("b").get<std::vector<long long>>();
        s.e = j.at("e").get<std::vector<std::vector<long long>>>();
        validate(s);
        return s;
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::ParseError, std::string("matching spec JSON: ") + ex.what());
    }
}

Probability exact_probability(const MatchingSpec& s) {
    validate(s);
    Probability p;
    if (s.n <= 64) {
        cpp_int num = 1, den = factorial(s.n);
        for (long long v : s.a) num *= factorial(v);
        for (long long v : s.b) num *= factorial(v);
        for (const auto& row : s.e)
            for (long long v : row) den *= factorial(v);
        Rational r(num, den);
        p.value = r.convert_to<double>();
        p.log_value = std::log(p.value);
        p.exact = r;
    } else {
        CompensatedSum acc;
        for (long long v : s.a) acc.add(lfact(v));
        for (long long v : s.b) acc.add(lfact(v));
        acc.add(-lfact(s.n));
        for (const auto& row : s.e)
            for (long long v : row) acc.add(-lfact(v));
        p.log_value = acc.value();
        p.value = std::exp(p.log_value);
    }
    return p;
}

BigBound bigbound_form(const MatchingSpec& spec) {
    validate(spec);
    MatchingSpec s = compact(spec);
    const double n = static_cast<double>(s.n);
    CompensatedSum chi, expo;
    chi.add(-0.5 * std::log(n));
    for (long long v : s.a) chi.add(0.5 * std::log(static_cast<double>(v)));
    for (long long v : s.b) chi.add(0.5 * std::log(static_cast<double>(v)));
    for (std::size_t i = 0; i < s.a.size(); ++i)
        for (std::size_t j = 0; j < s.b.size(); ++j) {
            const double e = static_cast<double>(s.e[i][j]);
            const double mu = static_cast<double>(s.a[i]) * static_cast<double>(s.b[j]) / n;
            if (e > 0) chi.add(-0.5 * std::log(e));
            expo.add(mu * b_function(e / mu - 1.0));
        }
    BigBound r;
    r.log_chi = chi.value();
    r.exponent = expo.value();
    r.log_asymptotic = r.log_chi - r.exponent;
    return r;
}

LogInterval stirling_interval(const MatchingSpec& spec) {
    validate(spec);
    MatchingSpec s = compact(spec);
    long long nonzero = 0;
    double lo = 0.0, hi = 0.0;
    auto plus = [&](long long m) {
        lo += 1.0 / (12.0 * m + 1.0);
        hi += 1.0 / (12.0 * m);
    };
    auto minus = [&](long long m) {
        lo -= 1.0 / (12.0 * m);
        hi -= 1.0 / (12.0 * m + 1.0);
    };
    for (long long v : s.a) plus(v);
    for (long long v : s.b) plus(v);
    minus(s.n);
    for (const auto& row : s.e)
        for (long long v : row)
            if (v > 0) {
                ++nonzero;
                minus(v);
            }
    const double c = 0.5 * static_cast<double>(static_cast<long long>(s.a.size() + s.b.size()) - 1 - nonzero);
    const double base = c * std::log(2.0 * std::numbers::pi);
    return {base + lo, base + hi};
}

double corollary_bound(const MatchingSpec& spec) {
    MatchingSpec s = compact(spec);
    BigBound bb = bigbound_form(s);
    double acc = 0.0;
    for (std::size_t i = 1; i < s.a.size(); ++i) acc += std::log(static_cast<double>(s.a[i]));
    for (std::size_t j = 1; j < s.b.size(); ++j) acc += std::log(static_cast<double>(s.b[j]));
    return acc / 4.0 - bb.exponent;
}

double corollary_log_constant(const MatchingSpec& spec) {
    validate(spec);
    MatchingSpec s = compact(spec);
    const double r = static_cast<double>(s.a.size()), c = static_cast<double>(s.b.size());
    return (std::min(r, c) - 1.0) / 2.0 * std::log(2.0 * std::numbers::pi) + (r + c) / 12.0;
}

Rational brute_force_probability(const MatchingSpec& s) {
    validate(s);
    if (s.n > 8) throw Error(ErrorCode::TooLarge, "brute force limited to n <= 8");
    const int n = static_cast<int>(s.n);
    std::vector<int> row_of(n), col_of(n);
    for (int i = 0, pos = 0; i < static_cast<int>(s.a.size()); ++i)
        for (long long k = 0; k < s.a[i]; ++k) row_of[pos++] = i;
    for (int j = 0, pos = 0; j < static_cast<int>(s.b.size()); ++j)
        for (long long k = 0; k < s.b[j]; ++k) col_of[pos++] = j;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    long long hits = 0, total = 0;
    std::vector<std::vector<long long>> count(s.a.size(), std::vector<long long>(s.b.size()));
    do {
        for (auto& row : count) std::fill(row.begin(), row.end(), 0);
        for (int t = 0; t < n; ++t) ++count[row_of[t]][col_of[perm[t]]];
        hits += count == s.e;
        ++total;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return Rational(hits, total);
}

MonteCarloEstimate monte_carlo_probability(const MatchingSpec& s, std::size_t samples, const SeededRng& rng) {
    validate(s);
    if (samples == 0) throw Error(ErrorCode::InvalidArgument, "need at least one sample");
    const int n = static_cast<int>(s.n);
    std::vector<int> row_of(n), col_of(n);
    for (int i = 0, pos = 0; i < static_cast<int>(s.a.size()); ++i)
        for (long long k = 0; k < s.a[i]; ++k) row_of[pos++] = i;
    for (int j = 0, pos = 0; j < static_cast<int>(s.b.size()); ++j)
        for (long long k = 0; k < s.b[j]; ++k) col_of[pos++] = j;

    constexpr std::size_t kShard = 10000;
    const std::size_t shards = (samples + kShard - 1) / kShard;
    std::vector<std::size_t> hits(shards, 0);
    auto run_shard = [&](std::size_t sh) {
        auto eng = rng.derive(sh).engine();
        std::vector<int> perm(n);
        std::vector<std::vector<long long>> count(s.a.size(), std::vector<long long>(s.b.size()));
        const std::size_t todo = std::min(kShard, samples - sh * kShard);
        for (std::size_t k = 0; k < todo; ++k) {
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), eng);
            for (auto& row : count) std::fill(row.begin(), row.end(), 0);
            for (int t = 0; t < n; ++t) ++count[row_of[t]][col_of[perm[t]]];
            hits[sh] += count == s.e;
        }
    };
    const unsigned workers = std::min<std::size_t>(thread_count(), shards);
    if (workers <= 1) {
        for (std::size_t sh = 0; sh < shards; ++sh) run_shard(sh);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t sh = w; sh < shards; sh += workers) run_shard(sh);
            });
        for (auto& t : pool) t.join();
    }
    MonteCarloEstimate out;
    out.samples = samples;
    const double total = static_cast<double>(std::accumulate(hits.begin(), hits.end(), std::size_t{0}));
    out.estimate = total / static_cast<double>(samples);
    out.std_error = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(samples));
    return out;
}

std::vector<std::vector<std::vector<long long>>> contingency_tables(const std::vector<long long>& a,
                                                                    const std::vector<long long>& b,
                                                                    std::size_t guard) {
    if (std::accumulate(a.begin(), a.end(), 0LL) != std::accumulate(b.begin(), b.end(), 0LL))
        throw Error(ErrorCode::InvalidMarginals, "margins have different totals");
    std::vector<std::vector<std::vector<long long>>> out;
    std::vector<std::vector<long long>> cur(a.size(), std::vector<long long>(b.size(), 0));
    std::vector<long long> col_left = b;
    // fill cell (i, j) in row-major order; the last cell of each row is forced
    auto rec = [&](auto&& self, std::size_t i, std::size_t j, long long row_left) -> void {
        if (i == a.size()) {
            if (std::all_of(col_left.begin(), col_left.end(), [](long long v) { return v == 0; })) {
                if (out.size() >= guard) throw Error(ErrorCode::TooLarge, "too many tables");
                out.push_back(cur);
            }
            return;
        }
        if (j + 1 == b.size()) {
            if (row_left > col_left[j]) return;
            cur[i][j] = row_left;
            col_left[j] -= row_left;
            self(self, i + 1, 0, i + 1 < a.size() ? a[i + 1] : 0);
            col_left[j] += row_left;
            return;
        }
        for (long long v = 0; v <= std::min(row_left, col_left[j]); ++v) {
            cur[i][j] = v;
            col_left[j] -= v;
            self(self, i, j + 1, row_left - v);
            col_left[j] += v;
        }
        cur[i][j] = 0;
    };
    if (!a.empty() && !b.empty()) rec(rec, 0, 0, a[0]);
    return out;
}

}  // namespace rlift
