#include <map>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "rlift/error.hpp"
#include "rlift/io.hpp"
#include "rlift/sampler.hpp"

using namespace rlift;

TEST_CASE("n = 1 gives the base graph") {
    Lift lift = sample_lift(petersen_graph(), 1, SeededRng(42));
    for (const auto& p : lift.perms()) CHECK(p == std::vector<int>{0});
    CHECK_THROWS_AS(sample_lift(petersen_graph(), 0, SeededRng(1)), Error);
}

TEST_CASE("sampling is deterministic per seed and stream") {
    BaseGraph g = complete_graph(5);
    CHECK(lift_to_json(sample_lift(g, 30, SeededRng(9))) == lift_to_json(sample_lift(g, 30, SeededRng(9))));
    CHECK(lift_to_json(sample_lift(g, 30, SeededRng(9))) != lift_to_json(sample_lift(g, 30, SeededRng(10))));
    CHECK(lift_to_json(sample_lift(g, 30, SeededRng(9, 1))) != lift_to_json(sample_lift(g, 30, SeededRng(9, 2))));
}

TEST_CASE("enumeration counts and guard") {
    auto count = [](const BaseGraph& g, int n) {
        LiftEnumerator en(g, n);
        std::size_t c = 0;
        std::set<std::vector<std::vector<int>>> seen;
        while (auto l = en.next()) {
            ++c;
            seen.insert(l->perms());
        }
        CHECK(seen.size() == c);
        return c;
    };
    CHECK(count(complete_graph(3), 2) == 8);
    CHECK(count(complete_graph(3), 3) == 216);
    CHECK_THROWS_AS(LiftEnumerator(complete_graph(4), 3, 40000.0), Error);
    CHECK_NOTHROW(LiftEnumerator(complete_graph(4), 3, 50000.0));
}

TEST_CASE("uniformity over all lifts of K3 with n = 2") {
    const BaseGraph g = complete_graph(3);
    std::map<std::vector<std::vector<int>>, long> freq;
    LiftEnumerator en(g, 2);
    while (auto l = en.next()) freq[l->perms()] = 0;
    REQUIRE(freq.size() == 8);
    const long samples = 300000;
    for (long s = 0; s < samples; ++s) ++freq.at(sample_lift(g, 2, SeededRng(static_cast<std::uint64_t>(s))).perms());
    double chi2 = 0.0, expected = samples / 8.0;
    for (const auto& [k, v] : freq) chi2 += (v - expected) * (v - expected) / expected;
    // 7 degrees of freedom: P(chi2 > 24.32) = 0.001
    CHECK(chi2 < 24.32);
}

TEST_CASE("planted cliques") {
    Lift base = sample_lift(complete_graph(5), 10, SeededRng(3));
    Lift two = plant_clique(base, {1, 3});
    CHECK(two.adjacent(two.vertex(1, 0), two.vertex(3, 0)));
    Lift four = plant_clique(base, {0, 1, 2, 4});
    std::vector<int> vs{four.vertex(0, 0), four.vertex(1, 0), four.vertex(2, 0), four.vertex(4, 0)};
    for (int a : vs)
        for (int b : vs)
            if (a != b) CHECK(four.adjacent(a, b));
    for (std::size_t v = 0; v < four.size(); ++v) CHECK(four.neighbours(static_cast<int>(v)).size() == 4);
    CHECK(plant_clique(base, {2}).perms() == base.perms());
    Lift c6 = sample_lift(cycle_power(6, 1), 4, SeededRng(1));
    try {
        plant_clique(c6, {0, 3});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::FibresNotPairwiseAdjacent);
    }
}
