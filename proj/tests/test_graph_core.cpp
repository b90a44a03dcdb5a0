#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "rlift/error.hpp"
#include "rlift/io.hpp"
#include "rlift/sampler.hpp"

using namespace rlift;

namespace {

LiftVector random_vector(std::mt19937_64& eng, int n, int h) {
    std::normal_distribution<double> g;
    std::vector<double> v(static_cast<std::size_t>(n) * h);
    for (double& x : v) x = g(eng);
    return LiftVector(n, h, v);
}

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::ParseError;  // sentinel: tests check for a specific other code
}

}  // namespace

TEST_CASE("base graph validation") {
    CHECK(make_base_graph(3, {{0, 1}, {1, 2}, {0, 2}}).d() == 2);
    CHECK(complete_graph(4).d() == 3);
    CHECK(complete_graph(4).edges().size() == 6);
    CHECK(code_of([] { make_base_graph(3, {{0, 1}, {1, 2}}); }) == ErrorCode::NonRegular);
    CHECK(code_of([] { make_base_graph(3, {{0, 0}, {1, 2}}); }) == ErrorCode::SelfLoop);
    CHECK(code_of([] { make_base_graph(2, {{0, 1}, {1, 0}}); }) == ErrorCode::DuplicateEdge);
    CHECK(code_of([] { make_base_graph(3, {{0, 5}}); }) == ErrorCode::VertexOutOfRange);
    BaseGraph p = petersen_graph();
    CHECK(p.h() == 10);
    CHECK(p.d() == 3);
    CHECK(p.edges().size() == 15);
    BaseGraph c = cycle_power(8, 2);
    CHECK(c.d() == 4);
    CHECK(named_base_graph("complete:5").d() == 4);
    CHECK(named_base_graph("cycle-power:7:1").d() == 2);
    CHECK(code_of([] { named_base_graph("nonsense"); }) == ErrorCode::ParseError);
    for (const auto& g : oracle::small_bases()) CHECK(g.edges().size() * 2 == static_cast<std::size_t>(g.h() * g.d()));
}

TEST_CASE("base graph text format round trip") {
    std::stringstream ss;
    write_base_graph_text(ss, petersen_graph());
    CHECK(read_base_graph_text(ss) == petersen_graph());
    std::stringstream bad("3 2\n0 1\n");
    CHECK_THROWS_AS(read_base_graph_text(bad), Error);
}

TEST_CASE("lift validation and structure") {
    BaseGraph k3 = complete_graph(3);
    CHECK_THROWS_AS(Lift(k3, 2, {{0, 1}, {1, 0}}), Error);
    CHECK(code_of([&] { Lift(k3, 2, {{0, 0}, {0, 1}, {0, 1}}); }) == ErrorCode::InvalidArgument);
    Lift lift = sample_lift(complete_graph(4), 5, SeededRng(3));
    for (std::size_t v = 0; v < lift.size(); ++v) {
        auto nb = lift.neighbours(static_cast<int>(v));
        CHECK(nb.size() == 3);
        for (int u : nb) CHECK(lift.adjacent(u, static_cast<int>(v)));
    }
    for (int e = 0; e < 6; ++e) {
        const auto& p = lift.perm(e);
        const auto& q = lift.inverse_perm(e);
        for (int j = 0; j < 5; ++j) CHECK(q[p[j]] == j);
    }
}

TEST_CASE("apply_M examples") {
    Lift id = Lift::identity(complete_graph(3), 1);
    LiftVector ones(1, 3, {1, 1, 1});
    LiftVector e0(1, 3, {1, 0, 0});
    auto r = apply_M(id, ones);
    for (int k = 0; k < 3; ++k) CHECK(r[k] == 2.0);
    auto s = apply_M(id, e0);
    CHECK(s[0] == 0.0);
    CHECK(s[1] == 1.0);
    CHECK(s[2] == 1.0);
    CHECK_THROWS_AS(apply_M(id, LiftVector(2, 3)), Error);

    Lift lift = sample_lift(complete_graph(4), 3, SeededRng(7));
    std::mt19937_64 eng(1);
    LiftVector x = random_vector(eng, 3, 4);
    Eigen::VectorXd ref = oracle::adjacency(lift) * oracle::to_eigen(x);
    auto mx = apply_M(lift, x);
    for (std::size_t t = 0; t < x.size(); ++t) CHECK(mx[t] == doctest::Approx(ref(t)).epsilon(1e-12));
}

TEST_CASE("apply_Mbar and apply_N examples") {
    std::mt19937_64 eng(2);
    Lift lift = sample_lift(complete_graph(4), 4, SeededRng(11));
    LiftVector x = random_vector(eng, 4, 4);
    Eigen::MatrixXd mbar = oracle::adjacency(lift) - oracle::n_matrix(lift);
    Eigen::VectorXd ref = mbar * oracle::to_eigen(x);
    auto y = apply_Mbar(lift, x);
    for (std::size_t t = 0; t < x.size(); ++t) CHECK(y[t] == doctest::Approx(ref(t)).epsilon(1e-12));

    LiftVector b = x;
    b.make_balanced();
    CHECK(b.balanced());
    auto zb = apply_Mbar(lift, b);
    for (std::size_t t = 0; t < b.size(); ++t) CHECK(std::fabs(zb[t]) < 1e-12);
    auto nb = apply_N(lift, b), mb = apply_M(lift, b);
    for (std::size_t t = 0; t < b.size(); ++t) CHECK(std::fabs(nb[t] - mb[t]) < 1e-12);
    // Mb stays balanced
    for (double s : mb.fibre_sums()) CHECK(std::fabs(s) < 1e-10);

    Lift k3 = sample_lift(complete_graph(3), 5, SeededRng(4));
    auto c = apply_Mbar(k3, lifted_eigenvector(k3, {1, 1, 1}));
    for (std::size_t t = 0; t < c.size(); ++t) CHECK(c[t] == doctest::Approx(2.0));

    // fibre-constant vectors are annihilated by N
    auto z = apply_N(lift, lifted_eigenvector(lift, {1.0, -2.0, 0.5, 3.0}));
    for (std::size_t t = 0; t < z.size(); ++t) CHECK(std::fabs(z[t]) < 1e-12);
    // n = 1: N = 0
    Lift one = sample_lift(petersen_graph(), 1, SeededRng(1));
    auto z1 = apply_N(one, random_vector(eng, 1, 10));
    for (std::size_t t = 0; t < z1.size(); ++t) CHECK(std::fabs(z1[t]) < 1e-12);
}

TEST_CASE("operator properties on random lifts") {
    std::mt19937_64 eng(5);
    for (int rep = 0; rep < 10; ++rep) {
        Lift lift = sample_lift(rep % 2 ? petersen_graph() : complete_graph(5), 3 + rep, SeededRng(rep));
        LiftVector x = random_vector(eng, lift.n(), lift.h()), y = random_vector(eng, lift.n(), lift.h());
        double a = dot(x, apply_N(lift, x));
        double b = dot(x, apply_M(lift, x)) - dot(x, apply_Mbar(lift, x));
        CHECK(a == doctest::Approx(b).epsilon(1e-10));
        CHECK(dot(x, apply_M(lift, y)) == doctest::Approx(dot(apply_M(lift, x), y)).epsilon(1e-10));
        auto ones = apply_M(lift, lifted_eigenvector(lift, std::vector<double>(lift.h(), 1.0)));
        for (std::size_t t = 0; t < ones.size(); ++t) CHECK(ones[t] == lift.d());
    }
}

TEST_CASE("lifted eigenvectors") {
    Lift k3 = sample_lift(complete_graph(3), 4, SeededRng(9));
    auto y = lifted_eigenvector(k3, {1, -1, 0});
    auto my = apply_M(k3, y);
    for (std::size_t t = 0; t < y.size(); ++t) CHECK(my[t] == doctest::Approx(-y[t]));
    CHECK_THROWS_AS(lifted_eigenvector(k3, {1, 2}), Error);

    BaseGraph pg = petersen_graph();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(oracle::base_adjacency(pg));
    int idx = -1;
    for (int k = 0; k < 10; ++k)
        if (std::fabs(es.eigenvalues()(k) - 1.0) < 1e-9) idx = k;
    REQUIRE(idx >= 0);
    std::vector<double> v(10);
    for (int k = 0; k < 10; ++k) v[k] = es.eigenvectors()(k, idx);
    Lift pl = sample_lift(pg, 6, SeededRng(2));
    auto z = lifted_eigenvector(pl, v);
    auto mz = apply_M(pl, z);
    for (std::size_t t = 0; t < z.size(); ++t) CHECK(mz[t] == doctest::Approx(z[t]).epsilon(1e-10));
}

TEST_CASE("lift vector caches") {
    LiftVector x(3, 2, {1, 2, 3, -1, -1, 2});
    CHECK(x.norm2() == doctest::Approx(20.0));
    CHECK(x.fibre_sum(0) == doctest::Approx(6.0));
    CHECK(x.fibre_sum(1) == doctest::Approx(0.0));
    CHECK_FALSE(x.balanced());
    x.mutable_values()[0] = -5;
    CHECK(x.fibre_sum(0) == doctest::Approx(0.0));
    CHECK(x.balanced());
    CHECK(x.norm2() == doctest::Approx(20.0 - 1 + 25));
}

TEST_CASE("lift JSON round trip") {
    Lift lift = sample_lift(petersen_graph(), 7, SeededRng(5));
    std::string s = lift_to_json(lift);
    Lift back = lift_from_json(s);
    CHECK(back.perms() == lift.perms());
    CHECK(lift_to_json(back) == s);
    CHECK_THROWS_AS(lift_from_json("{\"n\":2}"), Error);
}
