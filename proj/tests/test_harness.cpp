#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "rlift/error.hpp"
#include "rlift/harness.hpp"
#include "rlift/sampler.hpp"
#include "rlift/spectrum.hpp"

using namespace rlift;

namespace {

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::ParseError;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// every column except wall_ms
std::string numeric_part(const ResultRow& r) {
    std::string line = csv_line(r);
    return line.substr(0, line.rfind(','));
}

}  // namespace

TEST_CASE("experiment config") {
    ExperimentConfig c = config_from_json(R"({"base":"k4","n":[100,400],"seeds":[1,2,3],"stages":["spectrum","reduction"],"L":41})");
    CHECK(c.base == "k4");
    CHECK(c.n_values == std::vector<int>{100, 400});
    CHECK(c.seeds.size() == 3);
    CHECK(c.L == 41.0);
    CHECK(c.trials == 200);
    ExperimentConfig back = config_from_json(config_to_json(c));
    CHECK(back.n_values == c.n_values);
    CHECK(back.seeds == c.seeds);
    CHECK(back.stages == c.stages);
    CHECK(back.L == c.L);

    CHECK(code_of([] { config_from_json(R"({"n":[],"seeds":[1]})"); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { config_from_json(R"({"n":[5],"seeds":[]})"); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { config_from_json(R"({"n":[0],"seeds":[1]})"); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { config_from_json(R"({"n":[5],"seeds":[1],"stages":["plot"]})"); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { config_from_json(R"({"n":[5],"seeds":[1],"tolerance":0})"); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { config_from_json("{not json"); }) == ErrorCode::ParseError);
    CHECK(code_of([] { config_from_json(R"({"seeds":[1]})"); }) == ErrorCode::ParseError);
}

TEST_CASE("single cell, spectrum stage") {
    ExperimentConfig cfg;
    cfg.n_values = {100};
    cfg.seeds = {1};
    ResultRow r = run_cell(complete_graph(4), 100, 1, cfg);
    CHECK(r.status == "ok");
    CHECK(r.h == 4);
    CHECK(r.d == 3);
    REQUIRE(r.lambda_top);
    CHECK(std::fabs(*r.lambda_top - 3.0) <= 1e-6);
    REQUIRE(r.lambda_star);
    CHECK(*r.lambda_star == doctest::Approx(lambda_star_dense(sample_lift(complete_graph(4), 100, SeededRng(1))).lambda_star).epsilon(1e-6));
    CHECK(*r.ramanujan_ratio == doctest::Approx(*r.lambda_star / (2 * std::sqrt(2.0))));
    CHECK(*r.paper_ratio < 1.0);
    CHECK_FALSE(r.dyprop_met);
    CHECK_FALSE(r.reduce_branch);
    auto cols = split(csv_line(r));
    CHECK(cols.size() == 14);
    CHECK(cols[8].empty());
    CHECK(cols[10].empty());
}

TEST_CASE("single cell, all stages") {
    ExperimentConfig cfg;
    cfg.n_values = {60};
    cfg.seeds = {5};
    cfg.stages = {"witnesses"};
    ResultRow r = run_cell(complete_graph(4), 60, 5, cfg);
    CHECK(r.status == "ok");
    CHECK(r.lambda_star);
    CHECK(r.dyprop_met);
    CHECK(r.z_value);
    REQUIRE(r.reduce_branch);
    CHECK((*r.reduce_branch == "LD" || *r.reduce_branch == "SD"));
    REQUIRE(r.retention_slack);
    CHECK(*r.retention_slack >= -1e-9);
    CHECK(*r.reduce_kept >= 0);

    // failures are recorded, not thrown
    ResultRow bad = run_cell(complete_graph(4), 0, 5, cfg);
    CHECK(bad.status != "ok");
}

TEST_CASE("experiment grid") {
    ExperimentConfig cfg = config_from_json(R"({"base":"k4","n":[400,100],"seeds":[20,19,18,17,16,15,14,13,12,11,10,9,8,7,6,5,4,3,2,1]})");
    ::setenv("RLIFT_THREADS", "1", 1);
    auto rows = run_experiment(cfg);
    ::setenv("RLIFT_THREADS", "2", 1);
    auto again = run_experiment(cfg);
    ::unsetenv("RLIFT_THREADS");
    REQUIRE(rows.size() == 40);
    REQUIRE(again.size() == 40);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        CHECK(rows[k].status == "ok");
        CHECK(*rows[k].paper_ratio < 1.0);
        CHECK(std::fabs(*rows[k].lambda_top - 3.0) <= 1e-6);
        CHECK(numeric_part(rows[k]) == numeric_part(again[k]));
        if (k > 0)
            CHECK(std::make_pair(rows[k - 1].n, rows[k - 1].seed) < std::make_pair(rows[k].n, rows[k].seed));
    }
    CHECK(rows.front().n == 100);
    CHECK(rows.front().seed == 1);

    const auto dir = std::filesystem::temp_directory_path() / "rlift_harness_test";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "out.csv").string();
    CHECK(write_results(path, rows) == 0);
    std::istringstream csv(slurp(path));
    std::string line;
    std::getline(csv, line);
    CHECK(line == kCsvHeader);
    CHECK(line == "seed,h,d,n,lambda_top,lambda_star,ramanujan_ratio,paper_ratio,dyprop_met,z_value,reduce_branch,"
                  "reduce_kept,retention_slack,wall_ms");
    int count = 0;
    while (std::getline(csv, line)) {
        CHECK(split(line).size() == 14);
        ++count;
    }
    CHECK(count == 40);
    CHECK_FALSE(std::filesystem::exists(path + ".failures.csv"));

    rows[3].status = "error: bad, thing";
    CHECK(write_results(path, rows) == 1);
    std::string fails = slurp(path + ".failures.csv");
    CHECK(fails.rfind("seed,n,status\n", 0) == 0);
    CHECK(fails.find("error: bad; thing") != std::string::npos);
    CHECK(write_results(path, again) == 0);
    CHECK_FALSE(std::filesystem::exists(path + ".failures.csv"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("explain pipeline") {
    ExplainReport one = explain_pipeline(sample_lift(complete_graph(4), 1, SeededRng(1)), 20, SeededRng(1));
    CHECK(one.lambda_star == 0.0);
    CHECK(one.check_ok);
    CHECK(one.alpha == 0);

    ExplainReport r = explain_pipeline(sample_lift(complete_graph(4), 100, SeededRng(2)), 20, SeededRng(3));
    CHECK(r.star_fallback);
    CHECK(r.check_ok);
    CHECK(r.star_lambda == doctest::Approx(std::sqrt(3.0)));
    CHECK(r.threshold == doctest::Approx(1189248.0 * std::sqrt(3.0)));
    CHECK(r.lambda_star < r.threshold);
    CHECK(r.alpha == static_cast<long long>(r.reduced_support.size()));
    auto j = nlohmann::json::parse(explain_to_json(r));
    CHECK(j.at("star_fallback").get<bool>());
    CHECK(j.at("lambda_star").get<double>() == doctest::Approx(r.lambda_star));

    // planted clique: the certificate concentrates on the clique vertices
    Lift planted = plant_clique(sample_lift(complete_graph(9), 40, SeededRng(4)), {0, 1, 2, 3, 4, 5, 6, 7, 8});
    ExplainReport p = explain_pipeline(planted, 20, SeededRng(5));
    CHECK(p.lambda_star >= 8.0 - 1e-8);
    CHECK(p.check_ok);
    for (int f = 0; f < 9; ++f) {
        const int v = planted.vertex(f, 0);
        CHECK(std::binary_search(p.certificate_support.begin(), p.certificate_support.end(), v));
    }
    MESSAGE("planted K9 clique: certificate support " << p.certificate_support.size() << " of " << planted.size()
                                                     << ", reduced support " << p.alpha);
}
