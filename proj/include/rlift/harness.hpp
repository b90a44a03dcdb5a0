#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rlift/graph.hpp"
#include "rlift/rng.hpp"

namespace rlift {

inline constexpr const char* kCsvHeader =
    "seed,h,d,n,lambda_top,lambda_star,ramanujan_ratio,paper_ratio,dyprop_met,z_value,reduce_branch,reduce_kept,"
    "retention_slack,wall_ms";
inline constexpr double kLambdaBoundConstant = 430656.0;    // lambda* < 430656 sqrt(d)
inline constexpr double kExplainConstant = 1189248.0;

struct ExperimentConfig {
    std::string base = "k4";  // named_base_graph syntax
    std::vector<int> n_values;
    std::vector<std::uint64_t> seeds;
    double tolerance = 1e-8;
    std::vector<std::string> stages{"spectrum"};  // spectrum | certificate | reduction | witnesses
    std::string output = "results.csv";
    std::size_t trials = 200;
    double L = 20.0;
};

// InvalidArgument for empty grids, n < 1 or unknown stages; ParseError for bad JSON.
ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& c);

struct ResultRow {
    std::uint64_t seed = 0;
    int h = 0, d = 0, n = 0;
    std::optional<double> lambda_top, lambda_star, ramanujan_ratio, paper_ratio;
    std::optional<bool> dyprop_met;
    std::optional<double> z_value;
    std::optional<std::string> reduce_branch;
    std::optional<long long> reduce_kept;
    std::optional<double> retention_slack;
    double wall_ms = 0.0;
    std::string status = "ok";  // anything else marks a failed cell
};

// One (n, seed) cell; errors are caught and recorded in status.
ResultRow run_cell(const BaseGraph& base, int n, std::uint64_t seed, const ExperimentConfig& cfg);
// Whole grid, parallel over cells (RLIFT_THREADS), sorted by (n, seed).
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

std::string csv_line(const ResultRow& r);
// Writes the CSV and, when any cell failed, <path>.failures.csv with
// seed,n,status. Returns the number of failed cells.
std::size_t write_results(const std::string& path, const std::vector<ResultRow>& rows);

struct ExplainReport {
    double lambda_star = 0.0;
    double threshold = 0.0;   // 1189248 sqrt(d)
    bool star_fallback = true;
    double star_lambda = 0.0;
    double z_value = 0.0;
    double pattern_potency = 0.0;
    double L = 0.0;
    std::string branch;        // general reduction
    long long kept_classes = 0;
    std::vector<int> certificate_support;  // support of the Z-vector
    std::vector<int> reduced_support;      // witness sets of the kept classes
    long long alpha = 0;                   // |reduced_support|
    std::optional<double> subgraph_lambda; // top eigenvalue of G[reduced_support]
    bool check_ok = true;
    std::string note;
};

ExplainReport explain_pipeline(const Lift& lift, double L, const SeededRng& rng, std::size_t trials = 200);
std::string explain_to_json(const ExplainReport& r);

}  // namespace rlift
