#include "rlift/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <map>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "rlift/error.hpp"
#include "rlift/matchprob.hpp"
#include "rlift/pattern.hpp"
#include "rlift/quadform.hpp"
#include "rlift/reduction.hpp"
#include "rlift/sampler.hpp"
#include "rlift/spectrum.hpp"
#include "rlift/witness.hpp"

namespace rlift {

using nlohmann::json;

namespace {

const std::vector<std::string> kStages{"spectrum", "certificate", "reduction", "witnesses"};

bool has_stage(const ExperimentConfig& c, const std::string& s) {
    return std::find(c.stages.begin(), c.stages.end(), s) != c.stages.end();
}

// later stages need the earlier ones
bool wants(const ExperimentConfig& c, int level) {
    for (int k = level; k < static_cast<int>(kStages.size()); ++k)
        if (has_stage(c, kStages[k])) return true;
    return false;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

template <class T>
std::string opt(const std::optional<T>& v) {
    if (!v) return "";
    if constexpr (std::is_same_v<T, double>) return fmt(*v);
    else if constexpr (std::is_same_v<T, bool>) return *v ? "1" : "0";
    else if constexpr (std::is_same_v<T, std::string>) return *v;
    else return std::to_string(*v);
}

void append_status(ResultRow& r, const std::string& s) { r.status = r.status == "ok" ? s : r.status + ";" + s; }

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
    ExperimentConfig c;
    try {
        json j = json::parse(text);
        c.base = j.value("base", c.base);
        c.n_values = j.at("n").get<std::vector<int>>();
        c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        c.tolerance = j.value("tolerance", c.tolerance);
        if (j.contains("stages")) c.stages = j.at("stages").get<std::vector<std::string>>();
        c.output = j.value("output", c.output);
        c.trials = j.value("trials", c.trials);
        c.L = j.value("L", c.L);
    } catch (const json::exception& ex) {
        throw Error(ErrorCode::ParseError, std::string("experiment config: ") + ex.what());
    }
    if (c.n_values.empty() || c.seeds.empty()) throw Error(ErrorCode::InvalidArgument, "config needs n values and seeds");
    for (int n : c.n_values)
        if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
    for (const auto& s : c.stages)
        if (std::find(kStages.begin(), kStages.end(), s) == kStages.end())
            throw Error(ErrorCode::InvalidArgument, "unknown stage '" + s + "'");
    if (!(c.tolerance > 0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
    return c;
}

std::string config_to_json(const ExperimentConfig& c) {
    json j{{"base", c.base},   {"n", c.n_values},         {"seeds", c.seeds}, {"tolerance", c.tolerance},
           {"stages", c.stages}, {"output", c.output}, {"trials", c.trials}, {"L", c.L}};
    return j.dump(2);
}

ResultRow run_cell(const BaseGraph& base, int n, std::uint64_t seed, const ExperimentConfig& cfg) {
    ResultRow r;
    r.seed = seed;
    r.h = base.h();
    r.d = base.d();
    r.n = n;
    const auto start = std::chrono::steady_clock::now();
    try {
        const SeededRng root(seed);
        Lift lift = sample_lift(base, n, root);
        const double sd = std::sqrt(static_cast<double>(base.d()));
        SpectralReport rep;
        if (wants(cfg, 0)) {
            r.lambda_top = lambda_top(lift, cfg.tolerance, root.derive(101));
            rep = lambda_star(lift, cfg.tolerance, 0, root.derive(102));
            r.lambda_star = rep.lambda_star;
            r.ramanujan_ratio = rep.lambda_star / (2.0 * std::sqrt(base.d() - 1.0));
            r.paper_ratio = rep.lambda_star / (kLambdaBoundConstant * sd);
            if (!rep.converged) append_status(r, "lanczos_not_converged");
            if (*r.paper_ratio >= 1.0) append_status(r, "paper_ratio_exceeded");
        }
        if (wants(cfg, 1)) {
            ZCertificateOptions opts{cfg.tolerance, cfg.trials, root.derive(103)};
            ZCertificate cert = z_certificate(lift, rep, opts);
            r.dyprop_met = cert.dyprop_met;
            r.z_value = cert.value;
            if (wants(cfg, 2)) {
                ExtractedPattern ex = extract_pattern(cert.x, lift);
                DispatchResult red = reduce(ex.pattern, cfg.L);
                r.reduce_branch = branch_name(red.reduction.branch);
                r.reduce_kept = static_cast<long long>(red.reduction.kept.size());
                r.retention_slack = red.reduction.final_potency -
                                    (red.reduction.initial_potency - red.reduction.removed_total);
                if (!red.reduction.retention_ok) append_status(r, "retention_failed");
                if (has_stage(cfg, "witnesses") && lift.size() <= kDenseLimit && !red.reduction.kept.empty()) {
                    Pattern kept = ex.pattern.restricted(red.reduction.kept);
                    std::map<ClassId, std::vector<int>> sets;
                    for (const ClassId& c : red.reduction.kept) sets[c] = ex.witness.at(c);
                    PatternWitnessBound wb = pattern_witness_bound(lift, kept, sets);
                    if (!wb.normalized_star_ok || !wb.normalized_subgraph_ok) append_status(r, "witness_bound_failed");
                }
            }
        }
    } catch (const std::exception& ex) {
        append_status(r, std::string("error: ") + ex.what());
    }
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
    const BaseGraph base = named_base_graph(cfg.base);
    std::vector<std::pair<int, std::uint64_t>> cells;
    for (int n : cfg.n_values)
        for (std::uint64_t s : cfg.seeds) cells.emplace_back(n, s);
    std::sort(cells.begin(), cells.end());
    std::vector<ResultRow> rows(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < cells.size();)
            rows[k] = run_cell(base, cells[k].first, cells[k].second, cfg);
    };
    const unsigned workers = std::min<std::size_t>(thread_count(), std::max<std::size_t>(cells.size(), 1));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return rows;
}

std::string csv_line(const ResultRow& r) {
    std::ostringstream os;
    os << r.seed << ',' << r.h << ',' << r.d << ',' << r.n << ',' << opt(r.lambda_top) << ',' << opt(r.lambda_star)
       << ',' << opt(r.ramanujan_ratio) << ',' << opt(r.paper_ratio) << ',' << opt(r.dyprop_met) << ','
       << opt(r.z_value) << ',' << opt(r.reduce_branch) << ',' << opt(r.reduce_kept) << ','
       << opt(r.retention_slack) << ',' << fmt(r.wall_ms);
    return os.str();
}

std::size_t write_results(const std::string& path, const std::vector<ResultRow>& rows) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
    out << kCsvHeader << '\n';
    std::size_t failed = 0;
    std::ostringstream fails;
    fails << "seed,n,status\n";
    for (const ResultRow& r : rows) {
        out << csv_line(r) << '\n';
        if (r.status != "ok") {
            ++failed;
            std::string s = r.status;
            std::replace(s.begin(), s.end(), ',', ';');
            std::replace(s.begin(), s.end(), '\n', ' ');
            fails << r.seed << ',' << r.n << ',' << s << '\n';
        }
    }
    const std::string fail_path = path + ".failures.csv";
    if (failed > 0) {
        std::ofstream f(fail_path);
        f << fails.str();
    } else {
        std::remove(fail_path.c_str());
    }
    return failed;
}

ExplainReport explain_pipeline(const Lift& lift, double L, const SeededRng& rng, std::size_t trials) {
    ExplainReport r;
    r.L = L;
    const double sd = std::sqrt(static_cast<double>(lift.d()));
    r.threshold = kExplainConstant * sd;
    r.star_lambda = star_lambda(lift.d());
    if (lift.n() == 1) {
        r.note = "n = 1: no new eigenvalues, lambda* = 0";
        r.check_ok = true;
        return r;
    }
    SpectralReport rep = lambda_star(lift, 1e-8, 0, rng.derive(1));
    r.lambda_star = rep.lambda_star;
    ZCertificateOptions opts{1e-8, trials, rng.derive(2)};
    ZCertificate cert = z_certificate(lift, rep, opts);
    r.z_value = cert.value;
    for (std::size_t t = 0; t < lift.size(); ++t)
        if (cert.x.exponent(t) >= 0) r.certificate_support.push_back(static_cast<int>(t));
    ExtractedPattern ex = extract_pattern(cert.x, lift);
    r.pattern_potency = potency(ex.pattern);
    ReductionResult red = reduce_general(ex.pattern, L);
    r.branch = branch_name(red.branch);
    r.kept_classes = static_cast<long long>(red.kept.size());
    for (const ClassId& c : red.kept)
        for (int v : ex.witness.at(c)) r.reduced_support.push_back(v);
    std::sort(r.reduced_support.begin(), r.reduced_support.end());
    r.alpha = static_cast<long long>(r.reduced_support.size());
    if (!r.reduced_support.empty() && r.reduced_support.size() <= kSubgraphDenseLimit)
        r.subgraph_lambda = induced_top_eigenvalue(lift, r.reduced_support);

    const long long hd = static_cast<long long>(lift.h()) * lift.d();
    if (r.lambda_star >= r.threshold && r.alpha <= hd && r.subgraph_lambda) {
        r.star_fallback = false;
        r.check_ok = r.lambda_star <= kExplainConstant * *r.subgraph_lambda;
        r.note = "reduced pattern subgraph";
    } else {
        r.star_fallback = true;
        r.check_ok = r.lambda_star <= kExplainConstant * r.star_lambda * (1.0 + 1e-12);
        r.note = "star fallback: lambda* below 1189248 sqrt(d)";
    }
    return r;
}

std::string explain_to_json(const ExplainReport& r) {
    json j{{"lambda_star", r.lambda_star},
           {"threshold", r.threshold},
           {"star_fallback", r.star_fallback},
           {"star_lambda", r.star_lambda},
           {"z_value", r.z_value},
           {"pattern_potency", r.pattern_potency},
           {"L", r.L},
           {"branch", r.branch},
           {"kept_classes", r.kept_classes},
           {"certificate_support", r.certificate_support},
           {"reduced_support", r.reduced_support},
           {"alpha", r.alpha},
           {"check_ok", r.check_ok},
           {"note", r.note}};
    j["subgraph_lambda"] = r.subgraph_lambda ? json(*r.subgraph_lambda) : json(nullptr);
    return j.dump(2);
}

}  // namespace rlift
