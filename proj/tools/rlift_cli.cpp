#include <cmath>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rlift/error.hpp"
#include "rlift/harness.hpp"
#include "rlift/io.hpp"
#include "rlift/matchprob.hpp"
#include "rlift/pattern.hpp"
#include "rlift/quadform.hpp"
#include "rlift/reduction.hpp"
#include "rlift/sampler.hpp"
#include "rlift/spectrum.hpp"

using nlohmann::json;
using namespace rlift;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    for (std::string tok; std::getline(ss, tok, ',');)
        if (!tok.empty()) out.push_back(std::stoi(tok));
    return out;
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-")
        std::cout << text << '\n';
    else
        write_text_file(path, text + "\n");
}

bool usage_error(ErrorCode c) {
    switch (c) {
        case ErrorCode::InvalidArgument:
        case ErrorCode::ParseError:
        case ErrorCode::NonRegular:
        case ErrorCode::SelfLoop:
        case ErrorCode::DuplicateEdge:
        case ErrorCode::VertexOutOfRange:
        case ErrorCode::DimensionMismatch:
        case ErrorCode::FibresNotPairwiseAdjacent:
        case ErrorCode::InvalidMarginals:
        case ErrorCode::DomainError:
        case ErrorCode::TooLarge:
            return true;
        default:
            return false;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random lifts: spectra, certificates, pattern reductions, matching probabilities"};
    app.require_subcommand(1);

    // gen
    std::string base_name = "k4", out_path, plant;
    int n = 0;
    std::uint64_t seed = 0;
    auto* gen = app.add_subcommand("gen", "sample a uniform random n-lift and save it as JSON");
    gen->add_option("--base", base_name, "k4, complete:K, petersen, cycle-power:H:K or file:PATH")->capture_default_str();
    gen->add_option("--n", n, "fibre size")->required()->check(CLI::PositiveNumber);
    gen->add_option("--seed", seed)->capture_default_str();
    gen->add_option("--out", out_path, "output file (stdout when omitted)");
    gen->add_option("--plant", plant, "comma-separated fibres whose vertex 0 should form a clique");

    // spectrum
    std::string lift_path, method = "lanczos";
    double tol = 1e-8;
    auto* spec = app.add_subcommand("spectrum", "lambda_top and lambda* of a lift");
    spec->add_option("--lift", lift_path)->required();
    spec->add_option("--method", method)->check(CLI::IsMember({"dense", "lanczos"}))->capture_default_str();
    spec->add_option("--tol", tol)->capture_default_str();
    spec->add_option("--seed", seed);
    spec->add_option("--out", out_path);

    // certify
    std::size_t trials = 200;
    std::string pattern_out;
    auto* cert = app.add_subcommand("certify", "Z-vector certificate and its pattern");
    cert->add_option("--lift", lift_path)->required();
    cert->add_option("--trials", trials)->capture_default_str();
    cert->add_option("--seed", seed);
    cert->add_option("--tol", tol);
    cert->add_option("--out", out_path);
    cert->add_option("--pattern-out", pattern_out, "write the extracted pattern here");

    // reduce
    std::string pattern_path, mode = "auto";
    double L = 20.0;
    auto* red = app.add_subcommand("reduce", "greedy pattern reduction with transcript");
    red->add_option("--pattern", pattern_path)->required();
    red->add_option("--L", L)->capture_default_str();
    red->add_option("--mode", mode)->check(CLI::IsMember({"auto", "ld", "sd", "general"}))->capture_default_str();
    red->add_option("--out", out_path);

    // prob
    std::string spec_path;
    bool brute = false;
    std::size_t mc = 0;
    auto* prob = app.add_subcommand("prob", "probability of a joint edge-count matrix under one matching");
    prob->add_option("--spec", spec_path)->required();
    prob->add_flag("--brute", brute, "also count all permutations (n <= 8)");
    prob->add_option("--mc", mc, "Monte Carlo samples");
    prob->add_option("--seed", seed);
    prob->add_option("--out", out_path);

    // experiment
    std::string config_path;
    auto* exp = app.add_subcommand("experiment", "run an (n, seed) grid and write a CSV");
    exp->add_option("--config", config_path)->required();
    exp->add_option("--out", out_path, "overrides the config's output path");

    // explain
    auto* expl = app.add_subcommand("explain", "certificate -> pattern -> reduction -> witness subgraph");
    expl->add_option("--lift", lift_path)->required();
    expl->add_option("--L", L)->capture_default_str();
    expl->add_option("--seed", seed);
    expl->add_option("--trials", trials);
    expl->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*gen) {
            Lift lift = sample_lift(named_base_graph(base_name), n, SeededRng(seed));
            if (!plant.empty()) lift = plant_clique(lift, parse_int_list(plant));
            emit(lift_to_json(lift), out_path);
        } else if (*spec) {
            Lift lift = load_lift(lift_path);
            json j;
            j["n"] = lift.n();
            j["h"] = lift.h();
            j["d"] = lift.d();
            j["method"] = method;
            if (method == "dense") {
                auto all = dense_spectrum(lift);
                auto fresh = new_spectrum(lift);
                j["lambda_top"] = all.empty() ? 0.0 : all.front();
                double ls = 0.0;
                for (double v : fresh) ls = std::max(ls, std::fabs(v));
                j["lambda_star"] = ls;
                j["spectrum"] = all;
                j["new_spectrum"] = fresh;
            } else {
                SeededRng rng(seed);
                SpectralReport rep = lambda_star(lift, tol, 0, rng.derive(102));
                j["lambda_top"] = lambda_top(lift, tol, rng.derive(101));
                j["lambda_star"] = rep.lambda_star;
                j["iterations"] = rep.iterations;
                j["residual"] = rep.residual;
                j["converged"] = rep.converged;
                if (!rep.converged) {
                    emit(j.dump(2), out_path);
                    std::cerr << "lanczos did not converge\n";
                    return kExitNumeric;
                }
            }
            emit(j.dump(2), out_path);
        } else if (*cert) {
            Lift lift = load_lift(lift_path);
            ZCertificateOptions opts{tol, trials, SeededRng(seed).derive(103)};
            ZCertificate c = z_certificate(lift, opts);
            ExtractedPattern ex = extract_pattern(c.x, lift);
            json j{{"lambda_star", c.lambda_star},       {"converged", c.converged},
                   {"dyprop_met", c.dyprop_met},         {"dyprop_value", c.dyprop_value},
                   {"dyprop_target", c.dyprop_target},   {"band_guarantee_met", c.band_guarantee_met},
                   {"z_value", c.value},                 {"bound_met", c.bound_met},
                   {"potency", potency(ex.pattern)},     {"support", ex.pattern.classes().size()}};
            if (!pattern_out.empty()) write_text_file(pattern_out, pattern_to_json(ex.pattern) + "\n");
            emit(j.dump(2), out_path);
        } else if (*red) {
            Pattern p = pattern_from_json(read_text_file(pattern_path));
            std::string text;
            if (mode == "auto") {
                DispatchResult d = reduce(p, L);
                json j = json::parse(transcript_to_json(d.reduction));
                j["p"] = d.p;
                j["p_ld"] = d.p_ld;
                j["p_sd"] = d.p_sd;
                j["p_tilde_kept"] = d.p_tilde_kept;
                j["guarantee_ok"] = d.guarantee_ok;
                j["locally_unlikely"] = d.unlikeliness.b_form_ok;
                text = j.dump(2);
            } else {
                ReductionResult r = mode == "ld" ? reduce_ld(p, L) : mode == "sd" ? reduce_sd(p, L) : reduce_general(p, L);
                text = transcript_to_json(r);
            }
            emit(text, out_path);
        } else if (*prob) {
            MatchingSpec s = spec_from_json(read_text_file(spec_path));
            Probability p = exact_probability(s);
            json j{{"log_probability", p.log_value}, {"probability", p.value}};
            if (p.exact) j["exact"] = p.exact->str();
            BigBound bb = bigbound_form(s);
            LogInterval iv = stirling_interval(s);
            j["log_chi"] = bb.log_chi;
            j["exponent"] = bb.exponent;
            j["log_asymptotic"] = bb.log_asymptotic;
            j["log_ratio_interval"] = {iv.lo, iv.hi};
            j["log_corollary_bound"] = corollary_bound(s);
            j["log_corollary_constant"] = corollary_log_constant(s);
            if (brute) j["brute_force"] = brute_force_probability(s).str();
            if (mc > 0) {
                MonteCarloEstimate m = monte_carlo_probability(s, mc, SeededRng(seed));
                j["monte_carlo"] = {{"estimate", m.estimate}, {"std_error", m.std_error}, {"samples", m.samples}};
            }
            emit(j.dump(2), out_path);
        } else if (*exp) {
            ExperimentConfig cfg = config_from_json(read_text_file(config_path));
            if (!out_path.empty()) cfg.output = out_path;
            auto rows = run_experiment(cfg);
            std::size_t failed = write_results(cfg.output, rows);
            std::cerr << rows.size() << " rows written to " << cfg.output;
            if (failed) std::cerr << ", " << failed << " failed (see " << cfg.output << ".failures.csv)";
            std::cerr << '\n';
            if (failed) return kExitNumeric;
        } else if (*expl) {
            Lift lift = load_lift(lift_path);
            ExplainReport r = explain_pipeline(lift, L, SeededRng(seed), trials);
            emit(explain_to_json(r), out_path);
            if (!r.check_ok) return kExitNumeric;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage_error(e.code()) ? kExitUsage : kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return 0;
}
