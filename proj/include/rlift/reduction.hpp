#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "rlift/pattern.hpp"

namespace rlift {

enum class Branch { LD, SD, General };
const char* branch_name(Branch b);

struct Removal {
    ClassId vertex;
    std::string condition;  // first violated condition, e.g. "LD2"
    double local_potency;   // on the sub-pattern current at removal
    double threshold;       // the violated threshold
};

struct ReductionResult {
    Branch branch = Branch::General;
    ClassSet kept;
    std::vector<Removal> transcript;
    double L = 0.0;
    double budget_cap = 0.0;       // 30, 55 or 150 times L sqrt(d)
    double removed_total = 0.0;    // sum of local potencies at removal
    double initial_potency = 0.0;  // branch potency of the full pattern
    double final_potency = 0.0;    // branch potency of the kept sub-pattern
    bool budget_ok = true;         // removed_total <= budget_cap
    bool retention_ok = true;      // final >= initial - removed_total
};

// Greedy maximal subsets: repeated ascending sweeps over the classes,
// dropping any class whose local potency on the current sub-pattern is below
// one of its thresholds. Thresholds use N, N-hat and m of the full pattern.
// DomainError if L < 20.
ReductionResult reduce_ld(const Pattern& p, double L);
ReductionResult reduce_sd(const Pattern& p, double L);
ReductionResult reduce_general(const Pattern& p, double L);

// Names of the conditions (LD1.., SD1.., G1..) that the class v fails on the
// sub-pattern induced by `kept`. Empty when all hold.
std::vector<std::string> failed_conditions(const Pattern& p, const ClassSet& kept, const ClassId& v, Branch branch,
                                           double L);

struct UnlikelinessReport {
    bool b_form_ok = true;       // sum mu b(eps) >= (L/10) a log(en/a)
    bool regime_form_ok = true;  // LD: (L/4) with (1+eps/2)log(1+eps); SD: (L/10) with eps^2/15
    double b_min_ratio = 0.0;    // min over kept classes of lhs/rhs (inf if kept is empty)
    double regime_min_ratio = 0.0;
};
UnlikelinessReport local_unlikeliness(const Pattern& p, const ClassSet& kept, double L, Branch branch);

struct DispatchResult {
    ReductionResult reduction;
    double p = 0.0, p_ld = 0.0, p_sd = 0.0;
    double p_tilde_kept = 0.0;
    bool guarantee_ok = true;  // p_tilde_kept >= p/2 - 55 L sqrt(d)
    UnlikelinessReport unlikeliness;
};
// LD branch when p_LD >= p/2, SD otherwise.
DispatchResult reduce(const Pattern& p, double L);

// Threshold neighbour sets used in the local-unlikeliness arguments.
// VertexNotInU if v is not in U.
ClassSet u_select(const Pattern& p, const ClassSet& u, const ClassId& v, EdgeFilter regime, double L);

// Indices with h/g >= c (sum h mu)/(sum g mu); they carry at least (1-c) of
// sum h mu. Triples are (mu, h, g), all positive. EmptyInput for no triples.
std::vector<std::size_t> measure_select(const std::vector<std::array<double, 3>>& triples, double c);

std::string transcript_to_json(const ReductionResult& r);

}  // namespace rlift
