#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rlift/graph.hpp"
#include "rlift/quadform.hpp"

namespace rlift {

// A weight class: fibre i and dyadic exponent k (weight 2^k / sqrt(nh)).
struct ClassId {
    int fibre;
    int exponent;
    auto operator<=>(const ClassId&) const = default;
};

using ClassPair = std::pair<ClassId, ClassId>;  // stored with first < second
using ClassSet = std::vector<ClassId>;          // sorted, unique

// Class sizes a_{i,k} plus matched-pair counts e between classes in adjacent
// fibres. Zero sizes and zero counts are not stored.
class Pattern {
public:
    Pattern(BaseGraph base, long long n, std::map<ClassId, long long> a, std::map<ClassPair, long long> e);

    const BaseGraph& base() const { return base_; }
    long long n() const { return n_; }
    int h() const { return base_.h(); }
    int d() const { return base_.d(); }
    double weight(const ClassId& c) const;

    const std::map<ClassId, long long>& sizes() const { return a_; }
    const std::map<ClassPair, long long>& counts() const { return e_; }
    long long size_of(const ClassId& c) const;
    long long count_of(const ClassId& x, const ClassId& y) const;
    // smallest exponent present, or -1 for the empty pattern
    int w0_exponent() const;
    bool empty() const { return a_.empty(); }

    // Sub-pattern on the classes in S.
    Pattern restricted(const ClassSet& s) const;
    ClassSet classes() const;

private:
    BaseGraph base_;
    long long n_;
    std::map<ClassId, long long> a_;
    std::map<ClassPair, long long> e_;
};

// Description of the first violated Z-type property, if any: at most n
// vertices per fibre, one [w0, w0 d] band, and sum of w^2 a at most 10.
std::optional<std::string> z_type_violation(const Pattern& p);

enum class EdgeFilter { All, LD, SD };

struct GammaEdge {
    int to;
    double mu;    // a a' / n
    double eps;   // e / mu - 1
    bool ld;      // eps > e^2 - 1
    double term;  // w w' (e - a a'/n)
};

// Auxiliary graph on nonempty classes: adjacent fibres, weights within a
// factor strictly less than sqrt(d).
class GammaView {
public:
    explicit GammaView(const Pattern& p);

    std::size_t size() const { return ids_.size(); }
    const ClassId& id(int v) const { return ids_[v]; }
    int index_of(const ClassId& c) const;  // -1 if absent
    long long size_of(int v) const { return a_[v]; }
    double weight(int v) const { return w_[v]; }
    const std::vector<GammaEdge>& edges(int v) const { return adj_[v]; }
    std::size_t edge_count() const;

    // |sum of terms over neighbours inside the mask|
    double local_potency(int v, const std::vector<char>& mask, EdgeFilter f) const;
    // |sum over edges with both ends in the mask|
    double potency(const std::vector<char>& mask, EdgeFilter f) const;

private:
    std::vector<ClassId> ids_;
    std::vector<long long> a_;
    std::vector<double> w_;
    std::vector<std::vector<GammaEdge>> adj_;
};

struct DeviationRow {
    ClassId x, y;
    double mu, eps, term;
    bool ld;
};
std::vector<DeviationRow> deviation_table(const Pattern& p);

// Per class: N_i (neighbouring fibres' w^2 a), N-hat (Gamma neighbours,
// weighted by w'/(w sqrt d)), M = max(N_i/(a w^2 d), e n / a), m = log M / M,
// and the local potencies over the whole pattern.
struct VertexAggregates {
    ClassId id;
    double n_fibre = 0.0;
    double n_hat = 0.0;
    double big_m = 0.0;
    double small_m = 0.0;
    double local = 0.0;
    double local_ld = 0.0;
    double local_sd = 0.0;
};
std::vector<VertexAggregates> aggregates(const Pattern& p);

double potency(const Pattern& p);
double potency_ld(const Pattern& p);
double potency_sd(const Pattern& p);
// max over edge subsets of |sum of terms|
double potency_tilde(const Pattern& p);

struct ExtractedPattern {
    Pattern pattern;
    std::map<ClassId, std::vector<int>> witness;  // A_{i,w} as flat vertex ids
};
ExtractedPattern extract_pattern(const ZVector& y, const Lift& lift);

std::string pattern_to_json(const Pattern& p);
Pattern pattern_from_json(const std::string& text);

}  // namespace rlift
