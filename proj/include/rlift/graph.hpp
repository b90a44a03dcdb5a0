#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rlift {

struct Edge {
    int u;
    int v;
    auto operator<=>(const Edge&) const = default;
};

// Simple d-regular graph on vertices 0..h-1. Edges are stored with u < v,
// sorted lexicographically; the position in that list is the edge index used
// by lifts and their serialization.
class BaseGraph {
public:
    BaseGraph(int h, std::vector<Edge> edges);

    int h() const { return h_; }
    int d() const { return d_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int>& neighbours(int i) const { return adj_[i]; }
    bool adjacent(int i, int j) const { return matrix_[static_cast<std::size_t>(i) * h_ + j] >= 0; }
    // -1 when i and j are not adjacent
    int edge_index(int i, int j) const { return matrix_[static_cast<std::size_t>(i) * h_ + j]; }

    bool operator==(const BaseGraph& o) const { return h_ == o.h_ && edges_ == o.edges_; }

private:
    int h_;
    int d_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> matrix_;
};

BaseGraph make_base_graph(int h, const std::vector<std::pair<int, int>>& edges);

BaseGraph complete_graph(int k);
// C_h^k: i ~ i±1, ..., i±k (mod h); degree 2k, needs h > 2k
BaseGraph cycle_power(int h, int k);
BaseGraph petersen_graph();
// "k4", "complete:4", "petersen", "cycle-power:8:2", "file:path"
BaseGraph named_base_graph(const std::string& name);

// n-lift of a base graph: one permutation per base edge (u<v) sending the
// fibre index at u to the matched fibre index at v. Flat vertex index i*n + j.
class Lift {
public:
    Lift(BaseGraph base, int n, std::vector<std::vector<int>> perms);
    static Lift identity(BaseGraph base, int n);

    const BaseGraph& base() const { return base_; }
    int n() const { return n_; }
    int h() const { return base_.h(); }
    int d() const { return base_.d(); }
    std::size_t size() const { return static_cast<std::size_t>(n_) * base_.h(); }

    const std::vector<int>& perm(int edge) const { return perms_[edge]; }
    const std::vector<int>& inverse_perm(int edge) const;
    const std::vector<std::vector<int>>& perms() const { return perms_; }

    int vertex(int fibre, int index) const { return fibre * n_ + index; }
    int fibre_of(int v) const { return v / n_; }
    int index_of(int v) const { return v % n_; }

    // The unique neighbour of v inside an adjacent fibre.
    int neighbour_in(int v, int fibre) const;
    std::vector<int> neighbours(int v) const;
    bool adjacent(int u, int v) const;

private:
    struct InverseCache;

    BaseGraph base_;
    int n_;
    std::vector<std::vector<int>> perms_;
    std::shared_ptr<InverseCache> inverse_;
};

// Real vector on the nh lift vertices with cached norm and fibre sums.
class LiftVector {
public:
    LiftVector() = default;
    LiftVector(int n, int h);
    LiftVector(int n, int h, std::vector<double> entries);

    int n() const { return n_; }
    int h() const { return h_; }
    std::size_t size() const { return values_.size(); }

    double operator[](std::size_t v) const { return values_[v]; }
    double at(int fibre, int index) const { return values_[static_cast<std::size_t>(fibre) * n_ + index]; }
    void set(std::size_t v, double value) {
        values_[v] = value;
        valid_ = false;
    }

    std::span<const double> values() const { return values_; }
    std::span<double> mutable_values() {
        valid_ = false;
        return values_;
    }

    double norm2() const;
    double fibre_sum(int fibre) const;
    const std::vector<double>& fibre_sums() const;
    // every fibre sum at most rel_tol * ||x|| in absolute value
    bool balanced(double rel_tol = 1e-10) const;
    bool is_zero() const;

    // subtract each fibre's mean
    void make_balanced();

private:
    void refresh() const;

    int n_ = 0;
    int h_ = 0;
    std::vector<double> values_;
    mutable bool valid_ = false;
    mutable double norm2_ = 0.0;
    mutable std::vector<double> sums_;
};

double dot(const LiftVector& x, const LiftVector& y);
LiftVector operator+(const LiftVector& x, const LiftVector& y);
LiftVector operator-(const LiftVector& x, const LiftVector& y);
LiftVector operator*(double a, const LiftVector& x);

// Raw kernels used by the iterative solvers; out is overwritten.
void apply_M_into(const Lift& lift, std::span<const double> x, std::span<double> out);
void apply_N_into(const Lift& lift, std::span<const double> x, std::span<double> out);

LiftVector apply_M(const Lift& lift, const LiftVector& x);
LiftVector apply_Mbar(const Lift& lift, const LiftVector& x);
LiftVector apply_N(const Lift& lift, const LiftVector& x);

LiftVector lifted_eigenvector(const Lift& lift, const std::vector<double>& base_vec);

}  // namespace rlift
