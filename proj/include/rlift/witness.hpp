#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "rlift/graph.hpp"
#include "rlift/pattern.hpp"

namespace rlift {

inline constexpr std::size_t kSubgraphDenseLimit = 2000;

struct WitnessResult {
    LiftVector vector;
    double rayleigh = 0.0;        // |<x,x>_N| / ||x||^2
    double claimed_bound = 0.0;
    bool bound_met = false;
    double residual = 0.0;          // clique: ||Mx - (s-1)x||
    double support_residual = 0.0;  // clique: same, restricted to the clique fibres
    double subgraph_lambda = 0.0;   // induced-subgraph witness: top eigenvalue of G'
};

// Rayleigh quotient |<x,x>_N| / ||x||^2 (0 for the zero vector).
double rayleigh_quotient(const Lift& lift, const LiftVector& x);

// x = 1 on the given vertices, -1/(n-1) on the rest of their fibres.
// Vertices are flat ids in distinct, pairwise adjacent fibres.
WitnessResult clique_witness(const Lift& lift, const std::vector<int>& vertices);

// halves[i] lists n/2 fibre indices (0..n-1) of fibre i. The reported bound
// is the closed form (2/nh) sum over base edges of (4 e(A_i, A_j) - n).
WitnessResult bipartition_witness(const Lift& lift, const std::vector<std::vector<int>>& halves);

// Top eigenvector of the induced subgraph on `vertices`, balanced by spreading
// each fibre's sum over the fibre's remaining vertices. Bound: lambda(G') - 7/2.
WitnessResult embed_subgraph_witness(const Lift& lift, const std::vector<int>& vertices,
                                     std::size_t dense_cap = kSubgraphDenseLimit);

// Largest adjacency eigenvalue of the induced subgraph (0 when empty).
double induced_top_eigenvalue(const Lift& lift, const std::vector<int>& vertices,
                              std::size_t dense_cap = kSubgraphDenseLimit);

// Top eigenvalue of the star K_{1,d}, computed densely.
double star_lambda(int d);

struct PatternWitnessBound {
    double potency = 0.0;  // p(a,e) as a plain number
    double alpha = 0.0;    // sum of class sizes
    double nu = 0.0;       // sum of w^2 a = ||y||^2
    double mbar_form = 0.0;  // <y,y>_Mbar, exact fibre-sum formula
    // as printed: (2p - 40) sqrt d with p sqrt d = potency
    double literal_star_bound = 0.0;
    double literal_subgraph_bound = 0.0;
    // divided by ||y||^2, with the Mbar part kept exact
    double normalized_star_bound = 0.0;
    double normalized_subgraph_bound = 0.0;
    bool spectra_computed = false;
    double lambda_star = 0.0;
    double lambda_subgraph = 0.0;
    bool literal_star_ok = true, literal_subgraph_ok = true;
    bool normalized_star_ok = true, normalized_subgraph_ok = true;
};

// WitnessMismatch unless the sets realise the pattern exactly in the lift.
PatternWitnessBound pattern_witness_bound(const Lift& lift, const Pattern& p,
                                          const std::map<ClassId, std::vector<int>>& witness,
                                          bool compute_spectra = true);

}  // namespace rlift
