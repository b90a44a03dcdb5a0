#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rlift/graph.hpp"
#include "rlift/linalg.hpp"
#include "rlift/rng.hpp"

namespace rlift {

inline constexpr std::size_t kDenseLimit = 2000;

struct SpectralReport {
    double lambda_top = 0.0;
    double lambda_star = 0.0;
    std::string method;
    std::size_t iterations = 0;
    double residual = 0.0;  // ||N w - r w|| / ||w|| for the returned witness
    LiftVector witness;     // unit norm, balanced
    bool converged = true;
};

DenseMatrix dense_adjacency(const Lift& lift);
// All nh eigenvalues of M, descending. TooLarge above kDenseLimit.
std::vector<double> dense_spectrum(const Lift& lift);
// The (n-1)h eigenvalues of M on the balanced subspace, descending.
std::vector<double> new_spectrum(const Lift& lift);

// Largest eigenvalue of M (d for a regular lift), matrix-free.
double lambda_top(const Lift& lift, double tol = 1e-8, const SeededRng& rng = {});

// Spectral radius of N by Lanczos on the balanced subspace. max_iter = 0
// means 10*nh.
SpectralReport lambda_star(const Lift& lift, double tol = 1e-8, std::size_t max_iter = 0,
                           const SeededRng& rng = {});
// Same quantity through new_spectrum and a dense eigenvector.
SpectralReport lambda_star_dense(const Lift& lift);

}  // namespace rlift
