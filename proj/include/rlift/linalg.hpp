#pragma once

#include <cstddef>
#include <vector>

namespace rlift {

// Row-major square matrix, just enough for the small dense paths.
class DenseMatrix {
public:
    DenseMatrix() = default;
    explicit DenseMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}
    std::size_t dim() const { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    const std::vector<double>& data() const { return a_; }

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

struct SymmetricEigen {
    std::vector<double> values;       // ascending
    DenseMatrix vectors;              // column k pairs with values[k]; empty unless requested
};

// Householder tridiagonalisation followed by implicit QL with Wilkinson-type
// shifts. The input must be symmetric; only values are accurate to ~eps*||A||.
SymmetricEigen symmetric_eigen(const DenseMatrix& a, bool want_vectors);

// Symmetric tridiagonal helpers (diag alpha[0..k), offdiag beta[0..k-1)).
// Number of eigenvalues strictly below x.
std::size_t sturm_count(const std::vector<double>& alpha, const std::vector<double>& beta, double x);
// Largest (want_max) or smallest eigenvalue by bisection to full precision.
double tridiagonal_extreme(const std::vector<double>& alpha, const std::vector<double>& beta, bool want_max);
// Unit eigenvector for an accurate eigenvalue estimate, by inverse iteration.
std::vector<double> tridiagonal_eigenvector(const std::vector<double>& alpha, const std::vector<double>& beta,
                                            double lambda);

}  // namespace rlift
