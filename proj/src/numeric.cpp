#include "rlift/numeric.hpp"

#include "rlift/error.hpp"

namespace rlift {

double b_function(double eps) {
    if (std::isnan(eps) || eps < -1.0) throw Error(ErrorCode::DomainError, "b(eps) needs eps >= -1");
    if (eps == -1.0) return 1.0;
    if (std::fabs(eps) < 1e-3) {
        // sum_{k>=2} (-1)^k eps^k / (k(k-1)); the closed form cancels badly here
        double term = eps * eps, s = 0.0;
        for (int k = 2; k < 12; ++k) {
            s += term / (k * (k - 1.0));
            term *= -eps;
        }
        return s;
    }
    return (1.0 + eps) * std::log1p(eps) - eps;
}

}  // namespace rlift
