#pragma once

#include <cmath>
#include <span>

namespace rlift {

// Neumaier's variant of Kahan summation; order-fixed, so results are
// reproducible regardless of how callers partition work.
class CompensatedSum {
public:
    void add(double v) {
        double t = sum_ + v;
        if (std::fabs(sum_) >= std::fabs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_dot(std::span<const double> a, std::span<const double> b) {
    CompensatedSum s;
    for (std::size_t i = 0; i < a.size(); ++i) s.add(a[i] * b[i]);
    return s.value();
}

// (1+eps)log(1+eps) - eps, extended to eps = -1 by continuity (value 1).
double b_function(double eps);

}  // namespace rlift
