#pragma once
#include <vector>

#include "zoll/poly.hpp"

namespace zoll {

// Odd function h(u) = sum_k c_k u^{2k+1} on [-1,1] with h(+-1) = 0 and
// sup |h| < 1. Parametrizes a rotationally symmetric Zoll metric.
class OddProfile {
public:
    // Throws ProfileInvalid if sum c_k != 0 or sup |h| >= 1.
    explicit OddProfile(std::vector<double> coeffs);

    // Evaluated as u * P(u^2), so h(-u) == -h(u) holds exactly in floating point.
    double operator()(double u) const;
    double derivative(double u) const;

    const std::vector<double>& coeffs() const { return c_; }
    Poly as_poly() const;

    // Certified upper bound on sup |h| (sample max plus Lipschitz slack).
    double sup_bound() const { return sup_bound_; }

    bool is_zero() const;

    // h(u) = eps * (u - u^3), the family used throughout the test battery.
    static OddProfile scaled_cubic(double eps);

private:
    std::vector<double> c_;  // c_[k] multiplies u^{2k+1}
    double sup_bound_ = 0;
};

}  // namespace zoll
