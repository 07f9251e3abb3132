#include "zoll/profile.hpp"

#include <cmath>
#include <cstddef>

#include "zoll/errors.hpp"

namespace zoll {

namespace {

// Horner in u^2 for the even cofactor P with h(u) = u * P(u^2).
double even_cofactor(const std::vector<double>& c, double u2) {
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * u2 + c[i];
    return acc;
}

}  // namespace

OddProfile::OddProfile(std::vector<double> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) c_.push_back(0.0);

    double sum = 0.0, abs_sum = 0.0;
    for (double v : c_) {
        sum += v;
        abs_sum += std::fabs(v);
    }
    if (std::fabs(sum) > 1e-12 * (abs_sum + 1.0))
        throw ProfileInvalid("odd profile: coefficients must sum to zero (h(+-1)=0)");

    // sup |h| on [0,1] (oddness gives [-1,0] for free): dense sampling with a
    // Lipschitz slack, refined until the verdict is unambiguous.
    double lip = 0.0;
    for (std::size_t k = 0; k < c_.size(); ++k)
        lip += std::fabs(c_[k]) * static_cast<double>(2 * k + 1);

    int n = 4096;
    for (;;) {
        double max_sample = 0.0;
        for (int i = 0; i <= n; ++i) {
            double u = static_cast<double>(i) / n;
            max_sample = std::max(max_sample, std::fabs((*this)(u)));
        }
        double slack = lip * 0.5 / n;
        if (max_sample >= 1.0)
            throw ProfileInvalid("odd profile: sup |h| >= 1 violates metric positivity");
        if (max_sample + slack < 1.0) {
            sup_bound_ = max_sample + slack;
            break;
        }
        if (n >= (1 << 22))
            throw ProfileInvalid("odd profile: cannot certify sup |h| < 1");
        n *= 2;
    }
}

double OddProfile::operator()(double u) const { return u * even_cofactor(c_, u * u); }

double OddProfile::derivative(double u) const {
    // h'(u) = sum c_k (2k+1) u^{2k}
    double u2 = u * u, acc = 0.0;
    for (std::size_t i = c_.size(); i-- > 0;)
        acc = acc * u2 + c_[i] * static_cast<double>(2 * i + 1);
    return acc;
}

Poly OddProfile::as_poly() const {
    std::vector<double> dense(2 * c_.size(), 0.0);
    for (std::size_t k = 0; k < c_.size(); ++k) dense[2 * k + 1] = c_[k];
    return Poly(std::move(dense));
}

bool OddProfile::is_zero() const {
    for (double v : c_)
        if (v != 0.0) return false;
    return true;
}

OddProfile OddProfile::scaled_cubic(double eps) {
    return OddProfile({eps, -eps});
}

}  // namespace zoll
