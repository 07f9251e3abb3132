#pragma once
#include <vector>

namespace zoll {

struct PolyPoleDivision;

// Dense polynomial, coeffs[i] multiplies u^i.
class Poly {
public:
    Poly() : c_{0.0} {}
    explicit Poly(std::vector<double> c);

    double operator()(double u) const;
    Poly derivative() const;
    Poly operator*(const Poly& o) const;
    Poly operator+(const Poly& o) const;
    Poly scaled(double a) const;

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<double>& coeffs() const { return c_; }

    // Writes *this = quotient * (1 - u^2) + rem0 + rem1 * u.
    PolyPoleDivision divide_by_one_minus_u2() const;

private:
    std::vector<double> c_;
    void trim();
};

struct PolyPoleDivision {
    Poly quotient;
    double rem0 = 0, rem1 = 0;
};

}  // namespace zoll
