#include "zoll/poly.hpp"

#include <cmath>
#include <cstddef>

namespace zoll {

Poly::Poly(std::vector<double> c) : c_(std::move(c)) {
    if (c_.empty()) c_.push_back(0.0);
    trim();
}

void Poly::trim() {
    while (c_.size() > 1 && c_.back() == 0.0) c_.pop_back();
}

double Poly::operator()(double u) const {
    double acc = 0.0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * u + c_[i];
    return acc;
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<double> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<double>(i);
    return Poly(std::move(d));
}

Poly Poly::operator*(const Poly& o) const {
    std::vector<double> r(c_.size() + o.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return Poly(std::move(r));
}

Poly Poly::operator+(const Poly& o) const {
    std::vector<double> r(std::max(c_.size(), o.c_.size()), 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return Poly(std::move(r));
}

Poly Poly::scaled(double a) const {
    std::vector<double> r(c_);
    for (double& v : r) v *= a;
    return Poly(std::move(r));
}

PolyPoleDivision Poly::divide_by_one_minus_u2() const {
    // Long division by (u^2 - 1), then negate the quotient:
    // u^i = u^{i-2} (u^2 - 1) + u^{i-2}.
    std::vector<double> work(c_);
    std::vector<double> q(work.size() > 2 ? work.size() - 2 : 1, 0.0);
    for (std::size_t i = work.size(); i-- > 2;) {
        q[i - 2] += work[i];
        work[i - 2] += work[i];
        work[i] = 0.0;
    }
    PolyPoleDivision out;
    for (double& v : q) v = -v;
    out.quotient = Poly(std::move(q));
    out.rem0 = work.empty() ? 0.0 : work[0];
    out.rem1 = work.size() > 1 ? work[1] : 0.0;
    return out;
}

}  // namespace zoll
