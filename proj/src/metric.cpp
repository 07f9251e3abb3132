#include "zoll/metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "zoll/errors.hpp"
#include "zoll/geom.hpp"

namespace zoll {

MetricOfRevolution MetricOfRevolution::scaled_round(double scale2) {
    if (!(scale2 > 0)) throw Error("metric scale must be positive");
    MetricOfRevolution m = from_profile(OddProfile({0.0}));
    m.scale2_ = scale2;
    return m;
}

MetricOfRevolution MetricOfRevolution::from_profile(const OddProfile& profile,
                                                    double scale2) {
    if (!(scale2 > 0)) throw Error("metric scale must be positive");
    Poly f = profile.as_poly() + Poly({1.0});
    MetricOfRevolution m = from_radial_factor(std::move(f), scale2);
    m.profile_ = profile;
    return m;
}

MetricOfRevolution MetricOfRevolution::from_radial_factor(Poly f, double scale2) {
    if (!(scale2 > 0)) throw Error("metric scale must be positive");
    MetricOfRevolution m;
    m.scale2_ = scale2;
    m.fdu_ = f.derivative();
    // q = (f^2 - 1)/(1 - u^2), split into polynomial part and rational tail.
    Poly f2m1 = f * f + Poly({-1.0});
    auto div = f2m1.divide_by_one_minus_u2();
    m.q_poly_ = div.quotient;
    m.q_poly_du_ = div.quotient.derivative();
    m.q_rem0_ = div.rem0;
    m.q_rem1_ = div.rem1;
    m.pole_smooth_ =
        std::fabs(div.rem0) < 1e-12 && std::fabs(div.rem1) < 1e-12;
    if (m.pole_smooth_) {
        m.q_rem0_ = m.q_rem1_ = 0.0;
    }
    m.f_ = std::move(f);

    // Positivity of f on [-1,1].
    for (int i = 0; i <= 2048; ++i) {
        double u = -1.0 + 2.0 * i / 2048.0;
        if (!(m.f_(u) > 0)) throw Error("radial factor must be positive on [-1,1]");
    }
    return m;
}

double MetricOfRevolution::q(double u) const {
    double v = q_poly_(u);
    if (!pole_smooth_) v += (q_rem0_ + q_rem1_ * u) / (1.0 - u * u);
    return v;
}

double MetricOfRevolution::q_du(double u) const {
    double v = q_poly_du_(u);
    if (!pole_smooth_) {
        double d = 1.0 - u * u;
        v += (q_rem1_ * d + 2.0 * u * (q_rem0_ + q_rem1_ * u)) / (d * d);
    }
    return v;
}

namespace {
void check_guard(double theta) {
    if (theta < MetricOfRevolution::kPoleGuard ||
        theta > kPi - MetricOfRevolution::kPoleGuard)
        throw PoleEvaluation("theta inside pole guard band");
}
}  // namespace

double MetricOfRevolution::g_theta_theta(double theta) const {
    check_guard(theta);
    double f = f_(std::cos(theta));
    return scale2_ * f * f;
}

double MetricOfRevolution::g_phi_phi(double theta) const {
    check_guard(theta);
    double s = std::sin(theta);
    return scale2_ * s * s;
}

double MetricOfRevolution::gauss_curvature_u(double u) const {
    double f = f_(u), fp = fdu_(u);
    return (f - u * fp) / (scale2_ * f * f * f);
}

std::string MetricOfRevolution::canonical_key() const {
    std::string s = "radial=[";
    char buf[40];
    for (std::size_t i = 0; i < f_.coeffs().size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", f_.coeffs()[i]);
        if (i) s += ",";
        s += buf;
    }
    std::snprintf(buf, sizeof buf, "];scale2=%.17g", scale2_);
    s += buf;
    return s;
}

double gauss_curvature(const MetricOfRevolution& g, double theta) {
    check_guard(theta);
    return g.gauss_curvature_u(std::cos(theta));
}

namespace {

// Eigenvalues of g in the round-orthonormal frame are scale2*f^2 and scale2.
// Largest |difference| of the two diagonal entries, as a function of u.
double frame_gap(const MetricOfRevolution& a, const MetricOfRevolution& b,
                 double u) {
    double fa = a.radial(u), fb = b.radial(u);
    double d1 = std::fabs(a.scale2() * fa * fa - b.scale2() * fb * fb);
    double d2 = std::fabs(a.scale2() - b.scale2());
    return std::max(d1, d2);
}

// Golden-section maximization of fn on [lo, hi].
template <typename F>
double golden_max(F fn, double lo, double hi, int iters = 80) {
    const double r = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - r * (b - a), x2 = a + r * (b - a);
    double f1 = fn(x1), f2 = fn(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = fn(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = fn(x1);
        }
    }
    return std::max(f1, f2);
}

}  // namespace

double c0_distance(const MetricOfRevolution& g, const MetricOfRevolution& gp,
                   int samples) {
    double best = 0.0;
    int best_i = 0;
    for (int i = 0; i <= samples; ++i) {
        double u = -1.0 + 2.0 * i / samples;
        double v = frame_gap(g, gp, u);
        if (v > best) {
            best = v;
            best_i = i;
        }
    }
    double du = 2.0 / samples;
    double lo = std::max(-1.0, -1.0 + best_i * du - du);
    double hi = std::min(1.0, -1.0 + best_i * du + du);
    double refined =
        golden_max([&](double u) { return frame_gap(g, gp, u); }, lo, hi);
    return std::max(best, refined);
}

std::pair<double, double> conformal_bounds(const MetricOfRevolution& g,
                                           int samples) {
    double c1 = g.scale2(), c2 = g.scale2();
    for (int i = 0; i <= samples; ++i) {
        double u = -1.0 + 2.0 * i / samples;
        double f = g.radial(u);
        double e = g.scale2() * f * f;
        c1 = std::min(c1, e);
        c2 = std::max(c2, e);
    }
    // Tighten the f^2 extremes around the sampled optima.
    double du = 2.0 / samples;
    auto ev = [&](double u) {
        double f = g.radial(u);
        return g.scale2() * f * f;
    };
    for (int i = 1; i < samples; ++i) {
        double u = -1.0 + 2.0 * i / samples;
        double v = ev(u);
        if (v == c2)
            c2 = std::max(c2, golden_max(ev, u - du, u + du));
        if (v == c1)
            c1 = std::min(c1, -golden_max([&](double x) { return -ev(x); },
                                          u - du, u + du));
    }
    return {c1, c2};
}

}  // namespace zoll
