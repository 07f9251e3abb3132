#pragma once
#include <optional>
#include <string>
#include <utility>

#include "zoll/poly.hpp"
#include "zoll/profile.hpp"

namespace zoll {

// Metric of revolution on S^2 in polar coordinates (theta, phi):
//   g = scale2 * [ f(cos theta)^2 dtheta^2 + sin^2 theta dphi^2 ]
// with radial factor f. The Zoll family has f = 1 + h, h an odd profile;
// arbitrary polynomial factors are allowed for non-Zoll control metrics.
class MetricOfRevolution {
public:
    static MetricOfRevolution round() { return from_profile(OddProfile({0.0})); }
    static MetricOfRevolution scaled_round(double scale2);
    static MetricOfRevolution from_profile(const OddProfile& profile, double scale2 = 1.0);
    static MetricOfRevolution from_radial_factor(Poly f, double scale2 = 1.0);

    // f(u) and df/du, u = cos theta.
    double radial(double u) const { return f_(u); }
    double radial_du(double u) const { return fdu_(u); }
    double scale2() const { return scale2_; }

    // q(u) = (f(u)^2 - 1)/(1 - u^2); a polynomial when the metric is smooth
    // at the poles (f(+-1) = 1), otherwise carries a rational tail.
    bool pole_smooth() const { return pole_smooth_; }
    double q(double u) const;
    double q_du(double u) const;

    // Component evaluation, guarded to theta in [delta_pole, pi - delta_pole].
    double g_theta_theta(double theta) const;
    double g_phi_phi(double theta) const;

    // K = (f - u f') / (scale2 * f^3); derived from the surface-of-revolution
    // curvature in the u = cos theta variable, validated against a
    // finite-difference oracle in the tests.
    double gauss_curvature_u(double u) const;

    const std::optional<OddProfile>& profile() const { return profile_; }

    // Canonical textual identity, used as the certification-artifact key.
    std::string canonical_key() const;

    static constexpr double kPoleGuard = 1e-6;

private:
    MetricOfRevolution() = default;

    Poly f_, fdu_;
    Poly q_poly_, q_poly_du_;
    double q_rem0_ = 0, q_rem1_ = 0;  // rational tail (a + b u)/(1 - u^2)
    bool pole_smooth_ = true;
    double scale2_ = 1.0;
    std::optional<OddProfile> profile_;
};

inline MetricOfRevolution make_metric(const OddProfile& profile) {
    return MetricOfRevolution::from_profile(profile);
}

double gauss_curvature(const MetricOfRevolution& g, double theta);

// sup-norm distance between metrics in the round-orthonormal frame
// {e_theta, e_phi / sin theta}: dense 1-D sampling in theta plus a local
// refinement pass around the sampled maximizer.
double c0_distance(const MetricOfRevolution& g, const MetricOfRevolution& gp,
                   int samples = 4096);

// Tightest sampled (C1, C2) with C1 g0 <= g <= C2 g0 as quadratic forms.
std::pair<double, double> conformal_bounds(const MetricOfRevolution& g,
                                           int samples = 4096);

struct CurvatureReport {
    double k_min = 0, k_max = 0;
    double total_curvature = 0;  // integral of K dA
    double area = 0;
    double diameter_estimate = 0;
    std::string diameter_method;
};

struct ReportOptions {
    int grid = 4096;
    bool with_diameter = false;
    int diameter_samples = 9;
};

// Implemented alongside the shooting solver (diameter needs the flow module).
CurvatureReport curvature_report(const MetricOfRevolution& g,
                                 const ReportOptions& opt = {});

}  // namespace zoll
