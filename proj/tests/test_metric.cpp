#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "zoll/errors.hpp"
#include "zoll/geom.hpp"
#include "zoll/metric.hpp"
#include "zoll/profile.hpp"

using namespace zoll;

namespace {

// Independent curvature oracle: finite differences of the metric components
// in theta with Richardson extrapolation,
//   K = -W'(theta) / (2 sqrt(E G)),  W = G' / sqrt(E G).
double curvature_fd_oracle(const MetricOfRevolution& m, double theta) {
    auto E = [&](double t) { return m.g_theta_theta(t); };
    auto G = [&](double t) { return m.g_phi_phi(t); };
    auto W = [&](double t, double h) {
        double Gp = (G(t + h) - G(t - h)) / (2.0 * h);
        return Gp / std::sqrt(E(t) * G(t));
    };
    auto K_at = [&](double h) {
        double Wp = (W(theta + h, h) - W(theta - h, h)) / (2.0 * h);
        return -Wp / (2.0 * std::sqrt(E(theta) * G(theta)));
    };
    double h = 1e-4;
    double k1 = K_at(h), k2 = K_at(h / 2);
    return (4.0 * k2 - k1) / 3.0;
}

OddProfile random_profile(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-0.15, 0.15);
    std::vector<double> c(4);
    double sum = 0;
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        c[i] = dist(rng);
        sum += c[i];
    }
    c.back() = -sum;
    return OddProfile(c);
}

}  // namespace

TEST_CASE("odd profile invariants") {
    CHECK_THROWS_AS(OddProfile({0.5}), ProfileInvalid);       // sum != 0
    CHECK_THROWS_AS(OddProfile({3.0, -3.0}), ProfileInvalid);  // sup |h| >= 1
    OddProfile ok = OddProfile::scaled_cubic(0.3);
    CHECK(ok.sup_bound() < 1.0);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> du(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        OddProfile h = random_profile(rng);
        for (int i = 0; i < 50; ++i) {
            double u = du(rng);
            CHECK(h(u) + h(-u) == 0.0);  // exact by representation
        }
        CHECK(h(1.0) == doctest::Approx(0.0).epsilon(1e-14));
    }
}

TEST_CASE("make_metric components") {
    auto round = MetricOfRevolution::round();
    CHECK(round.g_theta_theta(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(round.g_phi_phi(1.0) ==
          doctest::Approx(std::sin(1.0) * std::sin(1.0)).epsilon(1e-15));

    auto m = make_metric(OddProfile::scaled_cubic(0.3));
    CHECK(m.g_theta_theta(kPi / 2) == doctest::Approx(1.0).epsilon(1e-14));
    // h(0.5) = 0.3 * (0.5 - 0.125) = 0.1125, so g_tt(pi/3) = 1.1125^2.
    CHECK(m.g_theta_theta(kPi / 3) ==
          doctest::Approx(1.23765625).epsilon(1e-12));
}

TEST_CASE("antipodal symmetry of components") {
    OddProfile h = OddProfile::scaled_cubic(0.25);
    auto m = make_metric(h);
    for (double theta : {0.3, 0.9, 1.4, 2.0}) {
        double lhs = m.g_theta_theta(kPi - theta);
        double f = 1.0 - h(std::cos(theta));
        CHECK(lhs == doctest::Approx(f * f).epsilon(1e-13));
    }
}

TEST_CASE("gauss curvature against finite-difference oracle") {
    auto round = MetricOfRevolution::round();
    for (double theta : {0.4, 1.0, kPi / 2, 2.5})
        CHECK(gauss_curvature(round, theta) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(gauss_curvature(round, 1e-9), PoleEvaluation);

    auto m = make_metric(OddProfile::scaled_cubic(0.3));
    for (double theta : {0.5, 1.0, kPi / 2, 2.2, 2.8}) {
        double K = gauss_curvature(m, theta);
        double K_fd = curvature_fd_oracle(m, theta);
        CHECK(K == doctest::Approx(K_fd).epsilon(1e-6));
    }
}

TEST_CASE("gauss-bonnet and area for random profiles") {
    std::mt19937_64 rng(42);
    ReportOptions opt;
    opt.with_diameter = false;
    for (int trial = 0; trial < 10; ++trial) {
        auto m = make_metric(random_profile(rng));
        CurvatureReport rep = curvature_report(m, opt);
        CHECK(std::fabs(rep.total_curvature - 4.0 * kPi) < 1e-6);
        CHECK(std::fabs(rep.area - 4.0 * kPi) < 1e-6);
    }
}

TEST_CASE("c0 distance examples") {
    auto round = MetricOfRevolution::round();
    auto m = make_metric(OddProfile::scaled_cubic(0.3));
    CHECK(c0_distance(m, m) == 0.0);
    CHECK(c0_distance(round, MetricOfRevolution::scaled_round(1.44)) ==
          doctest::Approx(0.44).epsilon(1e-12));

    // Independent dense 1-D oracle for the profile metric.
    OddProfile h = OddProfile::scaled_cubic(0.3);
    double oracle = 0.0;
    for (int i = 0; i <= 20000; ++i) {
        double u = -1.0 + 2.0 * i / 20000.0;
        double f = 1.0 + h(u);
        oracle = std::max(oracle, std::fabs(f * f - 1.0));
    }
    CHECK(c0_distance(m, round) == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("c0 distance is a pseudometric on samples") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 8; ++trial) {
        auto a = make_metric(random_profile(rng));
        auto b = make_metric(random_profile(rng));
        auto c = make_metric(random_profile(rng));
        double ab = c0_distance(a, b), ba = c0_distance(b, a);
        double bc = c0_distance(b, c), ac = c0_distance(a, c);
        CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
        CHECK(ac <= ab + bc + 1e-9);
    }
}

TEST_CASE("conformal bounds") {
    auto round = MetricOfRevolution::round();
    auto [r1, r2] = conformal_bounds(round);
    CHECK(r1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r2 == doctest::Approx(1.0).epsilon(1e-14));

    auto scaled = MetricOfRevolution::scaled_round(1.69);
    auto [s1, s2] = conformal_bounds(scaled);
    CHECK(s1 == doctest::Approx(1.69).epsilon(1e-14));
    CHECK(s2 == doctest::Approx(1.69).epsilon(1e-14));

    OddProfile h = OddProfile::scaled_cubic(0.3);
    auto m = make_metric(h);
    double lo = 1.0, hi = 1.0;
    for (int i = 0; i <= 20000; ++i) {
        double u = -1.0 + 2.0 * i / 20000.0;
        double f = 1.0 + h(u);
        lo = std::min(lo, f * f);
        hi = std::max(hi, f * f);
    }
    auto [c1, c2] = conformal_bounds(m);
    CHECK(c1 == doctest::Approx(lo).epsilon(1e-8));
    CHECK(c2 == doctest::Approx(hi).epsilon(1e-8));
    CHECK(c1 > 0.0);

    // Consistency with the sup distance to the round metric.
    double d = c0_distance(m, MetricOfRevolution::round());
    CHECK(d <= std::max(std::fabs(c2 - 1.0), std::fabs(1.0 - c1)) + 1e-9);
}

TEST_CASE("curvature report identity cases") {
    ReportOptions opt;
    opt.with_diameter = false;
    auto rep0 = curvature_report(MetricOfRevolution::round(), opt);
    CHECK(rep0.k_min == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep0.k_max == doctest::Approx(1.0).epsilon(1e-9));

    auto repz = curvature_report(make_metric(OddProfile({0.0})), opt);
    CHECK(repz.k_min == rep0.k_min);
    CHECK(repz.k_max == rep0.k_max);
    CHECK(repz.area == rep0.area);

    auto repp = curvature_report(make_metric(OddProfile::scaled_cubic(0.3)), opt);
    CHECK(repp.k_max - repp.k_min > 0.0);
}

TEST_CASE("invalid radial factors rejected") {
    CHECK_THROWS_AS(MetricOfRevolution::from_radial_factor(Poly({0.5, 0.0, -0.6})),
                    Error);
    CHECK_THROWS_AS(MetricOfRevolution::scaled_round(-1.0), Error);
}
