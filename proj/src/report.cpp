#include <algorithm>
#include <cmath>
#include <vector>

#include "zoll/flow.hpp"
#include "zoll/geom.hpp"
#include "zoll/metric.hpp"

namespace zoll {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1] via Newton on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double xi = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < n; ++k) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * xi * p1 - k * p2) / (k + 1.0);
            }
            pp = n * (xi * p0 - p1) / (xi * xi - 1.0);
            double dx = p0 / pp;
            xi -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        x[i] = -xi;
        x[n - 1 - i] = xi;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - xi * xi) * pp * pp);
    }
}

}  // namespace

CurvatureReport curvature_report(const MetricOfRevolution& g,
                                 const ReportOptions& opt) {
    CurvatureReport rep;

    // K extremes on a dense u-grid with local golden refinement.
    const int n = std::max(opt.grid, 64);
    double kmin = g.gauss_curvature_u(-1.0), kmax = kmin;
    int imin = 0, imax = 0;
    for (int i = 0; i <= n; ++i) {
        double u = -1.0 + 2.0 * i / n;
        double K = g.gauss_curvature_u(u);
        if (K < kmin) {
            kmin = K;
            imin = i;
        }
        if (K > kmax) {
            kmax = K;
            imax = i;
        }
    }
    const double du = 2.0 / n;
    auto refine = [&](int idx, double sign) {
        double a = std::max(-1.0, -1.0 + idx * du - du);
        double b = std::min(1.0, -1.0 + idx * du + du);
        const double gr = 0.6180339887498949;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = sign * g.gauss_curvature_u(x1);
        double f2 = sign * g.gauss_curvature_u(x2);
        for (int it = 0; it < 70; ++it) {
            if (f1 < f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = sign * g.gauss_curvature_u(x2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = sign * g.gauss_curvature_u(x1);
            }
        }
        return sign * std::max(f1, f2);
    };
    rep.k_max = std::max(kmax, refine(imax, 1.0));
    rep.k_min = std::min(kmin, refine(imin, -1.0));

    // Area and total curvature in the u variable:
    //   dA = scale2 f(u) du dphi, K dA = (f - u f') / f^2 du dphi.
    std::vector<double> xg, wg;
    gauss_legendre(96, xg, wg);
    double area = 0, total = 0;
    for (std::size_t i = 0; i < xg.size(); ++i) {
        double u = xg[i];
        double f = g.radial(u), fp = g.radial_du(u);
        area += wg[i] * g.scale2() * f;
        total += wg[i] * (f - u * fp) / (f * f);
    }
    rep.area = kTwoPi * area;
    rep.total_curvature = kTwoPi * total;

    if (opt.with_diameter) {
        // Metrics of revolution realize the diameter on meridian/antipodal
        // configurations; sample antipodal pairs along a meridian and take the
        // largest shooting distance. An estimate, not a certificate.
        double best = 0;
        ShootOptions sopt;
        sopt.fan = 48;
        for (int i = 1; i <= opt.diameter_samples; ++i) {
            double theta = kPi * i / (opt.diameter_samples + 1);
            double d = shoot_distance(g, theta, 0.0, kPi - theta, kPi, sopt);
            best = std::max(best, d);
        }
        rep.diameter_estimate = best;
        rep.diameter_method = "meridian-antipodal-shooting";
    } else {
        rep.diameter_method = "skipped";
    }
    return rep;
}

}  // namespace zoll
