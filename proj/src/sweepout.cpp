#include "zoll/sweepout.hpp"

#include <algorithm>
#include <cmath>

#include "zoll/errors.hpp"

namespace zoll {

namespace {

// g-speed of a tangent vector V at unit point x:
//   g(V, V) = scale2 * (|V|^2 + q(z) V_z^2)
// which is the chart-free form of the revolution metric for pole-smooth f.
double g_speed(const MetricOfRevolution& m, const Vec3& x, const Vec3& v) {
    double u = std::clamp(x.z, -1.0, 1.0);
    return std::sqrt(m.scale2() * (dot(v, v) + m.q(u) * v.z * v.z));
}

// 4-point Gauss-Legendre on [0,1].
constexpr double kGx4[4] = {0.06943184420297371, 0.33000947820757187,
                            0.66999052179242813, 0.93056815579702629};
constexpr double kGw4[4] = {0.17392742256872692, 0.32607257743127305,
                            0.32607257743127305, 0.17392742256872692};

// Quadrature of the g-speed along the round arc from a to b.
double segment_length(const MetricOfRevolution& m, const Vec3& a, const Vec3& b,
                      int quad_points, int subdivisions) {
    double alpha = angle_between(a, b);
    if (alpha < 1e-15) return 0.0;
    double sa = std::sin(alpha);
    auto gamma = [&](double t) {
        return (a * std::sin((1.0 - t) * alpha) + b * std::sin(t * alpha)) *
               (1.0 / sa);
    };
    auto dgamma = [&](double t) {
        return (a * -std::cos((1.0 - t) * alpha) + b * std::cos(t * alpha)) *
               (alpha / sa);
    };
    double total = 0.0;
    for (int s = 0; s < subdivisions; ++s) {
        double t0 = static_cast<double>(s) / subdivisions;
        double dt = 1.0 / subdivisions;
        if (quad_points <= 1) {
            double t = t0 + 0.5 * dt;
            total += dt * g_speed(m, gamma(t), dgamma(t));
        } else {
            for (int k = 0; k < 4; ++k) {
                double t = t0 + kGx4[k] * dt;
                total += dt * kGw4[k] * g_speed(m, gamma(t), dgamma(t));
            }
        }
    }
    return total;
}

double local_objective(const MetricOfRevolution& m, const Vec3& a, const Vec3& x,
                       const Vec3& b) {
    return segment_length(m, a, x, 1, 1) + segment_length(m, x, b, 1, 1);
}

void tangent_basis(const Vec3& x, Vec3& t1, Vec3& t2) {
    Vec3 ref = std::fabs(x.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
    t1 = normalized(cross(ref, x));
    t2 = cross(x, t1);
}

// One local geodesic-replacement move: pull x toward the minimizer of
// len(a,x) + len(x,b), never increasing the objective, displacement <= cap.
Vec3 local_shorten(const MetricOfRevolution& m, const Vec3& a, Vec3 x,
                   const Vec3& b, double cap) {
    for (int iter = 0; iter < 2; ++iter) {
        Vec3 t1, t2;
        tangent_basis(x, t1, t2);
        double f0 = local_objective(m, a, x, b);
        const double dstep = 1e-6;
        double g1 = (local_objective(m, a, normalized(x + t1 * dstep), b) -
                     local_objective(m, a, normalized(x - t1 * dstep), b)) /
                    (2.0 * dstep);
        double g2 = (local_objective(m, a, normalized(x + t2 * dstep), b) -
                     local_objective(m, a, normalized(x - t2 * dstep), b)) /
                    (2.0 * dstep);
        double gn = std::hypot(g1, g2);
        if (gn < 1e-12) break;
        Vec3 dir = (t1 * (-g1 / gn)) + (t2 * (-g2 / gn));
        double lam = cap;
        bool moved = false;
        while (lam > 1e-13) {
            Vec3 cand = normalized(x + dir * lam);
            // Sufficient decrease, so flat-valley noise cannot drift the vertex.
            if (local_objective(m, a, cand, b) < f0 - 0.1 * gn * lam) {
                x = cand;
                moved = true;
                break;
            }
            lam *= 0.5;
        }
        if (!moved) break;
    }
    return x;
}

double coarse_length(const MetricOfRevolution& m, const DiscreteCurve& c) {
    return curve_length(m, c, 1, 1);
}

// Uniform-arclength resampling along the round arcs of the polygon.
DiscreteCurve remesh(const DiscreteCurve& c) {
    const std::size_t n = c.vertices.size();
    std::vector<double> cum(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        cum[i + 1] =
            cum[i] + angle_between(c.vertices[i], c.vertices[(i + 1) % n]);
    double total = cum[n];
    DiscreteCurve out;
    out.vertices.resize(n);
    std::size_t seg = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double target = total * static_cast<double>(i) / n;
        while (seg + 1 < n && cum[seg + 1] < target) ++seg;
        const Vec3& a = c.vertices[seg];
        const Vec3& b = c.vertices[(seg + 1) % n];
        double alpha = angle_between(a, b);
        double t = alpha > 1e-15 ? (target - cum[seg]) / alpha : 0.0;
        double sa = std::sin(alpha);
        out.vertices[i] =
            alpha > 1e-15
                ? normalized((a * std::sin((1.0 - t) * alpha) + b * std::sin(t * alpha)) *
                             (1.0 / sa))
                : a;
    }
    return out;
}

bool concentration_violated(const DiscreteCurve& c, double radius,
                            double fraction) {
    const std::size_t n = c.vertices.size();
    double chord = 2.0 * std::sin(radius / 2.0);
    double chord2 = chord * chord;
    std::size_t limit = static_cast<std::size_t>(fraction * n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t count = 0;
        for (std::size_t j = 0; j < n; ++j) {
            Vec3 d = c.vertices[i] - c.vertices[j];
            if (dot(d, d) <= chord2) ++count;
        }
        if (count > limit) return true;
    }
    return false;
}

void one_round(const MetricOfRevolution& m, DiscreteCurve& c, double cap) {
    const std::size_t n = c.vertices.size();
    for (std::size_t parity = 0; parity < 2; ++parity) {
        for (std::size_t i = parity; i < n; i += 2) {
            const Vec3& a = c.vertices[(i + n - 1) % n];
            const Vec3& b = c.vertices[(i + 1) % n];
            c.vertices[i] = local_shorten(m, a, c.vertices[i], b, cap);
        }
    }
}

}  // namespace

double curve_length(const MetricOfRevolution& g, const DiscreteCurve& c,
                    int quad_points, int subdivisions) {
    const std::size_t n = c.vertices.size();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        total += segment_length(g, c.vertices[i], c.vertices[(i + 1) % n],
                                quad_points, subdivisions);
    return total;
}

SweepoutFamily initial_sweepout(const MetricOfRevolution& g, int t_curves,
                                int n_vertices) {
    if (t_curves < 3) throw Error("initial_sweepout: T >= 3 required");
    if (n_vertices < 8) throw Error("initial_sweepout: n_vertices >= 8 required");
    SweepoutFamily fam;
    fam.curves.resize(t_curves);
    for (int k = 0; k < t_curves; ++k) {
        double theta = kPi * static_cast<double>(k) / (t_curves - 1);
        DiscreteCurve& c = fam.curves[k];
        c.vertices.resize(n_vertices);
        for (int j = 0; j < n_vertices; ++j)
            c.vertices[j] = sphere_point(theta, kTwoPi * j / n_vertices);
        if (k == 0 || k == t_curves - 1) c.collapsed = true;
        double len = coarse_length(g, c);
        fam.max_length = std::max(fam.max_length, len);
        if (len < kCollapseTolerance) c.collapsed = true;
    }
    fam.width_estimate = fam.max_length;
    return fam;
}

DiscreteCurve birkhoff_shorten(const MetricOfRevolution& g,
                               const DiscreteCurve& curve,
                               const ShortenOptions& opt, ShortenLog* log) {
    if (curve.vertices.size() < 3)
        throw Error("birkhoff_shorten: need at least 3 vertices");
    DiscreteCurve c = curve;
    for (int r = 0; r < opt.rounds; ++r) {
        double len = coarse_length(g, c);
        double cap =
            opt.displacement_cap_factor * len / static_cast<double>(c.vertices.size());
        if (cap < 1e-9) cap = 1e-9;
        one_round(g, c, cap);
        double after = coarse_length(g, c);
        if (log) log->lengths.push_back(after);
        if (after < kCollapseTolerance) {
            c.collapsed = true;
            throw CollapseDetected("curve shortened below collapse tolerance");
        }
        if (opt.enforce_no_concentration &&
            concentration_violated(c, opt.concentration_radius,
                                   opt.concentration_fraction)) {
            c = remesh(c);
            if (log) ++log->remesh_count;
        }
    }
    return c;
}

MinmaxResult minmax_run(const MetricOfRevolution& g, int t_curves, int n_vertices,
                        int rounds) {
    MinmaxResult res;
    res.family = initial_sweepout(g, t_curves, n_vertices);
    ShortenOptions sopt;
    sopt.rounds = 1;
    for (int r = 0; r < rounds; ++r) {
        MinmaxLogRow row;
        row.round = r + 1;
        for (int k = 0; k < t_curves; ++k) {
            DiscreteCurve& c = res.family.curves[k];
            if (c.collapsed) {
                ++row.collapse_count;
                continue;
            }
            try {
                c = birkhoff_shorten(g, c, sopt);
            } catch (const CollapseDetected&) {
                c.collapsed = true;
                ++row.collapse_count;
                continue;
            }
            double len = coarse_length(g, c);
            if (len > row.max_length) {
                row.max_length = len;
                row.argmax_t = static_cast<double>(k) / (t_curves - 1);
            }
        }
        res.log.push_back(row);
    }
    // Final measurement pass at higher quadrature order.
    double best = 0.0;
    for (const auto& c : res.family.curves) {
        if (c.collapsed) continue;
        best = std::max(best, curve_length(g, c, 4, 4));
    }
    res.estimate = best;
    res.family.max_length = best;
    res.family.width_estimate = best;
    return res;
}

double minmax_estimate(const MetricOfRevolution& g, int t_curves, int n_vertices,
                       int rounds) {
    return minmax_run(g, t_curves, n_vertices, rounds).estimate;
}

double geodesic_fixed_point_residual(const MetricOfRevolution& g,
                                     const DiscreteCurve& c) {
    const std::size_t n = c.vertices.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3& a = c.vertices[(i + n - 1) % n];
        const Vec3& b = c.vertices[(i + 1) % n];
        double seg = 0.5 * (angle_between(a, c.vertices[i]) +
                            angle_between(c.vertices[i], b));
        if (seg < 1e-12) continue;
        Vec3 opt = c.vertices[i];
        for (int it = 0; it < 6; ++it) opt = local_shorten(g, a, opt, b, seg);
        // Sliding along the local geodesic stays on it: measure only the
        // transverse part of the displacement.
        const Vec3& x = c.vertices[i];
        Vec3 chord = b - a;
        Vec3 tang = chord - x * dot(chord, x);
        double tn = norm(tang);
        Vec3 d = opt - x;
        if (tn > 1e-12) {
            Vec3 t = tang * (1.0 / tn);
            d = d - t * dot(d, t);
        }
        worst = std::max(worst, norm(d) / seg);
    }
    return worst;
}

}  // namespace zoll
