#include "zoll/flow.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <thread>

#include "zoll/errors.hpp"

namespace zoll {

namespace {

// ---------------------------------------------------------------------------
// Charts.
//
// Chart 0 is the standard polar chart; chart 1 is the polar chart of a frame
// rotated by pi/2 about the y-axis, so the troublesome poles of chart 0 land
// on the equator of chart 1. In chart 1 the pullback metric is
//   g11 = 1 + q A^2,  g12 = -q A B,  g22 = sin^2 t + q B^2   (times scale2)
// with u = sin t cos p, A = cos t cos p, B = sin t sin p and
// q = (f^2 - 1)/(1 - u^2), which is smooth for pole-smooth metrics.
// ---------------------------------------------------------------------------

struct ChartMetric {
    double g11, g12, g22;
    double d1g11, d1g12, d1g22;  // d/dx1
    double d2g11, d2g12, d2g22;  // d/dx2
};

ChartMetric eval_chart(const MetricOfRevolution& m, int chart, double x1,
                       double x2) {
    const double S = m.scale2();
    ChartMetric cm{};
    if (chart == 0) {
        double u = std::cos(x1), s = std::sin(x1);
        double f = m.radial(u), fp = m.radial_du(u);
        cm.g11 = S * f * f;
        cm.g12 = 0;
        cm.g22 = S * s * s;
        cm.d1g11 = S * 2.0 * f * fp * (-s);
        cm.d1g22 = S * 2.0 * s * u;
        return cm;
    }
    double ct = std::cos(x1), st = std::sin(x1);
    double cp = std::cos(x2), sp = std::sin(x2);
    double u = st * cp;
    double A = ct * cp, B = st * sp, C = ct * sp;
    double q = m.q(u), qd = m.q_du(u);
    cm.g11 = S * (1.0 + q * A * A);
    cm.g12 = -S * q * A * B;
    cm.g22 = S * (st * st + q * B * B);
    cm.d1g11 = S * A * (qd * A * A - 2.0 * q * u);
    cm.d2g11 = -S * (qd * A * A * B + 2.0 * q * A * C);
    cm.d1g12 = -S * (qd * A * A * B + q * (-u * B + A * C));
    cm.d2g12 = S * (qd * A * B * B + q * (C * B - A * u));
    cm.d1g22 = S * (2.0 * st * ct + qd * A * B * B + 2.0 * q * B * C);
    cm.d2g22 = S * (-qd * B * B * B + 2.0 * q * B * u);
    return cm;
}

struct State {
    int chart = 0;
    double y[4] = {0, 0, 0, 0};  // x1, x2, p1, p2
};

void rhs(const MetricOfRevolution& m, const State& st, double dy[4]) {
    ChartMetric g = eval_chart(m, st.chart, st.y[0], st.y[1]);
    double det = g.g11 * g.g22 - g.g12 * g.g12;
    double p1 = st.y[2], p2 = st.y[3];
    double v1 = (g.g22 * p1 - g.g12 * p2) / det;
    double v2 = (-g.g12 * p1 + g.g11 * p2) / det;
    dy[0] = v1;
    dy[1] = v2;
    // dp_i = 1/2 v^T (d_i g) v  (from H = 1/2 p^T g^{-1} p)
    dy[2] = 0.5 * (g.d1g11 * v1 * v1 + 2.0 * g.d1g12 * v1 * v2 + g.d1g22 * v2 * v2);
    dy[3] = 0.5 * (g.d2g11 * v1 * v1 + 2.0 * g.d2g12 * v1 * v2 + g.d2g22 * v2 * v2);
}

Vec3 rot_old_to_new(const Vec3& v) { return {v.z, v.y, -v.x}; }
Vec3 rot_new_to_old(const Vec3& v) { return {-v.z, v.y, v.x}; }

// Position and velocity in the chart-0 frame.
void cartesian_of_state(const MetricOfRevolution& m, const State& st, Vec3& pos,
                        Vec3& vel) {
    double ct = std::cos(st.y[0]), s = std::sin(st.y[0]);
    double cp = std::cos(st.y[1]), sp = std::sin(st.y[1]);
    Vec3 x{s * cp, s * sp, ct};
    Vec3 e1{ct * cp, ct * sp, -s};
    Vec3 e2{-s * sp, s * cp, 0};
    ChartMetric g = eval_chart(m, st.chart, st.y[0], st.y[1]);
    double det = g.g11 * g.g22 - g.g12 * g.g12;
    double v1 = (g.g22 * st.y[2] - g.g12 * st.y[3]) / det;
    double v2 = (-g.g12 * st.y[2] + g.g11 * st.y[3]) / det;
    Vec3 v = e1 * v1 + e2 * v2;
    if (st.chart == 1) {
        pos = rot_new_to_old(x);
        vel = rot_new_to_old(v);
    } else {
        pos = x;
        vel = v;
    }
}

State state_from_cartesian(const MetricOfRevolution& m, int chart, Vec3 pos,
                           Vec3 vel) {
    Vec3 x = pos, v = vel;
    if (chart == 1) {
        x = rot_old_to_new(x);
        v = rot_old_to_new(v);
    }
    double z = std::clamp(x.z, -1.0, 1.0);
    double t = std::acos(z);
    double p = std::atan2(x.y, x.x);
    double st = std::sin(t), ct = std::cos(t);
    double cp = std::cos(p), sp = std::sin(p);
    Vec3 e1{ct * cp, ct * sp, -st};
    Vec3 e2{-st * sp, st * cp, 0};
    double v1 = dot(v, e1);
    double v2 = dot(v, e2) / (st * st);
    ChartMetric g = eval_chart(m, chart, t, p);
    State out;
    out.chart = chart;
    out.y[0] = t;
    out.y[1] = p;
    out.y[2] = g.g11 * v1 + g.g12 * v2;
    out.y[3] = g.g12 * v1 + g.g22 * v2;
    return out;
}

// Azimuthal (Clairaut) momentum from chart-0 frame data.
double clairaut_of(const MetricOfRevolution& m, const Vec3& pos, const Vec3& vel) {
    return m.scale2() * (vel.x * -pos.y + vel.y * pos.x);
}

// Covector components in the round-orthonormal frame {e_theta, e_phi/sin}.
void frame_momentum(const MetricOfRevolution& m, const Vec3& pos, const Vec3& vel,
                    double& m1, double& m2) {
    double u = std::clamp(pos.z, -1.0, 1.0);
    double s = std::sqrt(std::max(1.0 - u * u, 1e-30));
    Vec3 e1{u * pos.x / s, u * pos.y / s, -s};
    double f = m.radial(u);
    m1 = m.scale2() * f * f * dot(vel, e1);
    m2 = clairaut_of(m, pos, vel) / s;
}

// Dormand-Prince 5(4).
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187,
                 A53 = 64448.0 / 6561, A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;

constexpr double kChartExit = 0.15;   // leave chart 0 this close to its pole
constexpr double kChartEnter = 0.3;   // return once safely inside chart 0

class Integrator {
public:
    Integrator(const MetricOfRevolution& m, const PhasePoint& start,
               const FlowOptions& opt)
        : m_(&m), opt_(opt) {
        st_.chart = 0;
        st_.y[0] = start.theta;
        st_.y[1] = start.phi;
        st_.y[2] = start.p_theta;
        st_.y[3] = start.p_phi;
        renormalize(st_);
        Vec3 pos, vel;
        cartesian_of_state(*m_, st_, pos, vel);
        p_phi0_ = clairaut_of(*m_, pos, vel);
        h_try_ = std::min(0.05, opt_.max_step);
        maybe_switch_chart();
    }

    double arclength() const { return s_; }
    double drift() const { return drift_; }

    void cartesian(Vec3& pos, Vec3& vel) const {
        cartesian_of_state(*m_, st_, pos, vel);
    }

    PhasePoint chart0_state() const {
        if (st_.chart == 0) {
            PhasePoint p{st_.y[0], wrap_phi(st_.y[1]), st_.y[2], st_.y[3]};
            return p;
        }
        Vec3 pos, vel;
        cartesian_of_state(*m_, st_, pos, vel);
        State s0 = state_from_cartesian(*m_, 0, pos, vel);
        return {s0.y[0], wrap_phi(s0.y[1]), s0.y[2], s0.y[3]};
    }

    void advance(double ds, GeodesicTrace* rec = nullptr) {
        double remaining = ds;
        while (remaining > 1e-14) {
            double h = std::min({h_try_, opt_.max_step, remaining});
            if (opt_.fixed_step > 0) {
                h = std::min(opt_.fixed_step, remaining);
                State out;
                double err;
                attempt(h, out, err);
                accept(out, h, rec);
                remaining -= h;
                continue;
            }
            for (;;) {
                State out;
                double err;
                attempt(h, out, err);
                if (err <= 1.0) {
                    double grow = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
                    h_try_ = h * std::clamp(grow, 0.2, 5.0);
                    accept(out, h, rec);
                    remaining -= h;
                    break;
                }
                h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
                if (h < 1e-13)
                    throw StepUnderflow("adaptive controller cannot meet tolerance");
            }
        }
    }

    struct Snapshot {
        State st;
        double s, h_try, drift;
    };
    Snapshot snapshot() const { return {st_, s_, h_try_, drift_}; }
    void restore(const Snapshot& sn) {
        st_ = sn.st;
        s_ = sn.s;
        h_try_ = sn.h_try;
        drift_ = sn.drift;
    }

private:
    static double wrap_phi(double phi) {
        double w = std::fmod(phi, kTwoPi);
        if (w < 0) w += kTwoPi;
        return w;
    }

    void attempt(double h, State& out, double& err) const {
        const double* y = st_.y;
        double k1[4], k2[4], k3[4], k4[4], k5[4], k6[4], k7[4], tmp[4];
        State ts = st_;
        rhs(*m_, ts, k1);
        for (int i = 0; i < 4; ++i) tmp[i] = y[i] + h * A21 * k1[i];
        std::copy(tmp, tmp + 4, ts.y);
        rhs(*m_, ts, k2);
        for (int i = 0; i < 4; ++i) tmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        std::copy(tmp, tmp + 4, ts.y);
        rhs(*m_, ts, k3);
        for (int i = 0; i < 4; ++i)
            tmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        std::copy(tmp, tmp + 4, ts.y);
        rhs(*m_, ts, k4);
        for (int i = 0; i < 4; ++i)
            tmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        std::copy(tmp, tmp + 4, ts.y);
        rhs(*m_, ts, k5);
        for (int i = 0; i < 4; ++i)
            tmp[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] +
                                 A64 * k4[i] + A65 * k5[i]);
        std::copy(tmp, tmp + 4, ts.y);
        rhs(*m_, ts, k6);
        for (int i = 0; i < 4; ++i)
            tmp[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] +
                                 B5 * k5[i] + B6 * k6[i]);
        std::copy(tmp, tmp + 4, ts.y);
        rhs(*m_, ts, k7);

        out = st_;
        std::copy(tmp, tmp + 4, out.y);
        double acc = 0;
        for (int i = 0; i < 4; ++i) {
            double e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] +
                            E6 * k6[i] + E7 * k7[i]);
            double sc = opt_.atol +
                        opt_.rtol * std::max(std::fabs(y[i]), std::fabs(out.y[i]));
            acc += (e / sc) * (e / sc);
        }
        err = std::sqrt(acc / 4.0);
    }

    void accept(const State& out, double h, GeodesicTrace* rec) {
        st_ = out;
        renormalize(st_);
        s_ += h;
        Vec3 pos, vel;
        cartesian_of_state(*m_, st_, pos, vel);
        drift_ = std::max(drift_, std::fabs(clairaut_of(*m_, pos, vel) - p_phi0_));
        maybe_switch_chart();
        if (rec) rec->samples.push_back({s_, chart0_state(), pos});
    }

    void renormalize(State& st) const {
        ChartMetric g = eval_chart(*m_, st.chart, st.y[0], st.y[1]);
        double det = g.g11 * g.g22 - g.g12 * g.g12;
        double p1 = st.y[2], p2 = st.y[3];
        double twoH =
            (g.g22 * p1 * p1 - 2.0 * g.g12 * p1 * p2 + g.g11 * p2 * p2) / det;
        double scale = 1.0 / std::sqrt(twoH);
        st.y[2] *= scale;
        st.y[3] *= scale;
    }

    void maybe_switch_chart() {
        if (st_.chart == 0) {
            if (st_.y[0] > kChartExit && st_.y[0] < kPi - kChartExit) return;
        } else {
            double z_old = std::sin(st_.y[0]) * std::cos(st_.y[1]);
            if (std::fabs(z_old) > std::cos(kChartEnter)) return;
        }
        Vec3 pos, vel;
        cartesian_of_state(*m_, st_, pos, vel);
        st_ = state_from_cartesian(*m_, 1 - st_.chart, pos, vel);
        renormalize(st_);
    }

    const MetricOfRevolution* m_;
    FlowOptions opt_;
    State st_;
    double s_ = 0;
    double h_try_ = 0.05;
    double p_phi0_ = 0;
    double drift_ = 0;
};

double halton(std::uint64_t index, unsigned base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

// --------------------------------------------------------------------------
// Self-intersection sweep over the projected curve.
// --------------------------------------------------------------------------

bool within_arc(const Vec3& a, const Vec3& b, const Vec3& p, double tol) {
    return angle_between(a, p) + angle_between(p, b) <=
           angle_between(a, b) + tol;
}

bool arcs_cross(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    const double tol = 1e-9;
    Vec3 n1 = cross(a, b), n2 = cross(c, d);
    Vec3 t = cross(n1, n2);
    double tn = norm(t);
    if (tn < 1e-12 * norm(n1) * norm(n2)) {
        // Same great circle: crossing iff the parameter intervals overlap.
        return within_arc(a, b, c, -tol) || within_arc(a, b, d, -tol) ||
               within_arc(c, d, a, -tol) || within_arc(c, d, b, -tol);
    }
    Vec3 p = t * (1.0 / tn);
    if (within_arc(a, b, p, tol) && within_arc(c, d, p, tol)) return true;
    Vec3 q = -p;
    return within_arc(a, b, q, tol) && within_arc(c, d, q, tol);
}

bool curve_is_simple(const std::vector<TraceSample>& samples, double total_length,
                     double exclusion) {
    const std::size_t n = samples.size();
    if (n < 4) return true;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double si = 0.5 * (samples[i].s + samples[i + 1].s);
        Vec3 a = normalized(samples[i].position);
        Vec3 b = normalized(samples[i + 1].position);
        for (std::size_t j = i + 2; j + 1 < n; ++j) {
            double sj = 0.5 * (samples[j].s + samples[j + 1].s);
            double gap = std::fabs(sj - si);
            gap = std::min(gap, total_length - gap);
            if (gap < exclusion) continue;
            Vec3 c = normalized(samples[j].position);
            Vec3 d = normalized(samples[j + 1].position);
            if (arcs_cross(a, b, c, d)) return false;
        }
    }
    return true;
}

}  // namespace

PhasePoint unit_covector(const MetricOfRevolution& g, double theta, double phi,
                         double beta) {
    double gtt = g.g_theta_theta(theta);
    double gpp = g.g_phi_phi(theta);
    return {theta, phi, std::sqrt(gtt) * std::cos(beta),
            std::sqrt(gpp) * std::sin(beta)};
}

double phase_distance(const MetricOfRevolution& g, const PhasePoint& a,
                      const PhasePoint& b) {
    Vec3 xa = sphere_point(a.theta, a.phi);
    Vec3 xb = sphere_point(b.theta, b.phi);
    double m1a = a.p_theta, m2a = a.p_phi / std::sin(a.theta);
    double m1b = b.p_theta, m2b = b.p_phi / std::sin(b.theta);
    (void)g;
    return norm(xa - xb) + std::hypot(m1a - m1b, m2a - m2b);
}

PhasePoint geodesic_step(const MetricOfRevolution& g, const PhasePoint& state,
                         double ds, const FlowOptions& opt) {
    if (!(ds > 0)) throw Error("geodesic_step: ds must be positive");
    Integrator itg(g, state, opt);
    itg.advance(ds);
    return itg.chart0_state();
}

GeodesicTrace trace_geodesic(const MetricOfRevolution& g, const PhasePoint& start,
                             double length, const FlowOptions& opt) {
    if (!(length > 0)) throw Error("trace_geodesic: length must be positive");
    Integrator itg(g, start, opt);
    GeodesicTrace tr;
    Vec3 pos, vel;
    itg.cartesian(pos, vel);
    tr.samples.push_back({0.0, itg.chart0_state(), pos});
    itg.advance(length, &tr);
    tr.total_length = length;
    tr.clairaut_drift = itg.drift();
    return tr;
}

ClosureCertificate closure_certificate(const MetricOfRevolution& g,
                                       const PhasePoint& start,
                                       const FlowOptions& opt) {
    ClosureCertificate cert;
    cert.initial = start;

    Vec3 pos0 = sphere_point(start.theta, start.phi);
    double m10 = start.p_theta;
    double m20 = start.p_phi / std::sin(start.theta);

    auto residual_now = [&](const Integrator& itg) {
        Vec3 pos, vel;
        itg.cartesian(pos, vel);
        double m1, m2;
        frame_momentum(g, pos, vel, m1, m2);
        return norm(pos - pos0) + std::hypot(m1 - m10, m2 - m20);
    };

    const double w = opt.closure_window;
    Integrator itg(g, start, opt);
    itg.advance(kTwoPi - w);

    const int n_grid = 512;
    const double delta = 2.0 * w / n_grid;
    std::vector<Integrator::Snapshot> snaps;
    std::vector<double> res(n_grid + 1);
    snaps.reserve(n_grid + 1);
    snaps.push_back(itg.snapshot());
    res[0] = residual_now(itg);
    int best = 0;
    for (int i = 1; i <= n_grid; ++i) {
        itg.advance(delta);
        snaps.push_back(itg.snapshot());
        res[i] = residual_now(itg);
        if (res[i] < res[best]) best = i;
    }
    cert.residual_at_2pi = res[n_grid / 2];
    cert.clairaut_drift = itg.drift();

    // Golden-section refinement of the residual minimizer.
    double lo = kTwoPi - w + delta * std::max(best - 1, 0);
    double hi = kTwoPi - w + delta * std::min(best + 1, n_grid);
    int base_idx = std::max(best - 1, 0);
    auto res_at = [&](double L) {
        Integrator local(g, start, opt);
        local.restore(snaps[base_idx]);
        if (L > local.arclength() + 1e-15) local.advance(L - local.arclength());
        return residual_now(local);
    };
    const double gr = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = res_at(x1), f2 = res_at(x2);
    for (int it = 0; it < 50; ++it) {
        if (f1 > f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = res_at(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = res_at(x1);
        }
    }
    if (f1 < f2) {
        cert.closure_length = x1;
        cert.residual = f1;
    } else {
        cert.closure_length = x2;
        cert.residual = f2;
    }
    if (res[best] < cert.residual) {
        cert.residual = res[best];
        cert.closure_length = kTwoPi - w + delta * best;
    }

    // Simplicity: dense projected trace over one full closure.
    FlowOptions dense = opt;
    dense.max_step = 0.04;
    GeodesicTrace tr = trace_geodesic(g, start, kTwoPi, dense);
    cert.simple = curve_is_simple(tr.samples, kTwoPi, 0.1);
    cert.clairaut_drift = std::max(cert.clairaut_drift, tr.clairaut_drift);
    return cert;
}

StartTriple halton_triple(std::uint64_t index) {
    double u0 = 2.0 * halton(index, 2) - 1.0;
    return {std::acos(u0), kTwoPi * halton(index, 3), kTwoPi * halton(index, 5)};
}

PhasePoint halton_start(const MetricOfRevolution& g, std::uint64_t index) {
    StartTriple t = halton_triple(index);
    return unit_covector(g, t.theta, t.phi, t.beta);
}

std::vector<ClosureCertificate> length_spectrum_sample(const MetricOfRevolution& g,
                                                       const SampleOptions& opt) {
    if (opt.n_starts < 1) throw Error("length_spectrum_sample: n_starts >= 1");
    std::vector<ClosureCertificate> out(opt.n_starts);

    auto run_one = [&](int i) {
        PhasePoint start = halton_start(g, opt.seed + static_cast<std::uint64_t>(i) + 1);
        try {
            out[i] = closure_certificate(g, start, opt.flow);
        } catch (const StepUnderflow&) {
            // Near-singular trajectory (non-smooth control metrics): report as
            // a failed closure rather than aborting the whole run.
            out[i].initial = start;
            out[i].residual = std::numeric_limits<double>::infinity();
            out[i].residual_at_2pi = std::numeric_limits<double>::infinity();
            out[i].closure_length = 0;
            out[i].simple = false;
        }
    };

    unsigned workers = opt.workers > 0
                           ? static_cast<unsigned>(opt.workers)
                           : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(opt.n_starts));
    if (workers <= 1) {
        for (int i = 0; i < opt.n_starts; ++i) run_one(i);
        return out;
    }
    std::vector<std::future<void>> futs;
    for (unsigned wk = 0; wk < workers; ++wk) {
        futs.push_back(std::async(std::launch::async, [&, wk] {
            for (int i = static_cast<int>(wk); i < opt.n_starts;
                 i += static_cast<int>(workers))
                run_one(i);
        }));
    }
    for (auto& f : futs) f.get();
    return out;
}

namespace {

struct ProbeResult {
    double miss = std::numeric_limits<double>::infinity();
    double arclength = 0;
};

// Closest approach of the geodesic with direction beta to target point b.
ProbeResult probe_direction(const MetricOfRevolution& g, const PhasePoint& start,
                            const Vec3& target, double max_len, double step,
                            const FlowOptions& flow) {
    FlowOptions opt = flow;
    opt.max_step = step;
    GeodesicTrace tr = trace_geodesic(g, start, max_len, opt);

    // Local minima of squared chordal distance, refined parabolically.
    struct Min {
        double s, d2;
    };
    std::vector<Min> minima;
    const auto& sm = tr.samples;
    std::vector<double> d2(sm.size());
    for (std::size_t i = 0; i < sm.size(); ++i) {
        Vec3 diff = sm[i].position - target;
        d2[i] = dot(diff, diff);
    }
    for (std::size_t i = 1; i + 1 < sm.size(); ++i) {
        if (d2[i] <= d2[i - 1] && d2[i] <= d2[i + 1]) {
            double s0 = sm[i - 1].s, s1 = sm[i].s, s2 = sm[i + 1].s;
            double f0 = d2[i - 1], f1 = d2[i], f2 = d2[i + 1];
            // Parabola through three unevenly spaced points.
            double denom = (s0 - s1) * (s0 - s2) * (s1 - s2);
            double A = (s2 * (f1 - f0) + s1 * (f0 - f2) + s0 * (f2 - f1)) / denom;
            double B = (s2 * s2 * (f0 - f1) + s1 * s1 * (f2 - f0) +
                        s0 * s0 * (f1 - f2)) /
                       denom;
            double sv = s1, fv = f1;
            if (A > 0) {
                sv = -B / (2.0 * A);
                if (sv >= s0 && sv <= s2) {
                    double C = f1 - A * s1 * s1 - B * s1;
                    fv = std::max(0.0, A * sv * sv + B * sv + C);
                } else {
                    sv = s1;
                }
            }
            minima.push_back({sv, fv});
        }
    }
    if (minima.empty()) return {};
    double best = minima[0].d2;
    for (const auto& mn : minima) best = std::min(best, mn.d2);
    // Earliest passage within tolerance of the global best.
    for (const auto& mn : minima) {
        if (mn.d2 <= best + 1e-12 + 1e-6 * best)
            return {std::sqrt(mn.d2), mn.s};
    }
    return {std::sqrt(best), minima[0].s};
}

}  // namespace

double shoot_distance(const MetricOfRevolution& g, double theta_a, double phi_a,
                      double theta_b, double phi_b, const ShootOptions& opt) {
    Vec3 target = sphere_point(theta_b, phi_b);
    auto probe = [&](double beta, double step) {
        PhasePoint start = unit_covector(g, theta_a, phi_a, beta);
        return probe_direction(g, start, target, opt.max_length, step, opt.flow);
    };

    std::vector<double> fan_miss(opt.fan);
    for (int j = 0; j < opt.fan; ++j)
        fan_miss[j] = probe(kTwoPi * j / opt.fan, opt.coarse_step).miss;

    // Several geodesic families can reach the target (e.g. the equator and
    // the meridian between near-antipodal points); refine every local
    // minimum of the fan and keep the shortest connection.
    const double gr = 0.6180339887498949;
    double span = kTwoPi / opt.fan;
    double best_len = std::numeric_limits<double>::infinity();
    for (int j = 0; j < opt.fan; ++j) {
        double prev = fan_miss[(j + opt.fan - 1) % opt.fan];
        double next = fan_miss[(j + 1) % opt.fan];
        if (!(fan_miss[j] <= prev && fan_miss[j] <= next)) continue;
        double a = kTwoPi * j / opt.fan - span;
        double b = kTwoPi * j / opt.fan + span;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = probe(x1, opt.coarse_step).miss;
        double f2 = probe(x2, opt.coarse_step).miss;
        for (int it = 0; it < 50; ++it) {
            if (f1 > f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = probe(x2, opt.coarse_step).miss;
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = probe(x1, opt.coarse_step).miss;
            }
        }
        ProbeResult final = probe(f1 < f2 ? x1 : x2, opt.fine_step);
        if (final.miss < opt.miss_tolerance)
            best_len = std::min(best_len, final.arclength);
    }
    if (!std::isfinite(best_len))
        throw NoConnectionFound("shooting fan failed to connect the points");
    return best_len;
}

}  // namespace zoll
