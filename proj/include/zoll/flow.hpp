#pragma once
#include <cstdint>
#include <vector>

#include "zoll/geom.hpp"
#include "zoll/metric.hpp"

namespace zoll {

// Unit-cotangent-bundle state in the standard chart (theta, phi).
struct PhasePoint {
    double theta = 0, phi = 0;
    double p_theta = 0, p_phi = 0;
};

struct TraceSample {
    double s = 0;       // arclength
    PhasePoint state;   // standard-chart representation
    Vec3 position;      // coordinate-sphere embedding
};

struct GeodesicTrace {
    std::vector<TraceSample> samples;
    double total_length = 0;
    double clairaut_drift = 0;  // max |p_phi(s) - p_phi(0)|
};

struct ClosureCertificate {
    PhasePoint initial;
    double closure_length = 0;   // residual minimizer in [2pi - w, 2pi + w]
    double residual = 0;         // phase-space return distance at closure_length
    double residual_at_2pi = 0;
    bool simple = false;
    double clairaut_drift = 0;
};

struct FlowOptions {
    double rtol = 1e-11;
    double atol = 1e-11;
    double max_step = 0.25;
    double fixed_step = 0;     // > 0 switches off adaptivity (order studies)
    double closure_window = 0.2;
};

// Unit covector at (theta, phi) with direction angle beta measured in the
// orthonormal frame: p_theta = sqrt(g_tt) cos beta, p_phi = sqrt(g_pp) sin beta.
PhasePoint unit_covector(const MetricOfRevolution& g, double theta, double phi,
                         double beta);

// Position chordal distance plus momentum gap in the round-orthonormal frame.
double phase_distance(const MetricOfRevolution& g, const PhasePoint& a,
                      const PhasePoint& b);

PhasePoint geodesic_step(const MetricOfRevolution& g, const PhasePoint& state,
                         double ds, const FlowOptions& opt = {});

GeodesicTrace trace_geodesic(const MetricOfRevolution& g, const PhasePoint& start,
                             double length, const FlowOptions& opt = {});

ClosureCertificate closure_certificate(const MetricOfRevolution& g,
                                       const PhasePoint& start,
                                       const FlowOptions& opt = {});

struct SampleOptions {
    int n_starts = 100;
    std::uint64_t seed = 0;
    int workers = 0;  // 0 = hardware concurrency
    FlowOptions flow;
};

// Deterministic low-discrepancy (Halton) initial conditions over
// (cos theta0, phi0, direction angle); results ordered by start index.
std::vector<ClosureCertificate> length_spectrum_sample(const MetricOfRevolution& g,
                                                       const SampleOptions& opt);

// Low-discrepancy start used by length_spectrum_sample, exposed for reports.
PhasePoint halton_start(const MetricOfRevolution& g, std::uint64_t index);

struct StartTriple {
    double theta, phi, beta;
};
StartTriple halton_triple(std::uint64_t index);

struct ShootOptions {
    int fan = 64;
    double max_length = kPi + 0.5;
    double coarse_step = 0.02;
    double fine_step = 0.005;
    double miss_tolerance = 1e-4;
    FlowOptions flow;
};

// Geodesic distance by direction-fan shooting with golden-section refinement.
double shoot_distance(const MetricOfRevolution& g, double theta_a, double phi_a,
                      double theta_b, double phi_b, const ShootOptions& opt = {});

}  // namespace zoll
