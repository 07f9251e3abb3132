#pragma once
#include <vector>

#include "zoll/geom.hpp"
#include "zoll/metric.hpp"

namespace zoll {

// Closed polygonal curve on the coordinate sphere; vertices are unit vectors.
struct DiscreteCurve {
    std::vector<Vec3> vertices;
    bool collapsed = false;
};

// g-length of the curve: per-segment quadrature of the g-speed along the
// round arc between consecutive vertices (quad_points Gauss points per
// segment, subdivisions sub-arcs each).
double curve_length(const MetricOfRevolution& g, const DiscreteCurve& c,
                    int quad_points = 1, int subdivisions = 1);

struct SweepoutFamily {
    std::vector<DiscreteCurve> curves;  // indexed by t_k = k/(T-1)
    double max_length = 0;
    double width_estimate = 0;
};

constexpr double kCollapseTolerance = 1e-3;

// Latitude-circle family: curve k sits at theta = t_k * pi; the endpoint
// curves are point curves at the poles.
SweepoutFamily initial_sweepout(const MetricOfRevolution& g, int t_curves,
                                int n_vertices);

struct ShortenOptions {
    int rounds = 1;
    double displacement_cap_factor = 1.0;  // cap = factor * average segment
    bool enforce_no_concentration = true;
    double concentration_radius = 0.2;
    double concentration_fraction = 0.25;
};

struct ShortenLog {
    std::vector<double> lengths;  // coarse length after each round
    int remesh_count = 0;
};

// Alternating even/odd local geodesic-replacement passes; length is
// nonincreasing round over round. Throws CollapseDetected when the curve
// shrinks below the collapse tolerance.
DiscreteCurve birkhoff_shorten(const MetricOfRevolution& g,
                               const DiscreteCurve& curve,
                               const ShortenOptions& opt, ShortenLog* log = nullptr);

struct MinmaxLogRow {
    int round = 0;
    double max_length = 0;
    double argmax_t = 0;
    int collapse_count = 0;
};

struct MinmaxResult {
    double estimate = 0;
    std::vector<MinmaxLogRow> log;
    SweepoutFamily family;
};

MinmaxResult minmax_run(const MetricOfRevolution& g, int t_curves, int n_vertices,
                        int rounds);

double minmax_estimate(const MetricOfRevolution& g, int t_curves, int n_vertices,
                       int rounds);

// Largest vertex deviation from the local two-neighbor geodesic, relative to
// segment length; small at a discrete geodesic fixed point.
double geodesic_fixed_point_residual(const MetricOfRevolution& g,
                                     const DiscreteCurve& c);

}  // namespace zoll
