// Acceptance suite: one pass/fail line per criterion, exercised end to end
// against the library (the CLI has its own black-box tests).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <vector>

#include "doctest.h"
#include "zoll/errors.hpp"
#include "zoll/flow.hpp"
#include "zoll/metric.hpp"
#include "zoll/profile.hpp"
#include "zoll/sweepout.hpp"
#include "zoll/widths.hpp"

using namespace zoll;

namespace {

// K_max - K_min of the epsilon = 0.3 profile, measured by the curvature
// report at first build and frozen as a regression floor.
constexpr double kCurvatureGapFloor = 1.19;

void criterion(const char* name, bool ok) {
    std::printf("%-34s %s\n", name, ok ? "PASS" : "FAIL");
    CHECK_MESSAGE(ok, name);
}

std::uint64_t isqrt_oracle(std::uint64_t n) {
    std::uint64_t k = 0;
    while ((k + 1) * (k + 1) <= n) ++k;
    return k;
}

std::uint64_t partitions_oracle(std::uint64_t n, std::uint64_t cap) {
    if (n == 0) return 1;
    std::uint64_t total = 0;
    for (std::uint64_t part = 1; part <= cap && part <= n; ++part)
        total += partitions_oracle(n - part, part);
    return total;
}

CertRecord certify_profile(double eps, int n_starts, CertificationStore& store) {
    auto g = make_metric(OddProfile::scaled_cubic(eps));
    SampleOptions opt;
    opt.n_starts = n_starts;
    return certify(g, opt, 1e-6, store);
}

}  // namespace

TEST_CASE("acceptance") {
    CertificationStore store;

    // --- Round-sphere width table, p = 1..100, exact floor factor. ---
    {
        auto t0 = std::chrono::steady_clock::now();
        store.record([] {
            CertRecord rec;
            rec.key = MetricOfRevolution::round().canonical_key();
            rec.pass = true;
            rec.all_simple = true;
            return rec;
        }());
        WidthSpectrum sp =
            spectrum(MetricOfRevolution::round(), 100, SpectrumMode::ExactZoll, store);
        bool ok = sp.values.size() == 100;
        for (std::uint64_t p = 1; p <= 100 && ok; ++p) {
            double expect = kTwoPi * static_cast<double>(isqrt_oracle(p));
            ok = std::fabs(sp.values[p - 1] - expect) <= 1e-12 * expect &&
                 sp.values[p - 1] / kTwoPi ==
                     static_cast<double>(isqrt_oracle(p));  // exact floor factor
        }
        double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
        criterion("round width table p<=100", ok && ms < 1000.0);
    }

    // --- Zoll certification for eps in {0.1, 0.2, 0.3}, 100 starts each. ---
    {
        bool ok = true;
        for (double eps : {0.1, 0.2, 0.3}) {
            CertRecord rec = certify_profile(eps, 100, store);
            ok = ok && rec.pass && rec.max_residual < 1e-6 && rec.all_simple;
        }
        criterion("zoll certification 3 profiles", ok);
    }

    // --- Negative control: even perturbation of comparable size. ---
    {
        auto bad = MetricOfRevolution::from_radial_factor(Poly({1.0, 0.0, 0.3}));
        SampleOptions opt;
        opt.n_starts = 20;
        double worst = 0;
        for (const auto& c : length_spectrum_sample(bad, opt))
            worst = std::max(worst, c.residual_at_2pi);
        criterion("negative control", worst > 1e-3);
    }

    // --- Counterexample: round vs eps = 0.3, spectra equal, geometry not. ---
    {
        auto round = MetricOfRevolution::round();
        auto g = make_metric(OddProfile::scaled_cubic(0.3));
        Verdict v = isospectral_verdict(round, g, 100, store);
        bool spectra_equal = v.isospectral;
        bool round_constant = std::fabs(v.report_g.k_min - 1.0) < 1e-6 &&
                              std::fabs(v.report_g.k_max - 1.0) < 1e-6;
        bool gap = (v.report_gp.k_max - v.report_gp.k_min) > kCurvatureGapFloor;
        criterion("counterexample reproduction",
                  spectra_equal && round_constant && gap && v.counterexample);
    }

    // --- Path constancy: 32-step path eps 0 -> 0.3. ---
    {
        bool ok = true;
        std::vector<double> base;
        for (int step = 0; step < 32 && ok; ++step) {
            double eps = 0.3 * step / 31.0;
            auto g = make_metric(OddProfile::scaled_cubic(eps));
            SampleOptions opt;
            opt.n_starts = 16;
            CertRecord rec = certify(g, opt, 1e-6, store);
            ok = rec.pass;
            if (!ok) break;
            WidthSpectrum sp = spectrum(g, 50, SpectrumMode::ExactZoll, store);
            if (step == 0)
                base = sp.values;
            else
                for (std::size_t i = 0; i < base.size(); ++i)
                    ok = ok && sp.values[i] == base[i];
        }
        criterion("path constancy 32 steps", ok);
    }

    // --- Continuity battery over all certified pairs, p <= 100, K = 1. ---
    {
        std::vector<MetricOfRevolution> certified{
            MetricOfRevolution::round(),
            make_metric(OddProfile::scaled_cubic(0.1)),
            make_metric(OddProfile::scaled_cubic(0.2)),
            make_metric(OddProfile::scaled_cubic(0.3))};
        bool ok = true;
        for (std::size_t i = 0; i < certified.size() && ok; ++i)
            for (std::size_t j = i + 1; j < certified.size() && ok; ++j) {
                double d = c0_distance(certified[i], certified[j]);
                ok = d > 0.0;  // profiles differ
                for (std::uint64_t p : {1ULL, 10ULL, 50ULL, 100ULL}) {
                    ContinuityCheck chk =
                        continuity_check(certified[i], certified[j], p, 1.0, store);
                    ok = ok && chk.satisfied && chk.lhs == 0.0;
                }
            }
        criterion("continuity bound battery", ok);
    }

    // --- Geometric invariant suite. ---
    {
        bool ok = true;
        std::mt19937_64 rng(2026);
        std::uniform_real_distribution<double> dist(-0.12, 0.12);
        ReportOptions ropt;
        ropt.with_diameter = false;
        for (int trial = 0; trial < 20 && ok; ++trial) {
            std::vector<double> c(4);
            double sum = 0;
            for (std::size_t i = 0; i + 1 < c.size(); ++i) {
                c[i] = dist(rng);
                sum += c[i];
            }
            c.back() = -sum;
            auto m = make_metric(OddProfile(c));
            CurvatureReport rep = curvature_report(m, ropt);
            ok = std::fabs(rep.total_curvature - 4.0 * kPi) < 1e-6;
        }

        auto g = make_metric(OddProfile::scaled_cubic(0.3));
        for (double beta : {0.4, 1.0, 2.0}) {
            PhasePoint start = unit_covector(g, 1.2, 0.3, beta);
            GeodesicTrace tr = trace_geodesic(g, start, kTwoPi);
            ok = ok && tr.clairaut_drift / tr.total_length < 1e-8;

            PhasePoint end = tr.samples.back().state;
            PhasePoint back{end.theta, end.phi, -end.p_theta, -end.p_phi};
            PhasePoint again = trace_geodesic(g, back, kTwoPi).samples.back().state;
            PhasePoint flipped{again.theta, again.phi, -again.p_theta, -again.p_phi};
            ok = ok && phase_distance(g, start, flipped) < 1e-6;

            PhasePoint rot = start;
            rot.phi += 0.9;
            PhasePoint er = trace_geodesic(g, rot, kTwoPi).samples.back().state;
            ok = ok && std::fabs(er.theta - end.theta) < 1e-8 &&
                 std::fabs(std::remainder(er.phi - end.phi - 0.9, kTwoPi)) < 1e-8;
        }
        criterion("geometric invariant suite", ok);
    }

    // --- Min-max cross-check at full parameters. ---
    {
        bool ok = true;
        for (double eps : {0.0, 0.3}) {
            auto g = make_metric(OddProfile::scaled_cubic(eps));
            MinmaxResult r = minmax_run(g, 65, 256, 200);
            ok = ok && std::fabs(r.estimate - kTwoPi) / kTwoPi < 0.02;
            for (std::size_t i = 1; i < r.log.size(); ++i)
                ok = ok && r.log[i].max_length <= r.log[i - 1].max_length + 1e-9;
        }
        criterion("minmax cross-check", ok);
    }

    // --- Partition oracle. ---
    {
        bool ok = true;
        for (std::uint64_t n = 1; n <= 12 && ok; ++n) {
            DecomposeResult r =
                geodesic_sum_decompose(static_cast<double>(n) * kTwoPi);
            ok = r.count == partitions_oracle(n, n) && r.sums.size() == r.count;
        }
        criterion("partition oracle", ok);
    }

    // --- Spectrum scales to p = 10^6 in well under a second. ---
    {
        auto t0 = std::chrono::steady_clock::now();
        double last = 0;
        for (std::uint64_t p = 999000; p <= 1000000; ++p) last = zoll_width(p);
        bool value_ok = last == kTwoPi * 1000.0;
        double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
        criterion("large-p integer path", value_ok && ms < 1000.0);
    }
}
