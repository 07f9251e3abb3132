// zollwidths: certify Zoll metrics, compute width spectra, compare metrics,
// and run the discrete min-max estimator.
//
// Exit codes: 0 success, 1 invariant/certification failure, 2 invalid config,
// 3 missing prerequisite artifact.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "zoll/config.hpp"
#include "zoll/errors.hpp"
#include "zoll/flow.hpp"
#include "zoll/metric.hpp"
#include "zoll/sweepout.hpp"
#include "zoll/widths.hpp"

namespace {

using namespace zoll;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitBadConfig = 2;
constexpr int kExitMissingArtifact = 3;

struct CliOverrides {
    std::string config_path;
    std::string profile;   // bracketed coefficient list
    std::string profile2;
    double epsilon = std::numeric_limits<double>::quiet_NaN();
    double epsilon2 = std::numeric_limits<double>::quiet_NaN();
    double control_even = std::numeric_limits<double>::quiet_NaN();
    std::int64_t p_max = -1;
    int n_starts = -1;
    double tolerance = std::numeric_limits<double>::quiet_NaN();
    std::int64_t seed = -1;
    int workers = -1;
    std::string out_dir;
    int t_curves = -1, n_vertices = -1, rounds = -1;
};

void add_common_flags(CLI::App* cmd, CliOverrides& ov) {
    cmd->add_option("--config", ov.config_path, "config file (key = value lines)");
    cmd->add_option("--profile", ov.profile, "odd monomial coefficients, e.g. [1,-1]");
    cmd->add_option("--epsilon", ov.epsilon, "uniform scaling of the profile");
    cmd->add_option("--control-even", ov.control_even,
                    "non-Zoll control: radial factor 1 + a u^2");
    cmd->add_option("--p-max", ov.p_max, "largest width index P");
    cmd->add_option("--n-starts", ov.n_starts, "certification sample size");
    cmd->add_option("--tolerance", ov.tolerance, "closure residual tolerance");
    cmd->add_option("--seed", ov.seed, "low-discrepancy sequence offset");
    cmd->add_option("--workers", ov.workers, "worker threads (0 = hardware)");
    cmd->add_option("--out-dir", ov.out_dir, "output directory");
}

// Config file first, flags win.
RunConfig resolve(const CliOverrides& ov) {
    RunConfig cfg;
    if (!ov.config_path.empty()) {
        std::ifstream in(ov.config_path);
        if (!in) throw ConfigError("cannot open config file: " + ov.config_path);
        std::stringstream ss;
        ss << in.rdbuf();
        cfg = RunConfig::parse(ss.str());
    }
    auto parse_coeff_list = [](const std::string& s) {
        RunConfig tmp = RunConfig::parse("coeffs = " + s + "\n");
        return tmp.coeffs;
    };
    if (!ov.profile.empty()) cfg.coeffs = parse_coeff_list(ov.profile);
    if (!ov.profile2.empty()) {
        cfg.coeffs2 = parse_coeff_list(ov.profile2);
        cfg.has_second = true;
    }
    if (!std::isnan(ov.epsilon)) cfg.epsilon = ov.epsilon;
    if (!std::isnan(ov.epsilon2)) {
        cfg.epsilon2 = ov.epsilon2;
        cfg.has_second = true;
    }
    if (!std::isnan(ov.control_even)) cfg.control_even = ov.control_even;
    if (ov.p_max >= 0) cfg.p_max = static_cast<std::uint64_t>(ov.p_max);
    if (ov.n_starts >= 0) cfg.n_starts = ov.n_starts;
    if (!std::isnan(ov.tolerance)) cfg.tolerance = ov.tolerance;
    if (ov.seed >= 0) cfg.seed = static_cast<std::uint64_t>(ov.seed);
    if (ov.workers >= 0) cfg.workers = ov.workers;
    if (!ov.out_dir.empty()) cfg.out_dir = ov.out_dir;
    if (ov.t_curves > 0) cfg.t_curves = ov.t_curves;
    if (ov.n_vertices > 0) cfg.n_vertices = ov.n_vertices;
    if (ov.rounds > 0) cfg.rounds = ov.rounds;
    cfg.validate();
    return cfg;
}

MetricOfRevolution primary_metric(const RunConfig& cfg) {
    if (cfg.control_even != 0.0)
        return MetricOfRevolution::from_radial_factor(
            Poly({1.0, 0.0, cfg.control_even}));
    std::vector<double> scaled = cfg.coeffs;
    for (double& c : scaled) c *= cfg.epsilon;
    return make_metric(OddProfile(std::move(scaled)));
}

MetricOfRevolution second_metric(const RunConfig& cfg) {
    std::vector<double> scaled = cfg.coeffs2;
    for (double& c : scaled) c *= cfg.epsilon2;
    return make_metric(OddProfile(std::move(scaled)));
}

std::string short_key(const MetricOfRevolution& m) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : m.canonical_key()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%012llx",
                  static_cast<unsigned long long>(h & 0xffffffffffffull));
    return buf;
}

SampleOptions sample_options(const RunConfig& cfg) {
    SampleOptions sopt;
    sopt.n_starts = cfg.n_starts;
    sopt.seed = cfg.seed;
    sopt.workers = cfg.workers;
    return sopt;
}

CertRecord run_certify(const MetricOfRevolution& metric, const RunConfig& cfg,
                       CertificationStore& store, bool write_reports) {
    auto certs = length_spectrum_sample(metric, sample_options(cfg));

    CertRecord rec;
    rec.key = metric.canonical_key();
    rec.n_starts = cfg.n_starts;
    rec.tolerance = cfg.tolerance;
    rec.all_simple = true;
    int worst_index = -1;
    for (std::size_t i = 0; i < certs.size(); ++i) {
        const auto& c = certs[i];
        if (c.residual_at_2pi > rec.max_residual) {
            rec.max_residual = c.residual_at_2pi;
            worst_index = static_cast<int>(i);
        }
        rec.max_length_dev =
            std::max(rec.max_length_dev, std::fabs(c.closure_length - kTwoPi));
        rec.max_clairaut_drift = std::max(rec.max_clairaut_drift, c.clairaut_drift);
        rec.all_simple = rec.all_simple && c.simple;
    }
    rec.pass = rec.max_residual < cfg.tolerance && rec.all_simple;
    store.record(rec);

    if (write_reports) {
        std::filesystem::create_directories(cfg.out_dir);
        std::ofstream csv(std::filesystem::path(cfg.out_dir) /
                          ("certify_" + short_key(metric) + ".csv"));
        csv << "start_index,theta0,phi0,direction,closure_length,residual,simple,"
               "clairaut_drift\n";
        for (std::size_t i = 0; i < certs.size(); ++i) {
            StartTriple t = halton_triple(cfg.seed + i + 1);
            const auto& c = certs[i];
            csv << i << "," << format_number(t.theta) << ","
                << format_number(t.phi) << "," << format_number(t.beta) << ","
                << format_number(c.closure_length) << ","
                << format_number(c.residual_at_2pi) << "," << (c.simple ? 1 : 0)
                << "," << format_number(c.clairaut_drift) << "\n";
        }

        // Plot data for the first few trajectories: (s, theta, phi) triples.
        std::ofstream plot(std::filesystem::path(cfg.out_dir) /
                           ("trace_" + short_key(metric) + ".txt"));
        for (std::uint64_t i = 0; i < std::min<std::uint64_t>(3, certs.size());
             ++i) {
            PhasePoint start = halton_start(metric, cfg.seed + i + 1);
            FlowOptions dense;
            dense.max_step = 0.05;
            try {
                GeodesicTrace tr = trace_geodesic(metric, start, kTwoPi, dense);
                for (const auto& s : tr.samples)
                    plot << format_number(s.s) << " " << format_number(s.state.theta)
                         << " " << format_number(s.state.phi) << "\n";
            } catch (const StepUnderflow&) {
            }
            plot << "\n";
        }
    }

    std::printf("certify %s: n_starts=%d max_residual=%s max_length_dev=%s "
                "all_simple=%d pass=%d\n",
                short_key(metric).c_str(), cfg.n_starts,
                format_number(rec.max_residual).c_str(),
                format_number(rec.max_length_dev).c_str(), rec.all_simple,
                rec.pass);
    if (!rec.pass)
        std::printf("failure: worst_residual=%s failing_start_index=%d\n",
                    format_number(rec.max_residual).c_str(), worst_index);
    return rec;
}

int cmd_certify(const RunConfig& cfg) {
    MetricOfRevolution metric = primary_metric(cfg);
    CertificationStore store(std::filesystem::path(cfg.out_dir) / "certs");
    CertRecord rec = run_certify(metric, cfg, store, true);
    return rec.pass ? kExitOk : kExitFailure;
}

int cmd_spectrum(const RunConfig& cfg) {
    MetricOfRevolution metric = primary_metric(cfg);
    CertificationStore store(std::filesystem::path(cfg.out_dir) / "certs");
    WidthSpectrum sp;
    try {
        sp = spectrum(metric, cfg.p_max, SpectrumMode::ExactZoll, store);
    } catch (const NotCertifiedZoll& e) {
        std::printf("error: %s\nhint: run `zollwidths certify` with the same "
                    "profile and out-dir first\n",
                    e.what());
        return kExitMissingArtifact;
    }
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream csv(std::filesystem::path(cfg.out_dir) /
                      ("spectrum_" + short_key(metric) + ".csv"));
    csv << "p,omega_p,omega_p_over_2pi,provenance\n";
    for (std::uint64_t p = 1; p <= cfg.p_max; ++p) {
        csv << p << "," << format_number(sp.values[p - 1]) << ","
            << format_number(sp.values[p - 1] / kTwoPi) << ",exact-zoll\n";
    }
    std::printf("spectrum %s: P=%llu omega_P=%s (%s)\n", short_key(metric).c_str(),
                static_cast<unsigned long long>(cfg.p_max),
                format_number(sp.values[cfg.p_max - 1]).c_str(),
                two_pi_annotation(sp.values[cfg.p_max - 1]).c_str());
    return kExitOk;
}

int cmd_compare(const RunConfig& cfg) {
    if (!cfg.has_second) throw ConfigError("compare needs a second metric");
    MetricOfRevolution a = primary_metric(cfg);
    MetricOfRevolution b = second_metric(cfg);
    CertificationStore store(std::filesystem::path(cfg.out_dir) / "certs");

    for (const auto* m : {&a, &b}) {
        if (!store.certified(*m)) {
            CertRecord rec = run_certify(*m, cfg, store, false);
            if (!rec.pass) {
                std::printf("certification failed for metric %s\n",
                            short_key(*m).c_str());
                return kExitFailure;
            }
        }
    }

    Verdict v = isospectral_verdict(a, b, cfg.p_max, store);
    double worst_rhs = 0;
    bool battery_ok = true;
    for (std::uint64_t p = 1; p <= cfg.p_max; ++p) {
        ContinuityCheck chk = continuity_check(a, b, p, 1.0, store);
        battery_ok = battery_ok && chk.satisfied && chk.lhs == 0.0;
        worst_rhs = std::max(worst_rhs, chk.rhs);
    }
    std::printf("isospectral (p <= %llu): %s\n",
                static_cast<unsigned long long>(cfg.p_max),
                v.isospectral ? "yes" : "no");
    std::printf("K range: [%s, %s] vs [%s, %s]\n",
                format_number(v.report_g.k_min).c_str(),
                format_number(v.report_g.k_max).c_str(),
                format_number(v.report_gp.k_min).c_str(),
                format_number(v.report_gp.k_max).c_str());
    std::printf("continuity battery: lhs = 0 for all p, max rhs = %s, %s\n",
                format_number(worst_rhs).c_str(),
                battery_ok ? "satisfied" : "VIOLATED");
    if (v.counterexample)
        std::printf("ISOSPECTRAL, NOT ISOMETRIC: counterexample reproduced\n");
    else if (v.isospectral)
        std::printf("isospectral, geometrically indistinguishable at tolerance\n");
    else
        std::printf("spectra differ\n");
    return battery_ok ? kExitOk : kExitFailure;
}

int cmd_minmax(const RunConfig& cfg) {
    MetricOfRevolution metric = primary_metric(cfg);
    CertificationStore store(std::filesystem::path(cfg.out_dir) / "certs");
    MinmaxResult res = minmax_run(metric, cfg.t_curves, cfg.n_vertices, cfg.rounds);

    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream csv(std::filesystem::path(cfg.out_dir) /
                      ("minmax_" + short_key(metric) + ".csv"));
    csv << "round,max_length,argmax_t,collapse_count\n";
    for (const auto& row : res.log)
        csv << row.round << "," << format_number(row.max_length) << ","
            << format_number(row.argmax_t) << "," << row.collapse_count << "\n";

    std::printf("minmax estimate: %s (%s)\n", format_number(res.estimate).c_str(),
                two_pi_annotation(res.estimate).c_str());
    if (store.certified(metric)) {
        double rel = std::fabs(res.estimate - kTwoPi) / kTwoPi;
        std::printf("certified Zoll metric: relative error vs 2pi = %s\n",
                    format_number(rel).c_str());
    }
    return kExitOk;
}

int cmd_report(const RunConfig& cfg) {
    MetricOfRevolution metric = primary_metric(cfg);
    ReportOptions ropt;
    ropt.with_diameter = true;
    CurvatureReport rep = curvature_report(metric, ropt);

    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream csv(std::filesystem::path(cfg.out_dir) /
                      ("report_" + short_key(metric) + ".csv"));
    csv << "k_min,k_max,total_curvature,area,diameter_estimate,diameter_method\n";
    csv << format_number(rep.k_min) << "," << format_number(rep.k_max) << ","
        << format_number(rep.total_curvature) << "," << format_number(rep.area)
        << "," << format_number(rep.diameter_estimate) << ","
        << rep.diameter_method << "\n";

    std::printf("curvature report for %s\n", short_key(metric).c_str());
    std::printf("  K range:        [%s, %s]\n", format_number(rep.k_min).c_str(),
                format_number(rep.k_max).c_str());
    std::printf("  total curvature: %s (4pi = %s)\n",
                format_number(rep.total_curvature).c_str(),
                format_number(4.0 * kPi).c_str());
    std::printf("  area:            %s\n", format_number(rep.area).c_str());
    std::printf("  diameter:        %s (%s)\n",
                format_number(rep.diameter_estimate).c_str(),
                rep.diameter_method.c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"width-isospectral Zoll metric laboratory"};
    app.require_subcommand(1);

    CliOverrides ov;
    auto* certify_cmd = app.add_subcommand("certify", "certify the Zoll property");
    auto* spectrum_cmd = app.add_subcommand("spectrum", "exact width spectrum");
    auto* compare_cmd = app.add_subcommand("compare", "isospectrality verdict");
    auto* minmax_cmd = app.add_subcommand("minmax", "discrete 1-width estimate");
    auto* report_cmd = app.add_subcommand("report", "curvature report");
    for (auto* cmd : {certify_cmd, spectrum_cmd, compare_cmd, minmax_cmd, report_cmd})
        add_common_flags(cmd, ov);
    compare_cmd->add_option("--profile2", ov.profile2, "second metric profile");
    compare_cmd->add_option("--epsilon2", ov.epsilon2, "second metric scaling");
    minmax_cmd->add_option("--t-curves", ov.t_curves, "sweepout family size");
    minmax_cmd->add_option("--n-vertices", ov.n_vertices, "vertices per curve");
    minmax_cmd->add_option("--rounds", ov.rounds, "shortening rounds");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = resolve(ov);
        if (certify_cmd->parsed()) return cmd_certify(cfg);
        if (spectrum_cmd->parsed()) return cmd_spectrum(cfg);
        if (compare_cmd->parsed()) return cmd_compare(cfg);
        if (minmax_cmd->parsed()) return cmd_minmax(cfg);
        if (report_cmd->parsed()) return cmd_report(cfg);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitBadConfig;
    } catch (const ProfileInvalid& e) {
        std::fprintf(stderr, "invalid profile: %s\n", e.what());
        return kExitBadConfig;
    } catch (const NotCertifiedZoll& e) {
        std::fprintf(stderr, "missing artifact: %s\n", e.what());
        return kExitMissingArtifact;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFailure;
    }
    return kExitOk;
}
