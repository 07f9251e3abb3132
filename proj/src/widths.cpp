#include "zoll/widths.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"
#include "zoll/errors.hpp"
#include "zoll/geom.hpp"
#include "zoll/sweepout.hpp"

namespace zoll {

std::uint64_t isqrt_u64(std::uint64_t n) {
    if (n == 0) return 0;
    std::uint64_t x = n, y = (x + 1) / 2;
    while (y < x) {
        x = y;
        y = (x + n / x) / 2;
    }
    return x;
}

double zoll_width(std::uint64_t p) {
    if (p < 1) throw Error("zoll_width: p >= 1 required");
    return kTwoPi * static_cast<double>(isqrt_u64(p));
}

// ---------------------------------------------------------------------------
// Certification store.
// ---------------------------------------------------------------------------

namespace {

std::string key_filename(const std::string& key) {
    // FNV-1a over the canonical key keeps filenames short and stable.
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : key) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf) + ".json";
}

nlohmann::json to_json(const CertRecord& r) {
    return {{"key", r.key},
            {"n_starts", r.n_starts},
            {"tolerance", r.tolerance},
            {"max_residual", r.max_residual},
            {"max_length_dev", r.max_length_dev},
            {"max_clairaut_drift", r.max_clairaut_drift},
            {"all_simple", r.all_simple},
            {"pass", r.pass}};
}

CertRecord from_json(const nlohmann::json& j) {
    CertRecord r;
    r.key = j.at("key").get<std::string>();
    r.n_starts = j.at("n_starts").get<int>();
    r.tolerance = j.at("tolerance").get<double>();
    r.max_residual = j.at("max_residual").get<double>();
    r.max_length_dev = j.at("max_length_dev").get<double>();
    r.max_clairaut_drift = j.at("max_clairaut_drift").get<double>();
    r.all_simple = j.at("all_simple").get<bool>();
    r.pass = j.at("pass").get<bool>();
    return r;
}

}  // namespace

CertificationStore::CertificationStore(std::filesystem::path dir)
    : dir_(std::move(dir)) {
    std::filesystem::create_directories(*dir_);
    for (const auto& entry : std::filesystem::directory_iterator(*dir_)) {
        if (entry.path().extension() != ".json") continue;
        std::ifstream in(entry.path());
        if (!in) continue;
        try {
            nlohmann::json j;
            in >> j;
            CertRecord r = from_json(j);
            mem_[r.key] = r;
        } catch (...) {
            // Unreadable artifact: ignore, certification can be rerun.
        }
    }
}

void CertificationStore::record(const CertRecord& rec) {
    mem_[rec.key] = rec;
    if (dir_) {
        std::ofstream out(*dir_ / key_filename(rec.key));
        out << to_json(rec).dump(2) << "\n";
    }
}

std::optional<CertRecord> CertificationStore::lookup(const std::string& key) const {
    auto it = mem_.find(key);
    if (it == mem_.end()) return std::nullopt;
    return it->second;
}

bool CertificationStore::certified(const MetricOfRevolution& g) const {
    auto rec = lookup(g.canonical_key());
    return rec && rec->pass;
}

CertRecord certify(const MetricOfRevolution& g, const SampleOptions& opt,
                   double tolerance, CertificationStore& store) {
    auto certs = length_spectrum_sample(g, opt);
    CertRecord rec;
    rec.key = g.canonical_key();
    rec.n_starts = opt.n_starts;
    rec.tolerance = tolerance;
    rec.all_simple = true;
    for (const auto& c : certs) {
        rec.max_residual = std::max(rec.max_residual, c.residual_at_2pi);
        rec.max_length_dev =
            std::max(rec.max_length_dev, std::fabs(c.closure_length - kTwoPi));
        rec.max_clairaut_drift = std::max(rec.max_clairaut_drift, c.clairaut_drift);
        rec.all_simple = rec.all_simple && c.simple;
    }
    rec.pass = rec.max_residual < tolerance && rec.all_simple;
    store.record(rec);
    return rec;
}

WidthSpectrum spectrum(const MetricOfRevolution& g, std::uint64_t P,
                       SpectrumMode mode, const CertificationStore& store,
                       const MinmaxParams& mm) {
    if (P < 1) throw Error("spectrum: P >= 1 required");
    WidthSpectrum sp;
    if (mode == SpectrumMode::ExactZoll) {
        if (!store.certified(g))
            throw NotCertifiedZoll(
                "exact-zoll spectrum requires a passing certification run; run "
                "the geodesic-flow certification first");
        sp.values.reserve(P);
        for (std::uint64_t p = 1; p <= P; ++p) {
            sp.values.push_back(zoll_width(p));
            sp.provenance.push_back(Provenance::ExactZoll);
        }
        return sp;
    }
    if (P != 1)
        throw Error("minmax-estimate mode supports P = 1 only");
    sp.values.push_back(minmax_estimate(g, mm.t_curves, mm.n_vertices, mm.rounds));
    sp.provenance.push_back(Provenance::MinmaxEstimate);
    return sp;
}

std::uint64_t partition_count(std::uint64_t n) {
    // Euler's pentagonal number recurrence.
    std::vector<std::uint64_t> p(n + 1, 0);
    p[0] = 1;
    for (std::uint64_t i = 1; i <= n; ++i) {
        std::uint64_t acc = 0;
        for (std::uint64_t k = 1;; ++k) {
            std::uint64_t g1 = k * (3 * k - 1) / 2;
            std::uint64_t g2 = k * (3 * k + 1) / 2;
            if (g1 > i && g2 > i) break;
            std::uint64_t term = 0;
            if (g1 <= i) term += p[i - g1];
            if (g2 <= i) term += p[i - g2];
            if (k % 2 == 1)
                acc += term;
            else
                acc -= term;
        }
        p[i] = acc;
    }
    return p[n];
}

namespace {

void enumerate_partitions(std::uint64_t n, std::uint64_t max_part,
                          std::vector<std::uint64_t>& cur,
                          std::vector<std::vector<std::uint64_t>>& out) {
    if (n == 0) {
        out.push_back(cur);
        return;
    }
    for (std::uint64_t part = std::min(n, max_part); part >= 1; --part) {
        cur.push_back(part);
        enumerate_partitions(n - part, part, cur, out);
        cur.pop_back();
    }
}

}  // namespace

DecomposeResult geodesic_sum_decompose(double value) {
    if (!(value > 0)) throw Error("geodesic_sum_decompose: value must be positive");
    double ratio = value / kTwoPi;
    double rounded = std::round(ratio);
    if (rounded < 1.0 || std::fabs(ratio - rounded) > 1e-9 * std::fabs(ratio))
        throw NotMultipleOf2Pi(
            "value is not an integer multiple of 2 pi within tolerance");
    DecomposeResult res;
    res.n = static_cast<std::uint64_t>(rounded);
    res.count = partition_count(res.n);
    if (res.n <= 12) {
        std::vector<std::vector<std::uint64_t>> parts;
        std::vector<std::uint64_t> cur;
        enumerate_partitions(res.n, res.n, cur, parts);
        for (const auto& pt : parts) {
            GeodesicSum gs;
            for (std::uint64_t m : pt) {
                gs.terms.push_back({m, kTwoPi});
                gs.total += static_cast<double>(m) * kTwoPi;
            }
            res.sums.push_back(std::move(gs));
        }
    }
    return res;
}

ContinuityCheck continuity_check(const MetricOfRevolution& g,
                                 const MetricOfRevolution& gp, std::uint64_t p,
                                 double K, const CertificationStore& store) {
    if (!(K > 0)) throw Error("continuity_check: K must be positive");
    if (!store.certified(g) || !store.certified(gp))
        throw NotCertifiedZoll("continuity_check requires certified Zoll metrics");
    ContinuityCheck chk;
    chk.p = p;
    chk.K_used = K;
    chk.lhs = std::fabs(zoll_width(p) - zoll_width(p));
    double dist = c0_distance(g, gp);
    chk.rhs = K * std::sqrt(static_cast<double>(p)) * dist;
    auto [c1g, c2g] = conformal_bounds(g);
    auto [c1p, c2p] = conformal_bounds(gp);
    chk.c1 = std::min(c1g, c1p);
    chk.c2 = std::max(c2g, c2p);
    chk.satisfied = chk.lhs <= chk.rhs + 1e-15;
    return chk;
}

Verdict isospectral_verdict(const MetricOfRevolution& g,
                            const MetricOfRevolution& gp, std::uint64_t P,
                            const CertificationStore& store) {
    WidthSpectrum sa = spectrum(g, P, SpectrumMode::ExactZoll, store);
    WidthSpectrum sb = spectrum(gp, P, SpectrumMode::ExactZoll, store);
    Verdict v;
    v.isospectral = true;
    for (std::uint64_t i = 0; i < P; ++i) {
        if (std::fabs(sa.values[i] - sb.values[i]) > 1e-12 * sa.values[i]) {
            v.isospectral = false;
            break;
        }
    }
    ReportOptions ropt;
    ropt.with_diameter = false;
    v.report_g = curvature_report(g, ropt);
    v.report_gp = curvature_report(gp, ropt);
    const double tol = 1e-4;
    v.distinct_geometry =
        std::fabs(v.report_g.k_min - v.report_gp.k_min) > tol ||
        std::fabs(v.report_g.k_max - v.report_gp.k_max) > tol;
    v.counterexample = v.isospectral && v.distinct_geometry;
    return v;
}

}  // namespace zoll
