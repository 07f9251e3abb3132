#pragma once
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zoll/flow.hpp"
#include "zoll/metric.hpp"

namespace zoll {

std::uint64_t isqrt_u64(std::uint64_t n);

// omega_p of the round sphere (and of the whole Zoll component):
// 2 pi * floor(sqrt(p)), with an exact integer square root for the floor.
double zoll_width(std::uint64_t p);

enum class Provenance { ExactZoll, GeodesicSum, MinmaxEstimate };

struct WidthSpectrum {
    std::vector<double> values;          // omega_p, p = 1..P
    std::vector<Provenance> provenance;  // per entry
};

enum class SpectrumMode { ExactZoll, MinmaxEstimate };

// Summary of a certification run; the artifact gating exact-zoll spectra.
struct CertRecord {
    std::string key;
    int n_starts = 0;
    double tolerance = 1e-6;
    double max_residual = 0;
    double max_length_dev = 0;  // max |closure_length - 2 pi|
    double max_clairaut_drift = 0;
    bool all_simple = false;
    bool pass = false;
};

// Append-only store of certification artifacts, keyed by the metric's
// canonical config string; optionally backed by a directory of JSON files.
class CertificationStore {
public:
    CertificationStore() = default;
    explicit CertificationStore(std::filesystem::path dir);

    void record(const CertRecord& rec);
    std::optional<CertRecord> lookup(const std::string& key) const;
    bool certified(const MetricOfRevolution& g) const;

private:
    std::map<std::string, CertRecord> mem_;
    std::optional<std::filesystem::path> dir_;
};

// Runs length_spectrum_sample, summarizes, records the artifact.
CertRecord certify(const MetricOfRevolution& g, const SampleOptions& opt,
                   double tolerance, CertificationStore& store);

struct MinmaxParams {
    int t_curves = 65;
    int n_vertices = 256;
    int rounds = 200;
};

WidthSpectrum spectrum(const MetricOfRevolution& g, std::uint64_t P,
                       SpectrumMode mode, const CertificationStore& store,
                       const MinmaxParams& mm = {});

struct GeodesicSum {
    struct Term {
        std::uint64_t multiplicity;
        double length;
    };
    std::vector<Term> terms;
    double total = 0;
};

struct DecomposeResult {
    std::uint64_t n = 0;                  // value / (2 pi)
    std::uint64_t count = 0;              // number of decompositions, = p(n)
    std::vector<GeodesicSum> sums;        // enumerated only for n <= 12
};

// All ways to write value = sum m_j * 2 pi with positive integer
// multiplicities, up to reordering. Throws NotMultipleOf2Pi.
DecomposeResult geodesic_sum_decompose(double value);

// Integer partition count p(n).
std::uint64_t partition_count(std::uint64_t n);

struct ContinuityCheck {
    std::uint64_t p = 0;
    double lhs = 0;     // |omega_p(g) - omega_p(g')|
    double rhs = 0;     // K * sqrt(p) * c0_distance
    double K_used = 1;
    double c1 = 0, c2 = 0;  // conformal bounds of the pair, for the record
    bool satisfied = false;
};

ContinuityCheck continuity_check(const MetricOfRevolution& g,
                                 const MetricOfRevolution& gp, std::uint64_t p,
                                 double K, const CertificationStore& store);

struct Verdict {
    bool isospectral = false;
    bool distinct_geometry = false;
    bool counterexample = false;
    CurvatureReport report_g, report_gp;
};

Verdict isospectral_verdict(const MetricOfRevolution& g,
                            const MetricOfRevolution& gp, std::uint64_t P,
                            const CertificationStore& store);

}  // namespace zoll
