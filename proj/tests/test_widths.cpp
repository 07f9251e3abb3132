#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "zoll/errors.hpp"
#include "zoll/metric.hpp"
#include "zoll/profile.hpp"
#include "zoll/widths.hpp"

using namespace zoll;

namespace {

// Independent floor-sqrt oracle: largest k with k*k <= n, by search.
std::uint64_t isqrt_oracle(std::uint64_t n) {
    std::uint64_t k = 0;
    while ((k + 1) * (k + 1) <= n) ++k;
    return k;
}

// Independent partition-count oracle by direct recursion (parts <= cap).
std::uint64_t partitions_oracle(std::uint64_t n, std::uint64_t cap) {
    if (n == 0) return 1;
    std::uint64_t total = 0;
    for (std::uint64_t part = 1; part <= cap && part <= n; ++part)
        total += partitions_oracle(n - part, part);
    return total;
}

CertRecord passing_record(const MetricOfRevolution& g) {
    CertRecord rec;
    rec.key = g.canonical_key();
    rec.n_starts = 100;
    rec.tolerance = 1e-6;
    rec.max_residual = 1e-9;
    rec.all_simple = true;
    rec.pass = true;
    return rec;
}

}  // namespace

TEST_CASE("integer square root against the search oracle") {
    for (std::uint64_t n = 0; n <= 5000; ++n)
        CHECK(isqrt_u64(n) == isqrt_oracle(n));
    for (std::uint64_t k : {100000ULL, 3037000499ULL}) {
        CHECK(isqrt_u64(k * k) == k);
        CHECK(isqrt_u64(k * k - 1) == k - 1);
        CHECK(isqrt_u64(k * k + 1) == k);
    }
}

TEST_CASE("zoll width values and the floor law") {
    CHECK(zoll_width(1) == doctest::Approx(kTwoPi).epsilon(1e-15));
    CHECK(zoll_width(3) == doctest::Approx(kTwoPi).epsilon(1e-15));
    CHECK(zoll_width(4) == doctest::Approx(2 * kTwoPi).epsilon(1e-15));
    CHECK(zoll_width(99) == doctest::Approx(9 * kTwoPi).epsilon(1e-15));
    CHECK(zoll_width(100) == doctest::Approx(10 * kTwoPi).epsilon(1e-15));

    // omega_p jumps exactly at perfect squares.
    for (std::uint64_t p = 2; p <= 10000; ++p) {
        std::uint64_t k = isqrt_oracle(p);
        CHECK(zoll_width(p) == kTwoPi * static_cast<double>(k));
        bool jumped = zoll_width(p) != zoll_width(p - 1);
        CHECK(jumped == (k * k == p));
    }
}

TEST_CASE("spectrum is gated on certification") {
    auto g = make_metric(OddProfile::scaled_cubic(0.3));
    CertificationStore store;
    CHECK_THROWS_AS(spectrum(g, 10, SpectrumMode::ExactZoll, store),
                    NotCertifiedZoll);

    store.record(passing_record(g));
    WidthSpectrum sp = spectrum(g, 8, SpectrumMode::ExactZoll, store);
    REQUIRE(sp.values.size() == 8);
    std::vector<double> expect{kTwoPi,     kTwoPi,     kTwoPi,     2 * kTwoPi,
                               2 * kTwoPi, 2 * kTwoPi, 2 * kTwoPi, 2 * kTwoPi};
    for (std::size_t i = 0; i < expect.size(); ++i) {
        CHECK(sp.values[i] == doctest::Approx(expect[i]).epsilon(1e-15));
        CHECK(sp.provenance[i] == Provenance::ExactZoll);
    }

    // A failed record does not certify.
    auto g2 = make_metric(OddProfile::scaled_cubic(0.1));
    CertRecord bad = passing_record(g2);
    bad.pass = false;
    store.record(bad);
    CHECK_THROWS_AS(spectrum(g2, 10, SpectrumMode::ExactZoll, store),
                    NotCertifiedZoll);
}

TEST_CASE("certify runs the sampler and records an artifact") {
    auto g = make_metric(OddProfile::scaled_cubic(0.2));
    CertificationStore store;
    SampleOptions opt;
    opt.n_starts = 8;
    CertRecord rec = certify(g, opt, 1e-6, store);
    CHECK(rec.pass);
    CHECK(rec.max_residual < 1e-6);
    CHECK(rec.all_simple);
    CHECK(rec.max_length_dev < 1e-6);
    CHECK(store.certified(g));
    auto back = store.lookup(g.canonical_key());
    REQUIRE(back.has_value());
    CHECK(back->max_residual == rec.max_residual);
}

TEST_CASE("certify fails the negative control") {
    auto bad = MetricOfRevolution::from_radial_factor(Poly({1.0, 0.0, 0.3}));
    CertificationStore store;
    SampleOptions opt;
    opt.n_starts = 8;
    CertRecord rec = certify(bad, opt, 1e-6, store);
    CHECK_FALSE(rec.pass);
    CHECK(rec.max_residual > 1e-3);
    CHECK_FALSE(store.certified(bad));
}

TEST_CASE("geodesic sum decomposition") {
    CHECK_THROWS_AS(geodesic_sum_decompose(7.0), NotMultipleOf2Pi);

    DecomposeResult one = geodesic_sum_decompose(kTwoPi);
    CHECK(one.n == 1);
    CHECK(one.count == 1);
    REQUIRE(one.sums.size() == 1);
    CHECK(one.sums[0].total == doctest::Approx(kTwoPi).epsilon(1e-12));

    DecomposeResult four = geodesic_sum_decompose(4 * kTwoPi);
    CHECK(four.n == 4);
    CHECK(four.count == 5);  // partitions of 4
    CHECK(four.sums.size() == 5);
    for (const auto& s : four.sums) {
        std::uint64_t total_mult = 0;
        double total_len = 0;
        for (const auto& t : s.terms) {
            CHECK(t.multiplicity >= 1);
            CHECK(std::fabs(t.length - kTwoPi) < 1e-12);
            total_mult += t.multiplicity;
            total_len += static_cast<double>(t.multiplicity) * t.length;
        }
        CHECK(total_mult == 4);
        CHECK(total_len == doctest::Approx(4 * kTwoPi).epsilon(1e-12));
    }

    for (std::uint64_t n = 1; n <= 12; ++n) {
        DecomposeResult r = geodesic_sum_decompose(static_cast<double>(n) * kTwoPi);
        CHECK(r.count == partitions_oracle(n, n));
        CHECK(r.sums.size() == r.count);
    }
    // Large n: counts only.
    DecomposeResult big = geodesic_sum_decompose(30.0 * kTwoPi);
    CHECK(big.count == partitions_oracle(30, 30));
    CHECK(big.sums.empty());
}

TEST_CASE("partition counts match the recursion oracle") {
    for (std::uint64_t n = 0; n <= 40; ++n)
        CHECK(partition_count(n) == partitions_oracle(n, n == 0 ? 1 : n));
    CHECK(partition_count(100) == 190569292ULL);
}

TEST_CASE("continuity of widths in the c0 distance") {
    auto g = make_metric(OddProfile::scaled_cubic(0.3));
    auto gp = make_metric(OddProfile::scaled_cubic(0.25));
    CertificationStore store;
    store.record(passing_record(g));
    store.record(passing_record(gp));
    for (std::uint64_t p : {1ULL, 2ULL, 10ULL, 49ULL, 100ULL}) {
        ContinuityCheck chk = continuity_check(g, gp, p, 1.0, store);
        CHECK(chk.lhs == 0.0);  // identical spectra on the component
        CHECK(chk.rhs > 0.0);
        CHECK(chk.satisfied);
        CHECK(chk.c1 > 0.0);
        CHECK(chk.c2 >= chk.c1);
    }
}

TEST_CASE("isospectral verdict flags the counterexample pair") {
    auto round = MetricOfRevolution::round();
    auto g = make_metric(OddProfile::scaled_cubic(0.3));
    CertificationStore store;
    store.record(passing_record(round));
    store.record(passing_record(g));

    Verdict v = isospectral_verdict(round, g, 50, store);
    CHECK(v.isospectral);
    CHECK(v.distinct_geometry);
    CHECK(v.counterexample);
    CHECK(v.report_g.k_max - v.report_g.k_min < 1e-6);
    CHECK(v.report_gp.k_max - v.report_gp.k_min > 0.5);

    // Same metric twice: isospectral but not distinct.
    Verdict same = isospectral_verdict(g, g, 50, store);
    CHECK(same.isospectral);
    CHECK_FALSE(same.distinct_geometry);
    CHECK_FALSE(same.counterexample);
}

TEST_CASE("store persists artifacts as json") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "zoll_store_test";
    fs::remove_all(dir);
    auto g = make_metric(OddProfile::scaled_cubic(0.15));
    {
        CertificationStore store(dir);
        store.record(passing_record(g));
    }
    CertificationStore reloaded(dir);
    CHECK(reloaded.certified(g));
    auto rec = reloaded.lookup(g.canonical_key());
    REQUIRE(rec.has_value());
    CHECK(rec->n_starts == 100);
    fs::remove_all(dir);
}
