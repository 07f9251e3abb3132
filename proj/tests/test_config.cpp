#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "zoll/config.hpp"
#include "zoll/errors.hpp"
#include "zoll/geom.hpp"

using namespace zoll;

TEST_CASE("config round-trips through render/parse") {
    RunConfig c;
    c.coeffs = {0.1, -0.30000000000000004, 0.2};
    c.epsilon = 0.3;
    c.p_max = 250;
    c.n_starts = 17;
    c.tolerance = 2.5e-7;
    c.seed = 42;
    c.workers = 3;
    c.out_dir = "artifacts";
    c.t_curves = 33;
    c.n_vertices = 128;
    c.rounds = 77;
    CHECK(RunConfig::parse(c.render()) == c);

    RunConfig two = c;
    two.has_second = true;
    two.coeffs2 = {1.0, -1.0};
    two.epsilon2 = 0.125;
    CHECK(RunConfig::parse(two.render()) == two);

    RunConfig ctrl = c;
    ctrl.control_even = 0.3;
    CHECK(RunConfig::parse(ctrl.render()) == ctrl);
}

TEST_CASE("config parsing accepts comments and whitespace") {
    RunConfig c = RunConfig::parse(
        "# a comment\n"
        "coeffs = [1, -1]   # inline comment\n"
        "\n"
        "  epsilon = 0.2\n"
        "p_max = 10\n");
    CHECK(c.coeffs == std::vector<double>{1.0, -1.0});
    CHECK(c.epsilon == 0.2);
    CHECK(c.p_max == 10);
    CHECK(c.n_starts == 100);  // default preserved
}

TEST_CASE("config rejects malformed input") {
    CHECK_THROWS_AS(RunConfig::parse("nonsense\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::parse("unknown_key = 1\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::parse("epsilon = abc\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::parse("coeffs = 1, -1\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::parse("p_max = 0\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::parse("tolerance = -1\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::parse("t_curves = 2\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::parse("n_vertices = 4\n"), ConfigError);
}

TEST_CASE("report number formatting") {
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(kTwoPi) == "6.28318530718");
    CHECK(two_pi_annotation(kTwoPi) == "2pi*1");
    CHECK(two_pi_annotation(3.0 * kTwoPi) == "2pi*3");
    CHECK(two_pi_annotation(kTwoPi * (1.0 + 1e-12)) == "2pi*1");
    CHECK(two_pi_annotation(7.0) == "-");
    CHECK(two_pi_annotation(0.5 * kTwoPi) == "-");
}
