#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace zoll {

// Plain-text key-value run configuration shared by all CLI subcommands.
struct RunConfig {
    std::vector<double> coeffs{0.0};  // odd monomial coefficients
    double epsilon = 1.0;             // uniform scaling applied to coeffs
    double control_even = 0.0;        // a != 0: radial factor 1 + a u^2 instead

    // Second metric, for compare runs.
    bool has_second = false;
    std::vector<double> coeffs2{0.0};
    double epsilon2 = 1.0;

    std::uint64_t p_max = 100;
    int n_starts = 100;
    double tolerance = 1e-6;
    std::uint64_t seed = 0;
    int workers = 0;
    std::string out_dir = "out";

    // Sweepout parameters.
    int t_curves = 65;
    int n_vertices = 256;
    int rounds = 200;

    // Throws ConfigError on malformed text or invalid values.
    static RunConfig parse(const std::string& text);
    std::string render() const;

    void validate() const;  // throws ConfigError

    bool operator==(const RunConfig&) const = default;
};

// 12 significant digits, the numeric format of all reports.
std::string format_number(double v);

// "2pi*k" annotation when v is an integer multiple of 2*pi, else "-".
std::string two_pi_annotation(double v);

}  // namespace zoll
