#include "zoll/config.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "zoll/errors.hpp"
#include "zoll/geom.hpp"

namespace zoll {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& s) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw ConfigError("trailing characters in number: " + s);
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (...) {
        throw ConfigError("malformed number: " + s);
    }
}

std::vector<double> parse_list(std::string s) {
    s = trim(s);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw ConfigError("list must be bracketed: " + s);
    s = s.substr(1, s.size() - 2);
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(item));
    }
    if (out.empty()) out.push_back(0.0);
    return out;
}

std::string render_list(const std::vector<double>& v) {
    std::string s = "[";
    char buf[40];
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", v[i]);
        if (i) s += ", ";
        s += buf;
    }
    return s + "]";
}

std::string render_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text) {
    RunConfig cfg;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value': " + line);
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key == "coeffs")
            cfg.coeffs = parse_list(val);
        else if (key == "epsilon")
            cfg.epsilon = parse_double(val);
        else if (key == "control_even")
            cfg.control_even = parse_double(val);
        else if (key == "coeffs2") {
            cfg.coeffs2 = parse_list(val);
            cfg.has_second = true;
        } else if (key == "epsilon2") {
            cfg.epsilon2 = parse_double(val);
            cfg.has_second = true;
        } else if (key == "p_max")
            cfg.p_max = static_cast<std::uint64_t>(parse_double(val));
        else if (key == "n_starts")
            cfg.n_starts = static_cast<int>(parse_double(val));
        else if (key == "tolerance")
            cfg.tolerance = parse_double(val);
        else if (key == "seed")
            cfg.seed = static_cast<std::uint64_t>(parse_double(val));
        else if (key == "workers")
            cfg.workers = static_cast<int>(parse_double(val));
        else if (key == "out_dir")
            cfg.out_dir = val;
        else if (key == "t_curves")
            cfg.t_curves = static_cast<int>(parse_double(val));
        else if (key == "n_vertices")
            cfg.n_vertices = static_cast<int>(parse_double(val));
        else if (key == "rounds")
            cfg.rounds = static_cast<int>(parse_double(val));
        else
            throw ConfigError("unknown config key: " + key);
    }
    cfg.validate();
    return cfg;
}

std::string RunConfig::render() const {
    std::string s;
    s += "coeffs = " + render_list(coeffs) + "\n";
    s += "epsilon = " + render_double(epsilon) + "\n";
    if (control_even != 0.0)
        s += "control_even = " + render_double(control_even) + "\n";
    if (has_second) {
        s += "coeffs2 = " + render_list(coeffs2) + "\n";
        s += "epsilon2 = " + render_double(epsilon2) + "\n";
    }
    s += "p_max = " + std::to_string(p_max) + "\n";
    s += "n_starts = " + std::to_string(n_starts) + "\n";
    s += "tolerance = " + render_double(tolerance) + "\n";
    s += "seed = " + std::to_string(seed) + "\n";
    s += "workers = " + std::to_string(workers) + "\n";
    s += "out_dir = " + out_dir + "\n";
    s += "t_curves = " + std::to_string(t_curves) + "\n";
    s += "n_vertices = " + std::to_string(n_vertices) + "\n";
    s += "rounds = " + std::to_string(rounds) + "\n";
    return s;
}

void RunConfig::validate() const {
    if (p_max < 1) throw ConfigError("p_max must be >= 1");
    if (n_starts < 1) throw ConfigError("n_starts must be >= 1");
    if (!(tolerance > 0)) throw ConfigError("tolerance must be positive");
    if (workers < 0) throw ConfigError("workers must be >= 0");
    if (t_curves < 3) throw ConfigError("t_curves must be >= 3");
    if (n_vertices < 8) throw ConfigError("n_vertices must be >= 8");
    if (rounds < 1) throw ConfigError("rounds must be >= 1");
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string two_pi_annotation(double v) {
    double ratio = v / kTwoPi;
    double rounded = std::round(ratio);
    if (rounded >= 1.0 && std::fabs(ratio - rounded) <= 1e-9 * std::fabs(ratio)) {
        return "2pi*" + std::to_string(static_cast<long long>(rounded));
    }
    return "-";
}

}  // namespace zoll
