#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gmlab/exponents.hpp"
#include "gmlab/spectrum.hpp"

namespace gmlab::cli {

/// Everything a command needs. Grid-valued entries hold the expanded list.
struct ExperimentConfig {
    double p = 2.0;
    double q = 1.0;
    double r = 2.0;
    double s = 0.0;
    std::vector<double> sigma{0.0};
    std::vector<double> d1{0.01};
    std::vector<double> d2{1.0};
    std::optional<double> ratio;  // d2 = ratio * d1 when set
    std::string geometry = "interval";
    double lx = 1.0;
    double ly = 1.0;
    int nx = 201;
    int ny = 0;  // 0: same as nx
    std::uint64_t seed = 0;
    int seeds = 8;
    int workers = 0;  // 0: hardware concurrency
    std::string format;  // empty: command default
    std::string out;
    std::string input;
    std::string guess = "spike";
    bool homotopy = false;
    double rho = 1.0;
    int count = 0;  // eigenvalues for bifurcations; 0 certifies the tail

    bool operator==(const ExperimentConfig&) const = default;
};

/// Grid spec: "0.5", "0.1,0.2,0.4", "lin:a:b:n" or "log:a:b:n" (n >= 2,
/// log needs a, b > 0). ParseError on anything else.
std::vector<double> parse_grid(std::string_view spec);
std::string format_grid(const std::vector<double>& values);

/// Flat key=value text; '#' starts a comment. Keys match the long flag names.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});
std::string write_config(const ExperimentConfig& cfg);

/// Applies one key=value pair; shared by the file reader and the flag parser.
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);

ExponentSet exponents_of(const ExperimentConfig& cfg);
DomainGeometry geometry_of(const ExperimentConfig& cfg);

/// d2 values for a given d1: ratio * d1 when a ratio is set, else the d2 grid.
std::vector<double> d2_values(const ExperimentConfig& cfg, double d1);

/// Runs every module-level validation the config touches; throws gmlab::Error.
void validate(const ExperimentConfig& cfg);

}  // namespace gmlab::cli
