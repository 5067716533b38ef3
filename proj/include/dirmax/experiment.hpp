/**
 * @file experiment.hpp
 * @brief Experiment configuration and the command implementations behind
 * the CLI. Each command returns its CSV text; commands whose schema has no
 * time column also return a "row,seconds" timing table.
 */
#pragma once

#include "dirmax/verify.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace dirmax {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Sectioned key = value configuration; every field has a default.
struct ExperimentConfig {
    // [general]
    std::uint64_t seed = 1;
    int grid = 256;
    int threads = 0;
    std::string out = "results";

    // [norm]
    int rounds = 3;
    int max_iter = 60;
    double tol = 1e-6;

    // [scales] sector-split experiments
    std::vector<double> heights{0.5, 0.25, 0.125};
    std::vector<double> eccs{0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
    int offsets = 3;

    // [logn], [lacunary]
    std::vector<int> logn_counts{1, 2, 4, 8, 16, 32, 64};
    double lacunary_ratio = 0.5;
    std::vector<int> lacunary_counts{1, 2, 4, 8, 16, 32, 64};

    // [avs]
    int avs_configs = 20;
    int avs_min_directions = 4;
    int avs_max_directions = 10;
    std::vector<double> avs_heights{0.5, 0.25, 0.125};
    std::vector<double> avs_eccs{0.5, 0.25, 0.125, 0.0625};

    // [gm]
    std::vector<double> gm_delta0{0.25, 0.125, 0.0625, 0.03125, 0.015625};
    std::vector<double> gm_heights{1.0, 0.5, 0.25, 0.125};
    int gm_directions = 16;
    double slope_max = 0.1;
    int gm_samples = 1;  ///< members per family

    // [sharpness]
    std::vector<double> sharp_deltas{0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
    std::vector<double> sharp_heights{1.0, 0.5, 0.25};

    // [verify]
    std::vector<std::string> checks;  ///< empty = full catalog
    VerifyConfig verify;

    // [oracle]
    int oracle_n = 16;
    int mc_pairs = 10000;
    int mc_samples = 2000;
    int mc_samples_single = 1000000;
    int fast_n = 64;

    void validate() const;
};

ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::string& path);
std::string config_to_text(const ExperimentConfig& c);

struct CommandOutput {
    std::string csv;
    std::string timing;  ///< empty when the CSV has its own seconds column
    bool ok = true;      ///< false when a check or oracle failed
};

CommandOutput cmd_logn(const ExperimentConfig& c);
CommandOutput cmd_lacunary(const ExperimentConfig& c);
CommandOutput cmd_avs(const ExperimentConfig& c);
CommandOutput cmd_grand_maximal(const ExperimentConfig& c);
CommandOutput cmd_sharpness(const ExperimentConfig& c);
CommandOutput cmd_verify(const ExperimentConfig& c);
CommandOutput cmd_oracle(const ExperimentConfig& c);

const std::vector<std::string>& command_names();
/// Dispatch by CLI name ("logn", "lacunary", "avs", "gm", "sharpness", "verify", "oracle").
CommandOutput run_command(const std::string& name, const ExperimentConfig& c);

/// Maximum implied constant accepted from cmd_avs (1.25 x the seeding run).
double avs_regression_bound();

}  // namespace dirmax
