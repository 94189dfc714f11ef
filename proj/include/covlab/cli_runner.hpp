#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "covlab/measures.hpp"

namespace covlab {

// Parsed and validated experiment configuration.  Every numeric field is
// checked against the module preconditions before any work starts.
struct ExperimentConfig {
    // model
    std::string model_name = "uniform";  // uniform | cantor | bernoulli | example | empirical
    int dim = 1;
    double lambda = 1.0 / 6.0;
    double beta = 1.3;
    int k_max = 40;
    std::vector<double> empirical_points;

    // cover block
    std::string schedule = "power";  // power | halfpower | explicit
    double alpha = 2.0;
    std::vector<double> radii;
    long n_max = 8192;
    int j_min = 4;
    int j_max = 12;

    // spectra block
    int level_lo = 6;
    int level_hi = 12;
    double s_min = 0.0;
    double s_max = 1.5;
    double s_step = 0.005;
    double eps = 0.05;
    long reservoir = 1000000;

    // tree block
    double tree_alpha = 3.0;
    double tree_eps = 0.15;
    double tree_t = 0.2;
    std::optional<double> tree_s;
    int max_generation = 2;
    long node_budget = 1L << 22;

    // run block
    std::uint64_t seed = 0;
    int seeds = 1;
    std::string out_dir = "out";

    std::string digest() const;        // stable digest of the canonical form
    std::string canonical() const;     // canonical key=value dump
    MeasureModel make_model() const;
};

// Loads JSON config (optional) and applies CLI-style overrides, then
// validates.  Throws ConfigError naming the offending field.
ExperimentConfig load_config(const std::string& json_text,
                             const std::map<std::string, std::string>& overrides);

// Executes one subcommand.  Returns the produced file names (relative to
// config.out_dir).  Known commands: simulate-cover, estimate-dim, spectrum,
// hull, tree-certify, example-verify.
std::vector<std::string> run_command(const std::string& command, const ExperimentConfig& config,
                                     const std::string& hull_input_path = "");

}  // namespace covlab
