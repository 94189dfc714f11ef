#pragma once

#include <stdexcept>
#include <string>

namespace covlab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A caller violated a documented precondition.
struct PreconditionError : Error {
    using Error::Error;
};

// A query would materialize more cells than the configured budget allows.
struct BudgetExceeded : Error {
    using Error::Error;
};

// Requested mode is not available for this measure (e.g. exact ball mass
// for a Bernoulli convolution).
struct UnsupportedMode : Error {
    using Error::Error;
};

// Too few data points to run a regression or a limit estimate.
struct InsufficientData : Error {
    using Error::Error;
};

// The empirical reservoir cannot resolve the requested scale.
struct ResolutionError : Error {
    using Error::Error;
};

// A partial limsup intersection went empty before enough regression points
// were collected.  Carries the offending window index.
struct DegenerateEstimate : Error {
    DegenerateEstimate(const std::string& msg, int window_j)
        : Error(msg), window(window_j) {}
    int window;
};

// Tree growth exhausted its sample budget at some node.
struct GrowthFailure : Error {
    GrowthFailure(const std::string& msg, long node, int generation)
        : Error(msg), node_id(node), node_generation(generation) {}
    long node_id;
    int node_generation;
};

// A config file failed validation.  Carries the offending field path.
struct ConfigError : Error {
    ConfigError(const std::string& field_path, const std::string& msg)
        : Error(field_path + ": " + msg), field(field_path) {}
    std::string field;
};

}  // namespace covlab
