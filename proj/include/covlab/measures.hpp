#pragma once

#include <memory>
#include <string>
#include <vector>

#include "covlab/geometry.hpp"
#include "covlab/rng.hpp"

namespace covlab {

// ---------------------------------------------------------------------------
// Ternary Cantor set utilities (exact digit walks, no sampling involved).
// ---------------------------------------------------------------------------

// Cantor function ("devil's staircase") on the real line, clamped to [0,1].
double cantor_function(double x);
// Mass of [a, b] under the uniform Cantor measure; endpoints carry no mass.
double cantor_interval_mass(double a, double b);
// Exact Euclidean distance from x to the middle-thirds Cantor set.
double dist_to_cantor(double x);

// ---------------------------------------------------------------------------
// Measure models
// ---------------------------------------------------------------------------

enum class MeasureKind {
    UniformBox,            // Lebesgue on [0,1]^d
    CantorUniform,         // uniform measure on the ternary Cantor set
    BernoulliConvolution,  // law of sum of +-lambda^n coins, rescaled to [0,1]
    ExampleMeasure,        // composite middle-ninth construction (lambda, beta)
    Empirical,             // uniform pick from a fixed point list
};

struct MassEstimate {
    double value = 0.0;
    double std_error = 0.0;  // 0 when exact
    long samples = 0;        // 0 when exact
    bool exact = true;
    bool low_precision = false;
};

struct MassQuery {
    Point center;
    double radius = 0.0;
    bool exact_mode = true;
    long sample_count = 1000000;  // reservoir size for empirical mode
};

class MeasureModel;

// Sampler of the measure conditioned on a ball (used by the fractal-tree
// machinery, where unconditioned batches cannot populate deep nodes).
class ConditionalSampler {
public:
    virtual ~ConditionalSampler() = default;
    virtual Point sample(CounterRng& rng) const = 0;
};

class MeasureModel {
public:
    MeasureModel() = default;  // UniformBox(1)

    static MeasureModel uniform_box(int dim);
    static MeasureModel cantor_uniform();
    static MeasureModel bernoulli_convolution(double lambda);
    static MeasureModel example_measure(double lambda, double beta, int k_max = 40);
    static MeasureModel empirical(std::vector<Point> points);

    MeasureKind kind() const { return kind_; }
    int dim() const { return dim_; }
    double lambda() const { return lambda_; }
    double beta() const { return beta_; }
    int k_max() const { return k_max_; }
    const std::vector<Point>& points() const { return points_; }

    // Deterministic i.i.d. stream: pure function of (seed, index), index >= 1.
    Point sample(std::uint64_t seed, std::uint64_t index) const;
    // Same, but on an already-derived sub-seed (for reservoirs, tree nodes...).
    Point sample_raw(std::uint64_t derived_seed, std::uint64_t index) const;

    // (c, s)-uniform constants: mu(B(x,r)) <= c r^s for a.e. x.  Loose but
    // analytically safe per variant.
    double uniform_c() const;
    double uniform_s() const;
    // Default mass-filter exponent u for the selection machinery.
    double default_u() const;

    bool has_exact_ball_mass() const;
    bool has_exact_cell_mass() const;
    double exact_ball_mass(const Point& x, double r) const;
    double exact_cell_mass(const CellIndex& c, int level) const;

    std::unique_ptr<ConditionalSampler> conditional_sampler(const Ball& b) const;
    bool has_conditional_sampler() const;

    std::string describe() const;

    // ExampleMeasure internals exposed for oracles/tests: base point of the
    // k-digit construction interval and the affine component interval inside
    // its central gap.
    static std::pair<double, double> example_component_interval(double base, int k);

private:
    MeasureKind kind_ = MeasureKind::UniformBox;
    int dim_ = 1;
    double lambda_ = 0.0;
    double beta_ = 0.0;
    int k_max_ = 0;
    int bc_depth_ = 0;  // Bernoulli convolution truncation depth
    std::vector<Point> points_;
};

// ---------------------------------------------------------------------------
// Mass oracles
// ---------------------------------------------------------------------------

class MassOracle {
public:
    virtual ~MassOracle() = default;
    virtual double ball_mass(const Point& x, double r) const = 0;
    virtual MassEstimate ball_mass_estimate(const Point& x, double r) const = 0;
    virtual double cell_mass(const CellIndex& c, int level) const = 0;
    virtual bool exact() const = 0;
    // Smallest mass the oracle resolves meaningfully (0 for exact oracles).
    virtual double min_resolvable_mass() const { return 0.0; }
};

class ExactMassOracle : public MassOracle {
public:
    explicit ExactMassOracle(MeasureModel model);
    double ball_mass(const Point& x, double r) const override;
    MassEstimate ball_mass_estimate(const Point& x, double r) const override;
    double cell_mass(const CellIndex& c, int level) const override;
    bool exact() const override { return true; }
    const MeasureModel& model() const { return model_; }

private:
    MeasureModel model_;
};

// Hit-fraction oracle over a cached reservoir of samples.
class EmpiricalMassOracle : public MassOracle {
public:
    EmpiricalMassOracle(const MeasureModel& model, std::uint64_t seed, long reservoir_size = 1000000);
    double ball_mass(const Point& x, double r) const override;
    MassEstimate ball_mass_estimate(const Point& x, double r) const override;
    double cell_mass(const CellIndex& c, int level) const override;
    bool exact() const override { return false; }
    double min_resolvable_mass() const override;
    long reservoir_size() const { return n_; }

private:
    long count_in_ball(const Point& x, double r) const;
    int dim_;
    long n_;
    std::vector<double> sorted_;           // d == 1 fast path
    std::vector<Point> points_;            // generic path
};

// Best available oracle for the model: exact when supported, else empirical.
std::unique_ptr<MassOracle> make_oracle(const MeasureModel& model, std::uint64_t seed,
                                        long reservoir_size = 1000000);

// mu(B(x,r)) with the requested mode.  Exact mode on models without an exact
// oracle throws UnsupportedMode.
MassEstimate ball_mass(const MeasureModel& model, const MassQuery& q, std::uint64_t seed = 0);

// Monte Carlo estimate of mu(C_r), C_r the closed r-fattening of the Cantor
// set, for the ExampleMeasure.  Distance to C is computed exactly.
MassEstimate fattened_cantor_mass(const MeasureModel& example, double r, long samples,
                                  std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Analytic dimension profiles
// ---------------------------------------------------------------------------

struct AnalyticProfile {
    double s0 = 0.0;     // a.e. local dimension of the diffuse part
    double s1 = 0.0;     // local dimension on the Cantor core
    double d1 = 0.0;     // log 2 / log 3 (or the box dimension stand-in)
    double gamma = 0.0;  // s1 - d1 for the Example measure, else 0
    double udimh = 0.0;
    double udimp = 0.0;
    // The Example measure admits the extra lower bound 1/alpha - gamma for
    // 1/alpha <= s1 (the fattened-Cantor transfer argument).
    bool has_hull_lower_bound = false;

    // Closed-form step spectra.  F is right-continuous and nondecreasing.
    double F_value(double s) const;
    double H_value(double s) const;

    // Step thresholds/values for F: F(s) = values[i] on [thresholds[i], thresholds[i+1]).
    std::vector<double> f_thresholds;  // ascending, starts at 0
    std::vector<double> f_values;      // same length
};

AnalyticProfile analytic_profile(const MeasureModel& model);

// ---------------------------------------------------------------------------
// Point classification for the Example measure
// ---------------------------------------------------------------------------

enum class PointClass { Component, Cantor, Outside };

struct ClassifyResult {
    PointClass cls = PointClass::Outside;
    int component_k = -1;  // set when cls == Component
    // Ground-truth local dimension: s0 on components, s1 on C, +inf outside.
    double local_dimension = 0.0;
};

ClassifyResult classify_point(const MeasureModel& example, const Point& x);

}  // namespace covlab
