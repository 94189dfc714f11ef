#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "covlab/geometry.hpp"
#include "covlab/measures.hpp"

namespace covlab {

// ---------------------------------------------------------------------------
// Discrete energies and the restriction bound
// ---------------------------------------------------------------------------

struct WeightedAtom {
    Point x;
    double w = 0.0;
};

// I'_t of an atomic measure: sum over i != j of w_i w_j |x_i - x_j|^-t.
// A single atom gives 0; coincident distinct atoms give +inf.
double discrete_energy(std::span<const WeightedAtom> atoms, double t);

enum class RestrictionVerdict { Holds, Fails, HypothesisViolated };

struct RestrictionCheck {
    RestrictionVerdict verdict = RestrictionVerdict::Holds;
    double energy = 0.0;  // I'_t of the restriction to A
    double bound = 0.0;   // c s / (s - t) |A|^{s-t} mu(A)
    double slack = 0.0;   // bound - energy
    std::string detail;
};

// Checks the restricted-energy inequality for an atomic (c,s)'-uniform
// measure.  The uniformity hypothesis is verified exactly first; violations
// yield HypothesisViolated rather than a pass/fail verdict.
RestrictionCheck check_restriction_bound(std::span<const WeightedAtom> atoms, const Ball& a,
                                         double c, double s, double t);

// Exact (c,s)'-uniformity test for an atomic probability measure.
bool atoms_cs_uniform(std::span<const WeightedAtom> atoms, double c, double s);

// ---------------------------------------------------------------------------
// Greedy separated selection
// ---------------------------------------------------------------------------

struct SelectionParams {
    double s = 1.0;    // (c,s)-uniformity exponent of the sampling measure
    double eps = 0.1;  // in (0, s)
    double c = 2.0;    // (c,s)-uniformity constant
    double u = 1.0;    // mass-filter exponent (>= upper packing dimension)
    Ball ball;         // selection happens inside this closed ball
    long n0 = 64;

    SelectionParams(double s_, double eps_, double c_, double u_, Ball b, long n0_ = 64);
    double W() const;  // 4^s max(c e, s / eps, 2), recomputed on demand
};

struct GreedyResult {
    std::vector<Point> kept;
    std::vector<long> kept_indices;  // positions 0..n-1 within the batch
    long in_ball = 0;                // batch points inside the ball
    long eligible = 0;               // in ball and passing the mass filter
};

// First-come-first-kept scan of a contiguous batch (the n..2n-1 block of a
// stream): keep omega_j iff it lies in the ball, passes the mass filter
// mu(B(x, r_n)) >= r_n^{u+eps}, and sits farther than 8 r_n from every
// previously kept point.
GreedyResult greedy_select(std::span<const Point> batch, const SelectionParams& params, double r_n,
                           const MassOracle& oracle);

// ---------------------------------------------------------------------------
// Fractal trees
// ---------------------------------------------------------------------------

struct TreeNode {
    Point center;
    double radius = 0.0;      // tree ball radius (doubled selection radius)
    double pre_radius = 0.0;  // selection-stage radius
    int generation = 0;
    long parent = -1;
    std::vector<long> children;
    double weight = 0.0;  // theta(B)
    double c_B = 0.0;     // 2 W^2 / mu(B) of the node's selection ball
    double mu_B = 0.0;
    bool mass_empirical = false;
    long expansion_n = 0;  // batch length that produced the children
};

struct FractalTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    double alpha = 0.0;
    double eps = 0.0;
    double uniformity_exponent = 0.0;  // child measures are (c_B, this)'-uniform
    std::uint64_t seed = 0;
    int max_generation = 0;

    std::vector<long> generation_nodes(int g) const;
    std::vector<long> leaves() const;  // deepest generation
};

struct GrowOptions {
    long n0 = 64;
    long node_sample_budget = 1L << 22;
    bool trim_children_to_required = false;
};

// Grows a fractal tree over the model restricted to a root ball covering
// [0,1]^d, using the halfpower schedule r_n = (2n)^-alpha / 2 per node.
// Each node samples its own counter-derived stream conditioned on its ball.
// Requires a model with exact ball mass and a conditional sampler
// (UniformBox(1) or CantorUniform).
FractalTree grow_tree(const MeasureModel& model, double alpha, double eps, int max_generation,
                      std::uint64_t seed, const GrowOptions& options = {});

// Structural validation used by tests: containment, disjoint siblings,
// separation hypothesis, weight conservation.  Returns a failure message or
// empty string.
std::string validate_tree(const FractalTree& tree);

// ---------------------------------------------------------------------------
// Tree energies and certification
// ---------------------------------------------------------------------------

struct EnergyReport {
    double t = 0.0;
    double s = 0.0;
    double direct_energy = 0.0;  // atomic I_t of the leaf measure
    double bound_energy = 0.0;   // 2^t s/(s-t) sum theta(B)^2 c_B |B|^{s-t}
    bool direct_computed = true;
    std::vector<double> partial_direct;  // cumulative, by split generation
    std::vector<double> partial_bound;   // cumulative, by internal generation
    long leaf_count = 0;
    bool mass_empirical = false;  // some c_B used an empirical mass estimate
};

// Computes both energy sides.  Direct energy is O(#leaves^2) and is skipped
// (direct_computed = false) when #leaves exceeds `direct_leaf_limit`.
EnergyReport tree_energy(const FractalTree& tree, double t, double s = 0.0,
                         long direct_leaf_limit = 20000);

enum class CertifyVerdict { Certified, Inconclusive };

struct CertifyReport {
    CertifyVerdict verdict = CertifyVerdict::Inconclusive;
    double t = 0.0;
    double bound_energy = 0.0;
    double last_increment_ratio = 0.0;  // last generation term / total
    std::vector<double> partial_bound;
    std::string detail;
};

// Certified when the bound-energy partial sums are numerically Cauchy (the
// last internal generation contributes < 1% of the total) and finite.
CertifyReport certify_lower_bound(const FractalTree& tree, double t, double s = 0.0);

}  // namespace covlab
