#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "covlab/geometry.hpp"
#include "covlab/measures.hpp"

namespace covlab {

enum class ScheduleKind { Power, HalfPower, Explicit };

// Radius schedule and center law of one covering process.
struct CoverConfig {
    MeasureModel model;
    ScheduleKind schedule = ScheduleKind::Power;
    double alpha = 2.0;                 // r_n = n^-alpha (Power), (2n)^-alpha / 2 (HalfPower)
    std::vector<double> radii;          // Explicit schedule, positive nonincreasing
    long n_max = 1024;
    std::uint64_t seed = 0;
};

// Deterministic-seeded stream of balls B(omega_n, r_n), n = 1..n_max.
class CoverSequence {
public:
    explicit CoverSequence(CoverConfig config);

    const CoverConfig& config() const { return cfg_; }
    long n_max() const { return cfg_.n_max; }
    double radius(long n) const;
    Point center(long n) const;
    Ball ball(long n) const;

private:
    CoverConfig cfg_;
};

// Dyadic index windows W_j = [2^j, 2^{j+1}) with one grid level per window,
// chosen so the cell side tracks the radius at the window's end.
struct WindowFamily {
    int j_min = 0;
    int j_max = 0;
    std::vector<int> levels;  // level n_j for each j in [j_min, j_max]

    int count() const { return j_max - j_min + 1; }
    int level_of(int j) const { return levels[static_cast<std::size_t>(j - j_min)]; }
    static WindowFamily dyadic(const CoverSequence& cover, int j_min, int j_max);
};

// Per-window occupancy and running intersection, shared by the limsup
// surrogate and the dimension estimator.
struct WindowRow {
    int j = 0;
    int level = 0;
    std::size_t cells_hit = 0;           // |U_j|
    std::size_t cells_in_intersection = 0;  // |I_j| at level n_j
};

struct WindowAnalysis {
    std::vector<WindowRow> rows;
    CellSet final_cells;   // intersection at the deepest level reached
    int last_nonempty_j;   // largest j with a nonempty partial intersection
    WindowAnalysis() : final_cells(1, 0), last_nonempty_j(-1) {}
};

WindowAnalysis analyze_windows(const CoverSequence& cover, const WindowFamily& windows);

// Finite-window surrogate of the limsup set: cells at the finest window
// level whose ancestor at every coarser window level is hit by that window.
CellSet limsup_approx(const CoverSequence& cover, const WindowFamily& windows);

// Box-count regression over the per-window occupancy counts |U_j| at their
// matched levels n_j.  Throws DegenerateEstimate when fewer than 3 usable
// windows exist.
DimEstimate estimate_dim_limsup(const CoverSequence& cover, const WindowFamily& windows);

// #{n <= up_to : |x - omega_n| <= r_n}.
long coverage_count(const Point& x, const CoverSequence& cover, long up_to);

// Cumulative hit counts N_n against cumulative probabilities M_n for a set
// of tracked events A_n = {omega_n in S}.
struct TargetSet {
    std::function<bool(const Point&)> indicator;
    double probability = 0.0;  // in (0, 1]
};

struct DeviationSeries {
    std::vector<std::vector<long>> hits;    // hits[t][n-1] = N_n for target t
    std::vector<std::vector<double>> mass;  // mass[t][n-1] = M_n = n * p_t
};

DeviationSeries deviation_stats(const CoverSequence& cover, const std::vector<TargetSet>& targets,
                                long up_to);

// Number of level-n dyadic cubes that contain some center omega_k with
// k in K(n) = [2^{n/alpha}, 2^{(n+1)/alpha}) and whose mass lies in the
// closed band [2^{-(s+eps)n}, 2^{-(s-eps)n}].
long annulus_cube_count(const CoverSequence& cover, const MassOracle& oracle, int n, double s,
                        double eps, double alpha);

}  // namespace covlab
