#pragma once

#include <optional>
#include <vector>

#include "covlab/curve.hpp"
#include "covlab/geometry.hpp"
#include "covlab/measures.hpp"

namespace covlab {

// ---------------------------------------------------------------------------
// Local dimension estimation
// ---------------------------------------------------------------------------

struct LocalDimEstimate {
    Point point;
    double lower_slope = 0.0;  // min over sliding 4-level regression windows
    double upper_slope = 0.0;  // max over the same windows
    double overall_slope = 0.0;  // OLS over the full scale range
    std::pair<int, int> scale_range{0, 0};
    bool infinite = false;  // zero mass seen at some radius
};

// Slopes of log mu(B(x, 2^-m)) against -m log 2 over m in [level_lo, level_hi].
// Needs >= 4 levels.  Zero mass at any radius yields the infinite sentinel.
LocalDimEstimate local_dim(const MassOracle& oracle, const Point& x, int level_lo, int level_hi);

// Minimum of (upper - lower), clamped at 0, over sample points whose lower
// slope exceeds `threshold`.  Empty filter -> nullopt.
std::optional<double> discrepancy_summary(const MassOracle& oracle,
                                          std::span<const Point> sample_points, double threshold,
                                          int level_lo, int level_hi);

// ---------------------------------------------------------------------------
// Coarse multifractal spectrum
// ---------------------------------------------------------------------------

struct CoarseSpectrumReport {
    std::vector<int> levels;
    double s_start = 0.0;
    double s_step = 0.0;
    std::size_t s_count = 0;
    // counts[li][si] = N_r(s) at r = 2^-levels[li], s = s_start + si * s_step
    std::vector<std::vector<double>> counts;
    double eps = 0.0;  // filled when a spectrum is extracted

    double s_at(std::size_t si) const { return s_start + s_step * static_cast<double>(si); }
};

// N_r(s) = #dyadic cubes Q at side r = 2^-n with mu(Q) >= r^s.  The exact
// oracle enumerates all cubes of [0,1]^d; the empirical oracle only counts
// cubes holding at least one reservoir sample and uses hit fractions.
CoarseSpectrumReport coarse_counts(const MassOracle& oracle, std::span<const int> levels,
                                   double s_start, double s_step, std::size_t s_count, int dim = 1);

// Per s: slope of log2(N_r(s+eps) - N_r(s-eps)) against n, over levels with a
// positive difference.  All-zero differences give 0; fewer than 3 usable
// levels give the sentinel at that s.
SpectrumCurve coarse_spectrum(const CoarseSpectrumReport& report, double eps);

// ---------------------------------------------------------------------------
// Hull and tilde transforms
// ---------------------------------------------------------------------------

// Least nondecreasing grid-1-Lipschitz majorant of g.  Non-finite values are
// ignored (they impose no constraint).
SpectrumCurve lipschitz_hull(const SpectrumCurve& g);

// g~(x) = x + max_{y >= x} (g(y) - y), right-to-left scan.
SpectrumCurve tilde_transform(const SpectrumCurve& g);

// ---------------------------------------------------------------------------
// Bound curves for the almost-sure dimension
// ---------------------------------------------------------------------------

struct BoundCurves {
    SpectrumCurve lower;       // max(F(x-), (x - delta) for x < udimh, hull-regime term)
    SpectrumCurve upper_main;  // max(F(x), tilde(G)(x))
    SpectrumCurve upper_alt;   // hull(H)(x)
};

// x-grid carries values of 1/alpha.  `delta` is the local-dimension
// discrepancy bound fed into the lower estimate (0 for the built-in models).
BoundCurves bound_curves(const AnalyticProfile& profile, const SpectrumCurve& g_curve,
                         double x_start, double x_step, std::size_t x_count, double delta = 0.0);

// Convenience: profile spectra sampled on a grid.
SpectrumCurve profile_f_curve(const AnalyticProfile& p, double start, double step, std::size_t count);
SpectrumCurve profile_h_curve(const AnalyticProfile& p, double start, double step, std::size_t count);

}  // namespace covlab
