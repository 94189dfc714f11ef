#include "covlab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "covlab/errors.hpp"

namespace covlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ols_slope(std::span<const double> xs, std::span<const double> ys) {
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    return sxy / sxx;
}

}  // namespace

LocalDimEstimate local_dim(const MassOracle& oracle, const Point& x, int level_lo, int level_hi) {
    if (level_hi - level_lo + 1 < 4) throw PreconditionError("local_dim needs >= 4 levels");

    LocalDimEstimate est;
    est.point = x;
    est.scale_range = {level_lo, level_hi};

    std::vector<double> ms, ys;  // ys = log2 mass
    for (int m = level_lo; m <= level_hi; ++m) {
        double mass = oracle.ball_mass(x, std::ldexp(1.0, -m));
        if (!(mass > 0.0)) {
            est.infinite = true;
            est.lower_slope = est.upper_slope = est.overall_slope = kInf;
            return est;
        }
        ms.push_back(m);
        ys.push_back(std::log2(mass));
    }

    // mass ~ 2^{-m s}: the local exponent is minus the fit slope of y on m.
    est.overall_slope = -ols_slope(ms, ys);
    double lo = kInf, hi = -kInf;
    for (std::size_t i = 0; i + 4 <= ms.size(); ++i) {
        double s = -ols_slope(std::span(ms).subspan(i, 4), std::span(ys).subspan(i, 4));
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    est.lower_slope = lo;
    est.upper_slope = hi;
    return est;
}

std::optional<double> discrepancy_summary(const MassOracle& oracle,
                                          std::span<const Point> sample_points, double threshold,
                                          int level_lo, int level_hi) {
    std::optional<double> best;
    for (const auto& x : sample_points) {
        LocalDimEstimate e = local_dim(oracle, x, level_lo, level_hi);
        if (e.infinite) continue;
        if (e.lower_slope > threshold) {
            double d = std::max(0.0, e.upper_slope - e.lower_slope);
            if (!best || d < *best) best = d;
        }
    }
    return best;
}

CoarseSpectrumReport coarse_counts(const MassOracle& oracle, std::span<const int> levels,
                                   double s_start, double s_step, std::size_t s_count, int dim) {
    if (!(s_step > 0.0) || s_count < 2) throw PreconditionError("coarse_counts: bad s grid");
    CoarseSpectrumReport rep;
    rep.levels.assign(levels.begin(), levels.end());
    rep.s_start = s_start;
    rep.s_step = s_step;
    rep.s_count = s_count;

    for (int n : levels) {
        if (n < 0 || n > kMaxLevel) throw PreconditionError("coarse_counts: bad level");
        std::vector<double> masses;

        if (oracle.exact()) {
            if (static_cast<double>(dim) * n > 26.0)
                throw BudgetExceeded("coarse_counts: too many cells to enumerate at level " +
                                     std::to_string(n));
            long side = 1L << n;
            CellIndex c;
            c.dim = dim;
            std::array<long, kMaxDim> ix{};
            while (true) {
                for (int i = 0; i < dim; ++i) c.idx[static_cast<std::size_t>(i)] = ix[static_cast<std::size_t>(i)];
                double m = oracle.cell_mass(c, n);
                if (m > 0.0) masses.push_back(m);
                int axis = 0;
                while (axis < dim) {
                    if (++ix[static_cast<std::size_t>(axis)] < side) break;
                    ix[static_cast<std::size_t>(axis)] = 0;
                    ++axis;
                }
                if (axis == dim) break;
            }
        } else {
            const auto* emp = dynamic_cast<const EmpiricalMassOracle*>(&oracle);
            if (emp == nullptr)
                throw PreconditionError("coarse_counts: unrecognized non-exact oracle");
            if (dim != 1) throw UnsupportedMode("empirical coarse_counts implemented for d = 1");
            if (n > 26) throw ResolutionError("coarse_counts: level too deep for a reservoir");
            // Occupied cells only, hit-fraction masses.
            const long n_res = emp->reservoir_size();
            long occupied = 0;
            for (long k = 0; k < (1L << n); ++k) {
                CellIndex c;
                c.dim = 1;
                c.idx[0] = k;
                double m = oracle.cell_mass(c, n);
                if (m > 0.0) {
                    masses.push_back(m);
                    ++occupied;
                }
            }
            if (2 * occupied > n_res)
                throw ResolutionError("coarse_counts: reservoir of " + std::to_string(n_res) +
                                      " samples cannot resolve level " + std::to_string(n) + " (" +
                                      std::to_string(occupied) + " occupied cells)");
        }

        std::sort(masses.begin(), masses.end(), std::greater<double>());
        std::vector<double> row(s_count, 0.0);
        for (std::size_t si = 0; si < s_count; ++si) {
            double threshold = std::pow(2.0, -static_cast<double>(n) * rep.s_at(si));
            // upper_bound under greater<> keeps ties (mass == threshold) on
            // the counted side, matching the closed inequality mu(Q) >= r^s.
            auto it = std::upper_bound(masses.begin(), masses.end(), threshold,
                                       std::greater<double>());
            row[si] = static_cast<double>(it - masses.begin());
        }
        rep.counts.push_back(std::move(row));
    }
    return rep;
}

SpectrumCurve coarse_spectrum(const CoarseSpectrumReport& report, double eps) {
    if (!(eps >= 2.0 * report.s_step))
        throw PreconditionError("coarse_spectrum: eps must be >= 2 grid steps");
    const long off = std::lround(eps / report.s_step);

    SpectrumCurve g;
    g.start = report.s_start;
    g.step = report.s_step;
    g.values.assign(report.s_count, 0.0);

    for (std::size_t si = 0; si < report.s_count; ++si) {
        std::size_t hi_i = std::min(report.s_count - 1, si + static_cast<std::size_t>(off));
        std::size_t lo_i = si >= static_cast<std::size_t>(off) ? si - static_cast<std::size_t>(off) : 0;
        std::vector<double> xs, ys;
        bool any_positive = false;
        for (std::size_t li = 0; li < report.levels.size(); ++li) {
            double diff = report.counts[li][hi_i] - report.counts[li][lo_i];
            if (diff > 0.0) {
                any_positive = true;
                xs.push_back(report.levels[li]);
                ys.push_back(std::log2(diff));
            }
        }
        if (!any_positive) {
            g.values[si] = 0.0;  // all differences vanish
        } else if (xs.size() < 3) {
            g.values[si] = kInf;  // not enough usable levels
        } else {
            g.values[si] = ols_slope(xs, ys);
        }
    }
    return g;
}

SpectrumCurve lipschitz_hull(const SpectrumCurve& g) {
    const std::size_t n = g.size();
    SpectrumCurve h{g.start, g.step, std::vector<double>(n, kInf)};
    if (n == 0) return h;

    // h_i = max( max_{j<=i} g_j, x_i + max_{j>=i} (g_j - x_j) ); non-finite
    // inputs impose no constraint.
    std::vector<double> suffix(n, -kInf);
    double run = -kInf;
    for (std::size_t i = n; i-- > 0;) {
        if (std::isfinite(g.values[i])) run = std::max(run, g.values[i] - g.s_at(i));
        suffix[i] = run;
    }
    double prefix = -kInf;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::isfinite(g.values[i])) prefix = std::max(prefix, g.values[i]);
        double v = std::max(prefix, suffix[i] > -kInf ? g.s_at(i) + suffix[i] : -kInf);
        h.values[i] = std::isfinite(v) ? v : kInf;
    }
    return h;
}

SpectrumCurve tilde_transform(const SpectrumCurve& g) {
    const std::size_t n = g.size();
    SpectrumCurve h{g.start, g.step, std::vector<double>(n, kInf)};
    double run = -kInf;
    for (std::size_t i = n; i-- > 0;) {
        if (std::isfinite(g.values[i])) run = std::max(run, g.values[i] - g.s_at(i));
        h.values[i] = run > -kInf ? g.s_at(i) + run : kInf;
    }
    return h;
}

SpectrumCurve profile_f_curve(const AnalyticProfile& p, double start, double step,
                              std::size_t count) {
    return SpectrumCurve::sampled(start, step, count, [&](double s) { return p.F_value(s); });
}

SpectrumCurve profile_h_curve(const AnalyticProfile& p, double start, double step,
                              std::size_t count) {
    return SpectrumCurve::sampled(start, step, count, [&](double s) { return p.H_value(s); });
}

BoundCurves bound_curves(const AnalyticProfile& profile, const SpectrumCurve& g_curve,
                         double x_start, double x_step, std::size_t x_count, double delta) {
    BoundCurves out;
    SpectrumCurve g_tilde = tilde_transform(g_curve);
    SpectrumCurve h_curve = profile_h_curve(profile, x_start, x_step, x_count);
    SpectrumCurve h_hull = lipschitz_hull(h_curve);

    out.lower.start = out.upper_main.start = x_start;
    out.lower.step = out.upper_main.step = x_step;
    out.lower.values.resize(x_count);
    out.upper_main.values.resize(x_count);
    out.upper_alt = h_hull;

    for (std::size_t i = 0; i < x_count; ++i) {
        double x = x_start + x_step * static_cast<double>(i);
        // Left limit realized one grid step below.
        double lower = profile.F_value(x - x_step);
        if (x < profile.udimh) lower = std::max(lower, x - delta);
        if (profile.has_hull_lower_bound && x <= profile.s1)
            lower = std::max(lower, x - profile.gamma);
        out.lower.values[i] = std::max(lower, 0.0);

        double gt = g_tilde.size() ? g_tilde.value_near(x) : -kInf;
        double um = profile.F_value(x);
        if (std::isfinite(gt)) um = std::max(um, gt);
        out.upper_main.values[i] = um;
    }
    return out;
}

}  // namespace covlab
