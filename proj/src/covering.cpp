#include "covlab/covering.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "covlab/errors.hpp"

namespace covlab {

CoverSequence::CoverSequence(CoverConfig config) : cfg_(std::move(config)) {
    if (cfg_.n_max < 2) throw PreconditionError("cover: n_max must be >= 2");
    if (cfg_.schedule == ScheduleKind::Explicit) {
        if (static_cast<long>(cfg_.radii.size()) < cfg_.n_max)
            throw PreconditionError("cover: explicit schedule shorter than n_max");
        double prev = std::numeric_limits<double>::infinity();
        for (double r : cfg_.radii) {
            if (!(r > 0.0) || r > prev)
                throw PreconditionError("cover: explicit radii must be positive and nonincreasing");
            prev = r;
        }
    } else if (!(cfg_.alpha > 0.0)) {
        throw PreconditionError("cover: alpha must be positive");
    }
}

double CoverSequence::radius(long n) const {
    if (n < 1 || n > cfg_.n_max) throw PreconditionError("cover index out of range");
    switch (cfg_.schedule) {
        case ScheduleKind::Power:
            return std::pow(static_cast<double>(n), -cfg_.alpha);
        case ScheduleKind::HalfPower:
            return std::pow(2.0 * static_cast<double>(n), -cfg_.alpha) / 2.0;
        case ScheduleKind::Explicit:
            return cfg_.radii[static_cast<std::size_t>(n - 1)];
    }
    throw Error("unreachable");
}

Point CoverSequence::center(long n) const {
    if (n < 1 || n > cfg_.n_max) throw PreconditionError("cover index out of range");
    return cfg_.model.sample(cfg_.seed, static_cast<std::uint64_t>(n));
}

Ball CoverSequence::ball(long n) const { return Ball(center(n), radius(n)); }

WindowFamily WindowFamily::dyadic(const CoverSequence& cover, int j_min, int j_max) {
    if (j_min < 0 || j_max < j_min + 2)
        throw PreconditionError("windows: need j_max >= j_min + 2 (at least 3 windows)");
    if ((1L << (j_max + 1)) > cover.n_max())
        throw PreconditionError("windows: 2^(j_max+1) must not exceed n_max");
    WindowFamily w;
    w.j_min = j_min;
    w.j_max = j_max;
    for (int j = j_min; j <= j_max; ++j) {
        // Cell side within a factor two of the radius at the window's end.
        double r = cover.radius(1L << (j + 1));
        int level = static_cast<int>(std::llround(-std::log2(r)));
        if (level < 0) level = 0;
        if (level > kMaxLevel)
            throw PreconditionError("windows: radius at window end needs level > " +
                                    std::to_string(kMaxLevel));
        w.levels.push_back(level);
    }
    return w;
}

WindowAnalysis analyze_windows(const CoverSequence& cover, const WindowFamily& windows) {
    if (windows.count() < 3) throw PreconditionError("need at least 3 windows");

    WindowAnalysis out;
    const int d = cover.config().model.dim();
    // Running intersection, kept at the level of the latest window.
    CellSet inter(d, windows.level_of(windows.j_min));
    int prev_level = -1;
    bool dead = false;

    for (int j = windows.j_min; j <= windows.j_max; ++j) {
        const int level = windows.level_of(j);
        CellSet hit(d, level);
        for (long k = 1L << j; k < (1L << (j + 1)); ++k) {
            CellSet cells = cells_hit_by_ball(cover.ball(k), level);
            for (const auto& c : cells.raw()) hit.insert(c);
        }

        WindowRow row;
        row.j = j;
        row.level = level;
        row.cells_hit = hit.size();

        if (!dead) {
            CellSet next(d, level);
            if (j == windows.j_min) {
                next = hit;
            } else {
                for (const auto& c : hit.raw())
                    if (inter.contains(ancestor(c, level, prev_level))) next.insert(c);
            }
            row.cells_in_intersection = next.size();
            if (next.empty()) {
                dead = true;
            } else {
                inter = std::move(next);
                prev_level = level;
                out.last_nonempty_j = j;
            }
        } else {
            row.cells_in_intersection = 0;
        }
        if (j == windows.j_min) prev_level = level;
        out.rows.push_back(row);
    }
    out.final_cells = dead ? CellSet(d, windows.level_of(windows.j_max)) : inter;
    return out;
}

CellSet limsup_approx(const CoverSequence& cover, const WindowFamily& windows) {
    return analyze_windows(cover, windows).final_cells;
}

DimEstimate estimate_dim_limsup(const CoverSequence& cover, const WindowFamily& windows) {
    // Regress on per-window occupancy: the count of level-n_j cells touched
    // by the window's balls grows like 2^{n_j f}, where f interpolates the
    // sample count against the measure's cell-mass strata.  Full
    // cross-window intersections go empty almost surely once the radii decay
    // faster than the window population grows, so they carry no slope.
    WindowAnalysis a = analyze_windows(cover, windows);
    std::vector<std::pair<int, double>> counts;
    for (const auto& row : a.rows) {
        if (row.cells_hit == 0) break;
        counts.emplace_back(row.level, static_cast<double>(row.cells_hit));
    }
    if (counts.size() < 3) {
        int bad_j = windows.j_min + static_cast<int>(counts.size());
        throw DegenerateEstimate("window occupancy empty at j=" + std::to_string(bad_j), bad_j);
    }
    return dim_from_counts(counts);
}

long coverage_count(const Point& x, const CoverSequence& cover, long up_to) {
    if (up_to > cover.n_max()) throw PreconditionError("coverage_count: up_to exceeds n_max");
    long count = 0;
    for (long n = 1; n <= up_to; ++n) {
        double r = cover.radius(n);
        if (dist_sq(x, cover.center(n)) <= r * r) ++count;
    }
    return count;
}

DeviationSeries deviation_stats(const CoverSequence& cover, const std::vector<TargetSet>& targets,
                                long up_to) {
    if (up_to > cover.n_max()) throw PreconditionError("deviation_stats: up_to exceeds n_max");
    for (const auto& t : targets)
        if (!(t.probability > 0.0) || t.probability > 1.0)
            throw PreconditionError("deviation_stats: probabilities must lie in (0, 1]");

    DeviationSeries out;
    out.hits.assign(targets.size(), {});
    out.mass.assign(targets.size(), {});
    for (auto& v : out.hits) v.reserve(static_cast<std::size_t>(up_to));
    for (auto& v : out.mass) v.reserve(static_cast<std::size_t>(up_to));

    std::vector<long> running(targets.size(), 0);
    for (long n = 1; n <= up_to; ++n) {
        Point x = cover.center(n);
        for (std::size_t t = 0; t < targets.size(); ++t) {
            if (targets[t].indicator(x)) ++running[t];
            out.hits[t].push_back(running[t]);
            out.mass[t].push_back(targets[t].probability * static_cast<double>(n));
        }
    }
    return out;
}

long annulus_cube_count(const CoverSequence& cover, const MassOracle& oracle, int n, double s,
                        double eps, double alpha) {
    if (!(eps > 0.0)) throw PreconditionError("annulus_cube_count: eps must be positive");
    if (!(alpha > 0.0)) throw PreconditionError("annulus_cube_count: alpha must be positive");

    double k_lo = std::pow(2.0, static_cast<double>(n) / alpha);
    double k_hi = std::pow(2.0, static_cast<double>(n + 1) / alpha);
    long first = static_cast<long>(std::ceil(k_lo));
    if (std::floor(k_lo) == k_lo) first = static_cast<long>(k_lo);  // closed lower end
    long last = static_cast<long>(std::ceil(k_hi)) - 1;             // open upper end
    if (last < first) return 0;  // no integer indices in K(n)
    if (last > cover.n_max())
        throw PreconditionError("annulus_cube_count: K(n) reaches index " + std::to_string(last) +
                                " beyond n_max " + std::to_string(cover.n_max()));

    const int d = cover.config().model.dim();
    CellSet occupied(d, n);
    for (long k = first; k <= last; ++k) occupied.insert(cell_of(cover.center(k), n));

    const double lo = std::pow(2.0, -(s + eps) * n);
    const double hi = std::pow(2.0, -(s - eps) * n);
    long count = 0;
    for (const auto& c : occupied.raw()) {
        double mass = oracle.cell_mass(c, n);
        if (mass >= lo && mass <= hi) ++count;  // ties included at both ends
    }
    return count;
}

}  // namespace covlab
