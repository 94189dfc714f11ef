#include "covlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "covlab/errors.hpp"

namespace covlab {

namespace {

void check_dim(int d) {
    if (d < 1 || d > kMaxDim)
        throw PreconditionError("dimension must be in [1, " + std::to_string(kMaxDim) + "], got " +
                                std::to_string(d));
}

void check_level(int level) {
    if (level < 0 || level > kMaxLevel)
        throw PreconditionError("level must be in [0, " + std::to_string(kMaxLevel) + "], got " +
                                std::to_string(level));
}

}  // namespace

Point::Point(std::span<const double> coords) : dim_(static_cast<int>(coords.size())) {
    check_dim(dim_);
    for (int i = 0; i < dim_; ++i) {
        if (!std::isfinite(coords[static_cast<std::size_t>(i)]))
            throw PreconditionError("point coordinates must be finite");
        c_[static_cast<std::size_t>(i)] = coords[static_cast<std::size_t>(i)];
    }
}

Point::Point(std::initializer_list<double> coords)
    : Point(std::span<const double>(coords.begin(), coords.size())) {}

Point Point::zero(int dim) {
    check_dim(dim);
    Point p;
    p.dim_ = dim;
    return p;
}

double dist_sq(const Point& a, const Point& b) {
    if (a.dim() != b.dim()) throw PreconditionError("dimension mismatch in dist");
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double dist(const Point& a, const Point& b) { return std::sqrt(dist_sq(a, b)); }

Ball::Ball(Point c, double r) : center(std::move(c)), radius(r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw PreconditionError("ball radius must be positive and finite");
}

bool contains(const Ball& b, const Point& x) { return dist_sq(b.center, x) <= b.radius * b.radius; }

double ball_gap(const Ball& a, const Ball& b) {
    double d = dist(a.center, b.center) - a.radius - b.radius;
    return d > 0.0 ? d : 0.0;
}

std::size_t CellIndexHash::operator()(const CellIndex& c) const noexcept {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (int i = 0; i < c.dim; ++i) {
        std::uint64_t v = static_cast<std::uint64_t>(c.idx[static_cast<std::size_t>(i)]);
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xFF;
            h *= 0x100000001B3ULL;
        }
    }
    return static_cast<std::size_t>(h);
}

bool CellIndexLess::operator()(const CellIndex& a, const CellIndex& b) const noexcept {
    for (int i = 0; i < a.dim; ++i) {
        if (a.idx[static_cast<std::size_t>(i)] != b.idx[static_cast<std::size_t>(i)])
            return a.idx[static_cast<std::size_t>(i)] < b.idx[static_cast<std::size_t>(i)];
    }
    return false;
}

double DyadicGrid::side() const { return std::ldexp(1.0, -level); }

CellIndex cell_of(const Point& x, int level) {
    check_level(level);
    CellIndex c;
    c.dim = x.dim();
    for (int i = 0; i < x.dim(); ++i) {
        double scaled = std::ldexp(x[i], level);
        if (!(std::fabs(scaled) < 9.0e15))
            throw PreconditionError("coordinate out of indexable range at this level");
        c.idx[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(std::floor(scaled));
    }
    return c;
}

CellIndex ancestor(const CellIndex& c, int from_level, int to_level) {
    if (to_level > from_level) throw PreconditionError("ancestor level must be coarser");
    int shift = from_level - to_level;
    CellIndex out;
    out.dim = c.dim;
    for (int i = 0; i < c.dim; ++i)
        out.idx[static_cast<std::size_t>(i)] = c.idx[static_cast<std::size_t>(i)] >> shift;
    return out;
}

double cell_closure_dist_sq(const CellIndex& c, int level, const Point& x) {
    double side = std::ldexp(1.0, -level);
    double s = 0.0;
    for (int i = 0; i < c.dim; ++i) {
        double lo = std::ldexp(static_cast<double>(c.idx[static_cast<std::size_t>(i)]), -level);
        double hi = lo + side;
        double d = 0.0;
        if (x[i] < lo)
            d = lo - x[i];
        else if (x[i] > hi)
            d = x[i] - hi;
        s += d * d;
    }
    return s;
}

CellSet::CellSet(int dim, int level) : dim_(dim), level_(level) {
    check_dim(dim);
    if (level < 0) throw PreconditionError("cell set level must be nonnegative");
}

void CellSet::insert(const CellIndex& c) {
    if (c.dim != dim_) throw PreconditionError("cell dimension mismatch");
    cells_.insert(c);
}

std::vector<CellIndex> CellSet::sorted() const {
    std::vector<CellIndex> out(cells_.begin(), cells_.end());
    std::sort(out.begin(), out.end(), CellIndexLess{});
    return out;
}

CellSet cells_hit_by_ball(const Ball& b, int level, std::uint64_t cell_budget) {
    check_level(level);
    const int d = b.center.dim();
    std::array<std::int64_t, kMaxDim> lo{}, hi{};
    double candidates = 1.0;
    for (int i = 0; i < d; ++i) {
        double a = std::ldexp(b.center[i] - b.radius, level);
        double z = std::ldexp(b.center[i] + b.radius, level);
        if (!(std::fabs(a) < 9.0e15) || !(std::fabs(z) < 9.0e15))
            throw PreconditionError("ball out of indexable range at this level");
        // Pad by one cell each side; the exact closure test filters below.
        lo[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(std::floor(a)) - 1;
        hi[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(std::floor(z)) + 1;
        candidates *= static_cast<double>(hi[static_cast<std::size_t>(i)] -
                                          lo[static_cast<std::size_t>(i)] + 1);
    }
    if (candidates > static_cast<double>(cell_budget))
        throw BudgetExceeded("cells_hit_by_ball would enumerate " + std::to_string(candidates) +
                             " cells; budget is " + std::to_string(cell_budget));

    CellSet out(d, level);
    const double r2 = b.radius * b.radius;
    CellIndex cur;
    cur.dim = d;
    for (int i = 0; i < d; ++i) cur.idx[static_cast<std::size_t>(i)] = lo[static_cast<std::size_t>(i)];
    while (true) {
        if (cell_closure_dist_sq(cur, level, b.center) <= r2) out.insert(cur);
        int axis = 0;
        while (axis < d) {
            if (++cur.idx[static_cast<std::size_t>(axis)] <= hi[static_cast<std::size_t>(axis)]) break;
            cur.idx[static_cast<std::size_t>(axis)] = lo[static_cast<std::size_t>(axis)];
            ++axis;
        }
        if (axis == d) break;
    }
    return out;
}

DimEstimate dim_from_counts(std::span<const std::pair<int, double>> counts) {
    std::vector<int> distinct;
    for (const auto& [level, count] : counts) {
        if (!(count >= 1.0) || !std::isfinite(count))
            throw PreconditionError("counts must be finite and >= 1");
        if (std::find(distinct.begin(), distinct.end(), level) == distinct.end())
            distinct.push_back(level);
    }
    if (distinct.size() < 3)
        throw InsufficientData("dim_from_counts needs >= 3 distinct levels, got " +
                               std::to_string(distinct.size()));

    const double n = static_cast<double>(counts.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& [level, count] : counts) {
        sx += level;
        sy += std::log2(count);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [level, count] : counts) {
        double dx = level - mx;
        sxx += dx * dx;
        sxy += dx * (std::log2(count) - my);
    }
    DimEstimate est;
    est.slope = sxy / sxx;
    est.intercept = my - est.slope * mx;
    auto [lo_it, hi_it] = std::minmax_element(distinct.begin(), distinct.end());
    est.level_range = {*lo_it, *hi_it};
    double ss = 0.0;
    for (const auto& [level, count] : counts) {
        double resid = std::log2(count) - (est.intercept + est.slope * level);
        ss += resid * resid;
    }
    est.residual = std::sqrt(ss / n);
    return est;
}

}  // namespace covlab
