#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <unordered_set>
#include <utility>
#include <vector>

namespace covlab {

inline constexpr int kMaxDim = 4;
inline constexpr int kMaxLevel = 60;
inline constexpr std::uint64_t kDefaultCellBudget = std::uint64_t(1) << 26;

// A point of [0,1]^d-ish space.  Fixed capacity, value semantics.
class Point {
public:
    Point() : dim_(1) {}
    explicit Point(std::span<const double> coords);
    Point(std::initializer_list<double> coords);
    static Point zero(int dim);

    int dim() const { return dim_; }
    double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
    std::span<const double> coords() const { return {c_.data(), static_cast<std::size_t>(dim_)}; }

    bool operator==(const Point&) const = default;

private:
    std::array<double, kMaxDim> c_{};
    int dim_;
};

double dist_sq(const Point& a, const Point& b);
double dist(const Point& a, const Point& b);

// Closed Euclidean ball.
struct Ball {
    Point center;
    double radius;
    Ball(Point c, double r);
};

bool contains(const Ball& b, const Point& x);
// Gap between two balls, 0 if they touch or overlap.
double ball_gap(const Ball& a, const Ball& b);

// Index of one half-open dyadic cell prod_i [k_i 2^-n, (k_i+1) 2^-n).
struct CellIndex {
    std::array<std::int64_t, kMaxDim> idx{};
    int dim = 1;
    bool operator==(const CellIndex&) const = default;
};

struct CellIndexHash {
    std::size_t operator()(const CellIndex& c) const noexcept;
};

struct CellIndexLess {
    bool operator()(const CellIndex& a, const CellIndex& b) const noexcept;
};

struct DyadicGrid {
    int dim;
    int level;  // cells have side 2^-level
    double side() const;
};

CellIndex cell_of(const Point& x, int level);
// The cell at to_level containing cell c (to_level <= from_level).
CellIndex ancestor(const CellIndex& c, int from_level, int to_level);
// Squared distance from x to the closure of the cell.
double cell_closure_dist_sq(const CellIndex& c, int level, const Point& x);

// Deduplicated set of cell indices sharing one level.
class CellSet {
public:
    CellSet(int dim, int level);

    int dim() const { return dim_; }
    int level() const { return level_; }
    std::size_t size() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }

    void insert(const CellIndex& c);
    bool contains(const CellIndex& c) const { return cells_.count(c) > 0; }

    const std::unordered_set<CellIndex, CellIndexHash>& raw() const { return cells_; }
    std::vector<CellIndex> sorted() const;  // deterministic lexicographic order

private:
    int dim_;
    int level_;
    std::unordered_set<CellIndex, CellIndexHash> cells_;
};

// All cells at `level` whose closure meets the closed ball.  Boundary
// contact counts as a hit.  Throws BudgetExceeded when the bounding box
// holds more than `cell_budget` candidate cells.
CellSet cells_hit_by_ball(const Ball& b, int level, std::uint64_t cell_budget = kDefaultCellBudget);

// Least-squares box-dimension estimate from (level, count) pairs.
struct DimEstimate {
    double slope = 0.0;
    double intercept = 0.0;
    std::pair<int, int> level_range{0, 0};
    double residual = 0.0;  // RMS of regression residuals
};

// OLS of log2(count) against level.  Needs >= 3 distinct levels, counts >= 1.
DimEstimate dim_from_counts(std::span<const std::pair<int, double>> counts);

}  // namespace covlab
