#include "covlab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "covlab/errors.hpp"

namespace covlab {

// ---------------------------------------------------------------------------
// Ternary Cantor set utilities
// ---------------------------------------------------------------------------

double cantor_function(double x) {
    if (!(x > 0.0)) return 0.0;
    if (!(x < 1.0)) return 1.0;
    // Phi(x) = Phi(3x)/2 on [0,1/3], 1/2 on [1/3,2/3], 1/2 + Phi(3x-2)/2 above.
    double y = 0.0;
    double w = 1.0;
    for (int iter = 0; iter < 128; ++iter) {
        double t = 3.0 * x;
        int d = static_cast<int>(std::floor(t));
        if (d <= 0) {
            w *= 0.5;
            x = t;
        } else if (d == 1) {
            y += 0.5 * w;
            break;
        } else {
            y += 0.5 * w;
            w *= 0.5;
            x = t - 2.0;
        }
        if (x <= 0.0) break;
        if (x >= 1.0) {
            y += w;
            break;
        }
    }
    return y;
}

double cantor_interval_mass(double a, double b) {
    if (!(b > a)) return 0.0;
    return cantor_function(b) - cantor_function(a);
}

double dist_to_cantor(double x) {
    if (x <= 0.0) return -x;
    if (x >= 1.0) return x - 1.0;
    // Both endpoints of every construction interval lie in C, so the nearest
    // Cantor point to x never leaves the interval that contains x.
    double scale = 1.0;
    double t = x;
    for (int iter = 0; iter < 128; ++iter) {
        if (t <= 1.0 / 3.0) {
            t *= 3.0;
            scale /= 3.0;
        } else if (t >= 2.0 / 3.0) {
            t = 3.0 * t - 2.0;
            scale /= 3.0;
        } else {
            return scale * std::min(t - 1.0 / 3.0, 2.0 / 3.0 - t);
        }
        if (scale < 1e-40) break;
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// MeasureModel
// ---------------------------------------------------------------------------

namespace {

int bc_truncation_depth(double lambda) {
    // smallest N with lambda^{N+1} / (1 - lambda) < 2^-40
    double tail = lambda / (1.0 - lambda);
    int n = 0;
    while (tail >= 0x1.0p-40 && n < 256) {
        tail *= lambda;
        ++n;
    }
    return n;
}

// Sum of +-lambda^n, n = 0..depth, Horner from the deep end.
double bc_draw(CounterRng& rng, double lambda, int depth) {
    double signs[260];
    for (int i = 0; i <= depth; ++i) signs[i] = rng.next_coin() ? 1.0 : -1.0;
    double v = 0.0;
    for (int i = depth; i >= 0; --i) v = signs[i] + lambda * v;
    return v;
}

double cantor_draw(CounterRng& rng) {
    bool bits[40];
    for (int i = 0; i < 40; ++i) bits[i] = rng.next_coin();
    double x = 0.0;
    for (int i = 39; i >= 0; --i) x = (x + (bits[i] ? 2.0 : 0.0)) / 3.0;
    return x;
}

constexpr std::uint64_t kSampleTag = 0x53414D50ULL;     // base sample stream
constexpr std::uint64_t kReservoirTag = 0x52455356ULL;  // reservoir stream
constexpr std::uint64_t kFattenTag = 0x46415454ULL;     // fattening MC stream

}  // namespace

MeasureModel MeasureModel::uniform_box(int dim) {
    if (dim < 1 || dim > kMaxDim) throw PreconditionError("uniform_box: dim out of range");
    MeasureModel m;
    m.kind_ = MeasureKind::UniformBox;
    m.dim_ = dim;
    return m;
}

MeasureModel MeasureModel::cantor_uniform() {
    MeasureModel m;
    m.kind_ = MeasureKind::CantorUniform;
    m.dim_ = 1;
    return m;
}

MeasureModel MeasureModel::bernoulli_convolution(double lambda) {
    if (!(lambda > 0.0) || !(lambda < 1.0 / 3.0))
        throw PreconditionError("bernoulli_convolution: lambda must be in (0, 1/3)");
    MeasureModel m;
    m.kind_ = MeasureKind::BernoulliConvolution;
    m.dim_ = 1;
    m.lambda_ = lambda;
    m.bc_depth_ = bc_truncation_depth(lambda);
    return m;
}

MeasureModel MeasureModel::example_measure(double lambda, double beta, int k_max) {
    if (!(lambda > 0.0) || !(lambda < 1.0 / 3.0))
        throw PreconditionError("example_measure: lambda must be in (0, 1/3)");
    if (!(beta > 1.0)) throw PreconditionError("example_measure: beta must be > 1");
    if (k_max < 1) throw PreconditionError("example_measure: k_max must be >= 1");
    MeasureModel m;
    m.kind_ = MeasureKind::ExampleMeasure;
    m.dim_ = 1;
    m.lambda_ = lambda;
    m.beta_ = beta;
    m.k_max_ = k_max;
    m.bc_depth_ = bc_truncation_depth(lambda);
    return m;
}

MeasureModel MeasureModel::empirical(std::vector<Point> points) {
    if (points.empty()) throw PreconditionError("empirical: point list must be nonempty");
    MeasureModel m;
    m.kind_ = MeasureKind::Empirical;
    m.dim_ = points.front().dim();
    for (const auto& p : points)
        if (p.dim() != m.dim_) throw PreconditionError("empirical: mixed dimensions");
    m.points_ = std::move(points);
    return m;
}

std::pair<double, double> MeasureModel::example_component_interval(double base, int k) {
    double scale = std::pow(3.0, -k);
    double lo = base + scale * (4.0 / 9.0);
    return {lo, lo + scale / 9.0};
}

Point MeasureModel::sample(std::uint64_t seed, std::uint64_t index) const {
    if (index < 1) throw PreconditionError("sample index must be >= 1");
    return sample_raw(derive_seed(seed, kSampleTag), index);
}

Point MeasureModel::sample_raw(std::uint64_t derived_seed, std::uint64_t index) const {
    CounterRng rng(derived_seed, index);
    switch (kind_) {
        case MeasureKind::UniformBox: {
            Point p = Point::zero(dim_);
            for (int i = 0; i < dim_; ++i) p[i] = rng.next_double();
            return p;
        }
        case MeasureKind::CantorUniform:
            return Point{cantor_draw(rng)};
        case MeasureKind::BernoulliConvolution: {
            double m = 1.0 / (1.0 - lambda_);
            double v = bc_draw(rng, lambda_, bc_depth_);
            return Point{(v + m) / (2.0 * m)};
        }
        case MeasureKind::ExampleMeasure: {
            double u = rng.next_double();
            double q = std::pow(2.0, 1.0 - beta_);
            double norm = 1.0 - std::pow(q, k_max_ + 1);
            int k = k_max_;
            double wk = (1.0 - q) / norm;
            double acc = 0.0;
            for (int i = 0; i <= k_max_; ++i) {
                acc += wk;
                if (u < acc) {
                    k = i;
                    break;
                }
                wk *= q;
            }
            double base = 0.0;
            double scale = 1.0;
            for (int i = 0; i < k; ++i) {
                if (rng.next_coin()) base += 2.0 / 3.0 * scale;
                scale /= 3.0;
            }
            double m = 1.0 / (1.0 - lambda_);
            double t = (bc_draw(rng, lambda_, bc_depth_) + m) / (2.0 * m);
            return Point{base + scale * (4.0 / 9.0) + t * (scale / 9.0)};
        }
        case MeasureKind::Empirical: {
            auto n = points_.size();
            auto i = static_cast<std::size_t>(rng.next_double() * static_cast<double>(n));
            if (i >= n) i = n - 1;
            return points_[i];
        }
    }
    throw Error("unreachable");
}

double MeasureModel::uniform_s() const {
    const double d1 = std::log(2.0) / std::log(3.0);
    switch (kind_) {
        case MeasureKind::UniformBox:
            return dim_;
        case MeasureKind::CantorUniform:
            return d1;
        case MeasureKind::BernoulliConvolution:
            return std::log(2.0) / (-std::log(lambda_));
        case MeasureKind::ExampleMeasure:
            // Deep components have weight 2^{(1-beta)k} at scale 3^{-(k+2)},
            // so a depth-independent (c,s) bound only holds up to
            // s = (beta - 1) log 2 / log 3.
            return (beta_ - 1.0) * d1;
        case MeasureKind::Empirical:
            break;
    }
    throw UnsupportedMode("no analytic uniformity constants for this model");
}

double MeasureModel::uniform_c() const {
    switch (kind_) {
        case MeasureKind::UniformBox:
            return std::pow(2.0, dim_);
        case MeasureKind::CantorUniform:
            return std::pow(2.0, 1.0 + std::log(2.0) / std::log(3.0));
        case MeasureKind::BernoulliConvolution: {
            // A ball of radius r < lambda^k (1-2 lambda)/2 meets at most one
            // rescaled cylinder of level k+1; doubled for slack.
            double s0 = uniform_s();
            return 2.0 * std::pow(lambda_ * (1.0 - 2.0 * lambda_) / 2.0, -s0);
        }
        case MeasureKind::ExampleMeasure:
            return 4.0;
        case MeasureKind::Empirical:
            break;
    }
    throw UnsupportedMode("no analytic uniformity constants for this model");
}

double MeasureModel::default_u() const {
    const double d1 = std::log(2.0) / std::log(3.0);
    switch (kind_) {
        case MeasureKind::UniformBox:
            return dim_;
        case MeasureKind::CantorUniform:
            return d1;
        case MeasureKind::BernoulliConvolution:
            return std::log(2.0) / (-std::log(lambda_));
        case MeasureKind::ExampleMeasure:
            return beta_ * d1;  // admits Cantor-adjacent points in the mass filter
        case MeasureKind::Empirical:
            break;
    }
    throw UnsupportedMode("no default u for this model; supply it explicitly");
}

bool MeasureModel::has_exact_ball_mass() const {
    switch (kind_) {
        case MeasureKind::UniformBox:
            return dim_ == 1;
        case MeasureKind::CantorUniform:
        case MeasureKind::Empirical:
            return true;
        default:
            return false;
    }
}

bool MeasureModel::has_exact_cell_mass() const {
    switch (kind_) {
        case MeasureKind::UniformBox:
        case MeasureKind::CantorUniform:
        case MeasureKind::Empirical:
            return true;
        default:
            return false;
    }
}

double MeasureModel::exact_ball_mass(const Point& x, double r) const {
    if (!(r > 0.0)) throw PreconditionError("ball mass radius must be positive");
    switch (kind_) {
        case MeasureKind::UniformBox: {
            if (dim_ != 1)
                throw UnsupportedMode("exact ball mass for UniformBox is available in d = 1 only");
            double lo = std::max(0.0, x[0] - r);
            double hi = std::min(1.0, x[0] + r);
            return hi > lo ? hi - lo : 0.0;
        }
        case MeasureKind::CantorUniform:
            return cantor_interval_mass(x[0] - r, x[0] + r);
        case MeasureKind::Empirical: {
            long hit = 0;
            double r2 = r * r;
            for (const auto& p : points_)
                if (dist_sq(p, x) <= r2) ++hit;
            return static_cast<double>(hit) / static_cast<double>(points_.size());
        }
        default:
            throw UnsupportedMode("exact ball mass unsupported for " + describe() +
                                  "; use empirical mode");
    }
}

double MeasureModel::exact_cell_mass(const CellIndex& c, int level) const {
    switch (kind_) {
        case MeasureKind::UniformBox: {
            double side = std::ldexp(1.0, -level);
            double mass = 1.0;
            for (int i = 0; i < dim_; ++i) {
                double lo = std::ldexp(static_cast<double>(c.idx[static_cast<std::size_t>(i)]), -level);
                double overlap = std::min(1.0, lo + side) - std::max(0.0, lo);
                if (overlap <= 0.0) return 0.0;
                mass *= overlap;
            }
            return mass;
        }
        case MeasureKind::CantorUniform: {
            double lo = std::ldexp(static_cast<double>(c.idx[0]), -level);
            return cantor_interval_mass(lo, lo + std::ldexp(1.0, -level));
        }
        case MeasureKind::Empirical: {
            long hit = 0;
            for (const auto& p : points_)
                if (cell_of(p, level) == c) ++hit;
            return static_cast<double>(hit) / static_cast<double>(points_.size());
        }
        default:
            throw UnsupportedMode("exact cell mass unsupported for " + describe());
    }
}

std::string MeasureModel::describe() const {
    switch (kind_) {
        case MeasureKind::UniformBox:
            return "UniformBox(d=" + std::to_string(dim_) + ")";
        case MeasureKind::CantorUniform:
            return "CantorUniform";
        case MeasureKind::BernoulliConvolution:
            return "BernoulliConvolution(lambda=" + std::to_string(lambda_) + ")";
        case MeasureKind::ExampleMeasure:
            return "ExampleMeasure(lambda=" + std::to_string(lambda_) +
                   ",beta=" + std::to_string(beta_) + ",k_max=" + std::to_string(k_max_) + ")";
        case MeasureKind::Empirical:
            return "Empirical(n=" + std::to_string(points_.size()) + ")";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Conditional samplers
// ---------------------------------------------------------------------------

namespace {

class UniformBoxConditional : public ConditionalSampler {
public:
    UniformBoxConditional(int dim, const Ball& b) : dim_(dim), ball_(b) {
        for (int i = 0; i < dim_; ++i) {
            lo_[static_cast<std::size_t>(i)] = std::max(0.0, b.center[i] - b.radius);
            hi_[static_cast<std::size_t>(i)] = std::min(1.0, b.center[i] + b.radius);
            if (!(hi_[static_cast<std::size_t>(i)] > lo_[static_cast<std::size_t>(i)]))
                throw PreconditionError("conditional sampler: ball does not meet [0,1]^d");
        }
    }

    Point sample(CounterRng& rng) const override {
        for (int attempt = 0; attempt < 100000; ++attempt) {
            Point p = Point::zero(dim_);
            for (int i = 0; i < dim_; ++i)
                p[i] = lo_[static_cast<std::size_t>(i)] +
                       rng.next_double() *
                           (hi_[static_cast<std::size_t>(i)] - lo_[static_cast<std::size_t>(i)]);
            if (dim_ == 1 || contains(ball_, p)) return p;
        }
        throw Error("conditional sampler: rejection stalled");
    }

private:
    int dim_;
    Ball ball_;
    std::array<double, kMaxDim> lo_{}, hi_{};
};

// Digit walk under the Cantor measure conditioned on an interval.  The
// constraint is rescaled along with the interval so child masses are always
// computed from O(1) Cantor-function values (no deep-mass underflow).
class CantorConditional : public ConditionalSampler {
public:
    explicit CantorConditional(const Ball& b) {
        a_ = std::max(0.0, b.center[0] - b.radius);
        b_ = std::min(1.0, b.center[0] + b.radius);
        if (cantor_interval_mass(a_, b_) <= 0.0)
            throw PreconditionError("conditional sampler: ball carries no Cantor mass");
    }

    Point sample(CounterRng& rng) const override {
        double lo = 0.0, scale = 1.0;
        double u = a_, v = b_;  // constraint rescaled to the current interval
        for (int depth = 0; depth < 60; ++depth) {
            if (u <= 0.0 && v >= 1.0) {
                // Constraint no longer binds: plain coin digits.
                if (rng.next_coin()) lo += 2.0 / 3.0 * scale;
                scale /= 3.0;
                continue;
            }
            double m_left = third_mass(u, v, 0.0);
            double m_right = third_mass(u, v, 2.0 / 3.0);
            double total = m_left + m_right;
            bool right;
            if (total <= 0.0) {
                right = rng.next_coin();  // vanishing conditional mass; fall back
            } else {
                right = rng.next_double() * total >= m_left;
            }
            if (right) {
                lo += 2.0 / 3.0 * scale;
                u = 3.0 * u - 2.0;
                v = 3.0 * v - 2.0;
            } else {
                u = 3.0 * u;
                v = 3.0 * v;
            }
            u = std::max(u, 0.0);
            v = std::min(v, 1.0);
            scale /= 3.0;
        }
        return Point{lo + scale / 2.0};
    }

private:
    static double third_mass(double u, double v, double base) {
        double lo = std::max(u, base), hi = std::min(v, base + 1.0 / 3.0);
        if (hi <= lo) return 0.0;
        // mass of [lo,hi] inside the third, rescaled: Phi(3x - 3 base)/2
        return 0.5 * (cantor_function(3.0 * (hi - base)) - cantor_function(3.0 * (lo - base)));
    }

    double a_, b_;
};

}  // namespace

bool MeasureModel::has_conditional_sampler() const {
    return kind_ == MeasureKind::UniformBox || kind_ == MeasureKind::CantorUniform;
}

std::unique_ptr<ConditionalSampler> MeasureModel::conditional_sampler(const Ball& b) const {
    switch (kind_) {
        case MeasureKind::UniformBox:
            return std::make_unique<UniformBoxConditional>(dim_, b);
        case MeasureKind::CantorUniform:
            return std::make_unique<CantorConditional>(b);
        default:
            throw UnsupportedMode("no conditional sampler for " + describe());
    }
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

ExactMassOracle::ExactMassOracle(MeasureModel model) : model_(std::move(model)) {}

double ExactMassOracle::ball_mass(const Point& x, double r) const {
    return model_.exact_ball_mass(x, r);
}

MassEstimate ExactMassOracle::ball_mass_estimate(const Point& x, double r) const {
    return {ball_mass(x, r), 0.0, 0, true, false};
}

double ExactMassOracle::cell_mass(const CellIndex& c, int level) const {
    return model_.exact_cell_mass(c, level);
}

EmpiricalMassOracle::EmpiricalMassOracle(const MeasureModel& model, std::uint64_t seed,
                                         long reservoir_size)
    : dim_(model.dim()), n_(reservoir_size) {
    if (reservoir_size < 1) throw PreconditionError("reservoir size must be positive");
    std::uint64_t s = derive_seed(seed, kReservoirTag);
    if (dim_ == 1) {
        sorted_.reserve(static_cast<std::size_t>(n_));
        for (long i = 1; i <= n_; ++i) sorted_.push_back(model.sample_raw(s, static_cast<std::uint64_t>(i))[0]);
        std::sort(sorted_.begin(), sorted_.end());
    } else {
        points_.reserve(static_cast<std::size_t>(n_));
        for (long i = 1; i <= n_; ++i) points_.push_back(model.sample_raw(s, static_cast<std::uint64_t>(i)));
    }
}

long EmpiricalMassOracle::count_in_ball(const Point& x, double r) const {
    if (dim_ == 1) {
        auto lo = std::lower_bound(sorted_.begin(), sorted_.end(), x[0] - r);
        auto hi = std::upper_bound(sorted_.begin(), sorted_.end(), x[0] + r);
        return static_cast<long>(hi - lo);
    }
    long hit = 0;
    double r2 = r * r;
    for (const auto& p : points_)
        if (dist_sq(p, x) <= r2) ++hit;
    return hit;
}

double EmpiricalMassOracle::ball_mass(const Point& x, double r) const {
    return static_cast<double>(count_in_ball(x, r)) / static_cast<double>(n_);
}

MassEstimate EmpiricalMassOracle::ball_mass_estimate(const Point& x, double r) const {
    double p = ball_mass(x, r);
    double se = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n_));
    return {p, se, n_, false, false};
}

double EmpiricalMassOracle::cell_mass(const CellIndex& c, int level) const {
    if (dim_ == 1) {
        double lo = std::ldexp(static_cast<double>(c.idx[0]), -level);
        double hi = lo + std::ldexp(1.0, -level);
        auto a = std::lower_bound(sorted_.begin(), sorted_.end(), lo);
        auto b = std::lower_bound(sorted_.begin(), sorted_.end(), hi);
        return static_cast<double>(b - a) / static_cast<double>(n_);
    }
    long hit = 0;
    for (const auto& p : points_)
        if (cell_of(p, level) == c) ++hit;
    return static_cast<double>(hit) / static_cast<double>(n_);
}

double EmpiricalMassOracle::min_resolvable_mass() const { return 10.0 / static_cast<double>(n_); }

std::unique_ptr<MassOracle> make_oracle(const MeasureModel& model, std::uint64_t seed,
                                        long reservoir_size) {
    if (model.has_exact_ball_mass() && model.has_exact_cell_mass())
        return std::make_unique<ExactMassOracle>(model);
    return std::make_unique<EmpiricalMassOracle>(model, seed, reservoir_size);
}

MassEstimate ball_mass(const MeasureModel& model, const MassQuery& q, std::uint64_t seed) {
    if (!(q.radius > 0.0)) throw PreconditionError("ball mass radius must be positive");
    if (q.exact_mode) {
        if (!model.has_exact_ball_mass())
            throw UnsupportedMode("exact ball mass unsupported for " + model.describe() +
                                  "; use empirical mode");
        return {model.exact_ball_mass(q.center, q.radius), 0.0, 0, true, false};
    }
    EmpiricalMassOracle oracle(model, seed, q.sample_count);
    return oracle.ball_mass_estimate(q.center, q.radius);
}

MassEstimate fattened_cantor_mass(const MeasureModel& example, double r, long samples,
                                  std::uint64_t seed) {
    if (example.kind() != MeasureKind::ExampleMeasure)
        throw PreconditionError("fattened_cantor_mass expects an ExampleMeasure model");
    if (!(r > 0.0) || !(r < 1.0)) throw PreconditionError("fattening radius must be in (0,1)");
    if (samples < 1) throw PreconditionError("need at least one sample");
    std::uint64_t s = derive_seed(seed, kFattenTag);
    long hit = 0;
    for (long i = 1; i <= samples; ++i) {
        Point x = example.sample_raw(s, static_cast<std::uint64_t>(i));
        if (dist_to_cantor(x[0]) <= r) ++hit;
    }
    double p = static_cast<double>(hit) / static_cast<double>(samples);
    MassEstimate est;
    est.value = p;
    est.std_error = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(samples));
    est.samples = samples;
    est.exact = false;
    est.low_precision = samples < 1000;
    return est;
}

// ---------------------------------------------------------------------------
// Analytic profiles
// ---------------------------------------------------------------------------

double AnalyticProfile::F_value(double s) const {
    double v = 0.0;
    for (std::size_t i = 0; i < f_thresholds.size(); ++i)
        if (s >= f_thresholds[i]) v = f_values[i];
    return v;
}

double AnalyticProfile::H_value(double s) const { return F_value(s); }

AnalyticProfile analytic_profile(const MeasureModel& model) {
    const double d1 = std::log(2.0) / std::log(3.0);
    AnalyticProfile p;
    switch (model.kind()) {
        case MeasureKind::UniformBox: {
            double d = model.dim();
            p.s0 = p.s1 = p.d1 = p.udimh = p.udimp = d;
            p.f_thresholds = {0.0, d};
            p.f_values = {0.0, d};
            return p;
        }
        case MeasureKind::CantorUniform: {
            p.s0 = p.s1 = p.d1 = p.udimh = p.udimp = d1;
            p.f_thresholds = {0.0, d1};
            p.f_values = {0.0, d1};
            return p;
        }
        case MeasureKind::ExampleMeasure: {
            p.s0 = std::log(2.0) / (-std::log(model.lambda()));
            p.s1 = model.beta() * d1;
            p.d1 = d1;
            p.gamma = (model.beta() - 1.0) * d1;
            // Almost every point sits in some diffuse component, so both
            // essential suprema equal s0.
            p.udimh = p.udimp = p.s0;
            p.has_hull_lower_bound = true;
            p.f_thresholds = {0.0, p.s0, p.s1};
            p.f_values = {0.0, p.s0, d1};
            return p;
        }
        default:
            throw UnsupportedMode("no analytic profile for " + model.describe());
    }
}

// ---------------------------------------------------------------------------
// Point classification (Example measure)
// ---------------------------------------------------------------------------

ClassifyResult classify_point(const MeasureModel& example, const Point& x) {
    if (example.kind() != MeasureKind::ExampleMeasure)
        throw PreconditionError("classify_point expects an ExampleMeasure model");
    if (x.dim() != 1) throw PreconditionError("classify_point expects d = 1");

    const double s0 = std::log(2.0) / (-std::log(example.lambda()));
    const double s1 = example.beta() * std::log(2.0) / std::log(3.0);
    const double inf = std::numeric_limits<double>::infinity();

    double t = x[0];
    if (t < 0.0 || t > 1.0) return {PointClass::Outside, -1, inf};
    for (int k = 0; k < 60; ++k) {
        if (t < 1.0 / 3.0) {
            t *= 3.0;
        } else if (t > 2.0 / 3.0) {
            t = 3.0 * t - 2.0;
        } else if (t >= 4.0 / 9.0 && t <= 5.0 / 9.0) {
            return {PointClass::Component, k, s0};
        } else if (t == 1.0 / 3.0) {
            t = 1.0;  // boundary point of C
        } else if (t == 2.0 / 3.0) {
            t = 0.0;
        } else {
            return {PointClass::Outside, -1, inf};
        }
    }
    return {PointClass::Cantor, -1, s1};
}

}  // namespace covlab
