#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace covlab {

// A function of one real variable sampled on a uniform grid.  +inf is the
// "undefined / ignore" sentinel; transforms skip non-finite entries.
struct SpectrumCurve {
    double start = 0.0;
    double step = 0.0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double s_at(std::size_t i) const { return start + step * static_cast<double>(i); }

    // Nearest grid index, clamped to the grid.
    std::size_t index_near(double s) const {
        if (values.empty()) return 0;
        double t = (s - start) / step;
        if (t <= 0.0) return 0;
        std::size_t i = static_cast<std::size_t>(std::llround(t));
        return i >= values.size() ? values.size() - 1 : i;
    }
    double value_near(double s) const { return values[index_near(s)]; }

    static SpectrumCurve sampled(double start, double step, std::size_t count,
                                 const std::function<double(double)>& f) {
        SpectrumCurve c{start, step, {}};
        c.values.reserve(count);
        for (std::size_t i = 0; i < count; ++i) c.values.push_back(f(c.s_at(i)));
        return c;
    }
};

inline constexpr double kCurveSentinel = std::numeric_limits<double>::infinity();

}  // namespace covlab
