#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "entropt/errors.hpp"

namespace entropt {

/// Uniform 1-D grid on [lo, hi] with n >= 2 nodes.
struct UniformGrid {
    double lo = 0.0;
    double hi = 1.0;
    int n = 2;

    UniformGrid() = default;
    UniformGrid(double lo_, double hi_, int n_) : lo(lo_), hi(hi_), n(n_) {
        if (!std::isfinite(lo) || !std::isfinite(hi) || hi <= lo)
            throw argument_error("UniformGrid: bounds must be finite with hi > lo");
        if (n < 2) throw argument_error("UniformGrid: need at least 2 nodes");
    }

    double spacing() const { return (hi - lo) / (n - 1); }
    double x(int i) const { return lo + spacing() * i; }

    bool operator==(const UniformGrid&) const = default;
};

/// Composite trapezoid rule over grid nodes.
inline double trapezoid(const UniformGrid& g, std::span<const double> values) {
    if (static_cast<int>(values.size()) != g.n)
        throw argument_error("trapezoid: value count does not match grid");
    double sum = 0.5 * (values.front() + values.back());
    for (int i = 1; i + 1 < g.n; ++i) sum += values[i];
    return sum * g.spacing();
}

/// Trapezoid integral of f(x) * values(x).
template <typename F>
double trapezoid_weighted(const UniformGrid& g, std::span<const double> values, F&& f) {
    if (static_cast<int>(values.size()) != g.n)
        throw argument_error("trapezoid: value count does not match grid");
    double sum = 0.5 * (f(g.x(0)) * values.front() + f(g.x(g.n - 1)) * values.back());
    for (int i = 1; i + 1 < g.n; ++i) sum += f(g.x(i)) * values[i];
    return sum * g.spacing();
}

}  // namespace entropt
