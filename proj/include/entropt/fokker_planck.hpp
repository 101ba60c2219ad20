#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "entropt/grid.hpp"
#include "entropt/types.hpp"

namespace entropt::fpe {

/// Drift and volatility as functions of (log price, time). Both must be
/// bounded on the domain and vol_of must stay positive on the grid.
struct CoefficientField {
    std::function<double(double, double)> drift_of;  ///< mu(x, t)
    std::function<double(double, double)> vol_of;    ///< sigma(x, t) > 0

    static CoefficientField constant(double mu, double sigma) {
        return CoefficientField{[mu](double, double) { return mu; },
                                [sigma](double, double) { return sigma; }};
    }
};

/// Probability density of the log price on a uniform grid at one instant.
class DensityGrid {
public:
    DensityGrid(double x_lo, double x_hi, int n_points, std::vector<double> values,
                double time = 0.0);

    static DensityGrid gaussian(double x_lo, double x_hi, int n_points, double mean,
                                double stddev, double time = 0.0);
    /// Delta-like initial condition: Gaussian whose std equals one grid
    /// spacing, renormalized on the grid.
    static DensityGrid near_delta(double x_lo, double x_hi, int n_points, double center,
                                  double time = 0.0);

    const UniformGrid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    double time() const noexcept { return time_; }

    double mass() const;      ///< trapezoid integral (1 up to scheme error)
    double mean() const;      ///< first moment of x
    double variance() const;  ///< second central moment of x
    double min_value() const;

    /// CSV: comment header with time/bounds/size, then x,value rows.
    void write_csv(std::ostream& os) const;

private:
    struct raw_tag {};
    DensityGrid(raw_tag, UniformGrid grid, std::vector<double> values, double time);

    UniformGrid grid_;
    std::vector<double> values_;
    double time_;

    friend DensityGrid evolve_forward(const DensityGrid&, const CoefficientField&, double,
                                      int);
};

/// Identifies which contract's asymptotics pin the boundary values during a
/// backward solve.
struct PayoffTag {
    OptionStyle style = OptionStyle::call;
    double strike = 0.0;
    double rate = 0.0;    ///< growth rate of the undiscounted expectation
    double expiry = 0.0;  ///< contract expiry the asymptotics are anchored to
};

/// Expected-payoff surface V(x, t) on a uniform log-price grid.
class ValueGrid {
public:
    ValueGrid(double x_lo, double x_hi, int n_points, std::vector<double> values,
              double time, std::optional<PayoffTag> payoff = std::nullopt);

    /// Terminal condition V(x, T) = payoff(e^x) with the matching tag.
    static ValueGrid terminal_payoff(double x_lo, double x_hi, int n_points,
                                     const OptionSpec& option, double rate);

    const UniformGrid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    double time() const noexcept { return time_; }
    const std::optional<PayoffTag>& payoff() const noexcept { return payoff_; }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    /// Interpolated value at x (cubic, 4-point Lagrange); x must lie in the
    /// grid interior.
    double value_at(double x) const;

    /// Largest violation of the monotonicity implied by the payoff style
    /// (calls non-decreasing, puts non-increasing); 0 when untagged.
    double monotonicity_gap() const;

    void write_csv(std::ostream& os) const;

private:
    UniformGrid grid_;
    std::vector<double> values_;
    double time_;
    std::optional<PayoffTag> payoff_;
    std::vector<std::string> warnings_;

    friend ValueGrid evolve_backward_value(const ValueGrid&, const CoefficientField&,
                                           double, int);
};

// --- Operations -----------------------------------------------------------

/// Advance the density from its own time to t_final by Crank-Nicolson steps
/// of the conservative form d_t p = -d_x[(mu - sigma^2/2) p]
/// + (1/2) d_x^2[sigma^2 p] with zero-flux boundaries. The drift term is
/// upwinded at interfaces whose cell Peclet number exceeds 2; with the
/// central stencil, non-negativity is preserved for steps satisfying
/// dt <= dx^2 / max(sigma^2).
DensityGrid evolve_forward(const DensityGrid& density, const CoefficientField& coeffs,
                           double t_final, int n_steps);

/// March the expected-payoff surface backward from its own time to t_start:
/// d_t V = -(mu - sigma^2/2) d_x V - (sigma^2/2) d_x^2 V, with mu supplied by
/// the coefficient field (the risk-free rate after risk-neutralization).
/// Boundary values follow the payoff tag's asymptotics; untagged grids use
/// one-sided advection at the edges.
ValueGrid evolve_backward_value(const ValueGrid& value_at_expiry,
                                const CoefficientField& coeffs, double t_start,
                                int n_steps);

/// Discrete duality probe: evolve the density forward by dt, the value
/// backward by dt, and return the absolute change of the pairing
/// integral(p * V). Requires a shared grid and constant coefficients;
/// vol may be zero here (both operators then vanish).
double adjoint_consistency_check(const DensityGrid& density, const ValueGrid& value,
                                 const CoefficientField& coeffs, double dt);

}  // namespace entropt::fpe
