#pragma once

#include <span>
#include <vector>

#include "entropt/grid.hpp"
#include "entropt/types.hpp"

namespace entropt::maxent {

/// Natural log of a strictly positive, finite price.
class LogPrice {
public:
    explicit LogPrice(double value);
    double value() const noexcept { return value_; }
    double price() const { return std::exp(value_); }

private:
    double value_;
};

/// Moment targets for the transition update: the mean-square log change
/// (continuity) and the mean log change (directionality).
struct ConstraintSpec {
    double second_moment_k = 0.0;    ///< target for <(d ln S)^2>, >= 0
    double first_moment_kprime = 0.0;  ///< target for <ln(S'/S)>

    void validate() const;
    /// Implied variance k - k'^2; positive iff targets are non-degenerate.
    double implied_variance() const {
        return second_moment_k - first_moment_kprime * first_moment_kprime;
    }
};

/// Lagrange multipliers of the updated transition density together with its
/// log normalizer. For alpha > 0 the density is Gaussian in the log change
/// with mean beta/alpha and variance 1/alpha.
struct MaxEntSolution {
    double alpha = 0.0;
    double beta = 0.0;
    double log_normalizer = 0.0;

    double mean_shift() const;  ///< beta / alpha (requires alpha > 0)
    double variance() const;    ///< 1 / alpha (requires alpha > 0)

    /// Density of the log change x, exp(-alpha/2 x^2 + beta x) / Z.
    double density(double x) const;

    /// Transition density P(ln S' | ln S); depends on the arguments only
    /// through their difference, which makes scale invariance manifest.
    double transition_density_log(double log_s_from, double log_s_to) const {
        return density(log_s_to - log_s_from);
    }
};

struct DualResult;

/// Probability density sampled on a uniform grid, normalized so that the
/// trapezoid-rule integral is 1. Raw weights whose integral is off by more
/// than 1e-6 are rejected instead of silently rescaled.
class DiscretizedDensity {
public:
    DiscretizedDensity(double grid_lo, double grid_hi, int n_points,
                       std::vector<double> weights);

    static DiscretizedDensity uniform(double grid_lo, double grid_hi, int n_points);
    static DiscretizedDensity gaussian(double grid_lo, double grid_hi, int n_points,
                                       double mean, double stddev);

    const UniformGrid& grid() const noexcept { return grid_; }
    std::span<const double> weights() const noexcept { return weights_; }
    double weight(int i) const { return weights_[i]; }

    double moment(int order) const;  ///< trapezoid integral of x^order * p(x)

private:
    DiscretizedDensity(UniformGrid grid, std::vector<double> weights, bool renormalize);

    UniformGrid grid_;
    std::vector<double> weights_;

    friend DualResult solve_dual(const ConstraintSpec&, const DiscretizedDensity&, double);
};

/// Output of the numerical dual optimization.
struct DualResult {
    MaxEntSolution solution;
    DiscretizedDensity density;  ///< exponential-family density on the base grid
    int iterations = 0;
    double residual = 0.0;  ///< max absolute moment mismatch at exit
};

// --- Operations -----------------------------------------------------------

/// ln(price). Rejects non-positive or non-finite prices.
LogPrice log_transform(double price);

/// The additive shift ln(l) that a rescaling of prices by l > 0 induces on
/// the log representation; satisfies scale_shift(l) + scale_shift(l') ==
/// scale_shift(l * l').
double scale_shift(double scale_factor);

/// Relative entropy -integral p ln(p/q); non-positive, zero iff p == q.
/// Densities must share a grid, and q must be positive wherever p is.
double relative_entropy(const DiscretizedDensity& p, const DiscretizedDensity& q);

/// Closed-form posterior for given multipliers: Gaussian in the log change
/// with mean beta/alpha and variance 1/alpha. Requires alpha > 0.
MaxEntSolution closed_form_posterior(double alpha, double beta);

/// Recover (alpha, beta) from moment targets by damped Newton iteration on
/// the convex dual. The returned density reproduces both targets within tol.
/// alpha may come out exactly 0 when the targets equal the base moments (no
/// information, no update).
DualResult solve_dual(const ConstraintSpec& constraints, const DiscretizedDensity& base,
                      double tol = 1e-10);

/// Multipliers implied by market parameters over a step dt:
/// alpha = 1/(sigma^2 dt), beta = mu/sigma^2 - 1/2.
MaxEntSolution multipliers_from_market(const MarketParams& params, double dt);

}  // namespace entropt::maxent
