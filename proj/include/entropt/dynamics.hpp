#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "entropt/maxent.hpp"
#include "entropt/types.hpp"

namespace entropt::dynamics {

/// Gaussian transition law of the log price over an elapsed time dt:
/// ln(S'/S) ~ N(mean_shift, variance).
struct GaussianKernel {
    double mean_shift = 0.0;
    double variance = 0.0;
    double dt = 0.0;

    GaussianKernel(double mean_shift_, double variance_, double dt_);
};

/// Terminal log-price distribution: ln S_T ~ N(log_mean, log_std^2), i.e.
/// S_T is lognormal.
struct LognormalSpec {
    double log_mean = 0.0;
    double log_std = 0.0;

    LognormalSpec(double log_mean_, double log_std_);

    double pdf_log(double x) const;    ///< density of ln S_T at x
    double pdf_price(double s) const;  ///< density of S_T at s > 0
    double cdf_log(double x) const;    ///< CDF of ln S_T at x
    double mean_price() const;         ///< E[S_T] = exp(log_mean + log_std^2/2)
};

/// Ensemble of simulated log-price paths on a shared uniform time grid.
/// Row p holds ln S along path p; column 0 is ln(initial_price) everywhere.
class PathEnsemble {
public:
    PathEnsemble(double initial_price, std::vector<double> times,
                 std::vector<double> log_prices, std::int64_t n_paths, uint64_t seed,
                 const MarketParams& params);

    double initial_price() const noexcept { return initial_price_; }
    std::span<const double> times() const noexcept { return times_; }
    std::int64_t n_paths() const noexcept { return n_paths_; }
    int n_times() const noexcept { return static_cast<int>(times_.size()); }
    uint64_t seed() const noexcept { return seed_; }
    const MarketParams& params() const noexcept { return params_; }

    std::span<const double> path(std::int64_t p) const;
    double log_price(std::int64_t p, int t) const { return path(p)[t]; }
    double terminal_log_price(std::int64_t p) const { return path(p)[n_times() - 1]; }

    /// CSV: one metadata comment line, a header row of times, one row of
    /// log prices per path. All reals carry 17 significant digits.
    void write_csv(std::ostream& os) const;

private:
    double initial_price_;
    std::vector<double> times_;
    std::vector<double> log_prices_;  // row-major, n_paths x n_times
    std::int64_t n_paths_;
    uint64_t seed_;
    MarketParams params_;
};

// --- Operations -----------------------------------------------------------

/// Kernel over a step dt: mean (mu - sigma^2/2) dt, variance sigma^2 dt.
GaussianKernel transition_kernel(const MarketParams& params, double dt);

/// Kernel implied by maxent multipliers over a step dt.
GaussianKernel kernel_from_solution(const maxent::MaxEntSolution& solution, double dt);

/// Transition density of the price itself (lognormal in s_to).
double price_transition_density(const GaussianKernel& kernel, double s_from, double s_to);

/// Chapman-Kolmogorov composition: means, variances and durations add.
GaussianKernel compose_kernels(const GaussianKernel& k1, const GaussianKernel& k2);

/// Simulate paths with uniform steps dt = horizon / n_steps. Deterministic in
/// the seed: the normal draw for (path p, step s) depends only on
/// (seed, p, s), so ensembles are reproducible under any execution order.
PathEnsemble sample_paths(const MarketParams& params, double s0, double horizon,
                          int n_steps, std::int64_t n_paths, uint64_t seed);

/// Terminal distribution after t_final under the drift in params.
LognormalSpec terminal_distribution(const MarketParams& params, double s0, double t_final);

}  // namespace entropt::dynamics
