#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "entropt/types.hpp"

namespace entropt::pricing {

enum class Method { closed_form, quadrature, pde, monte_carlo };

const char* method_name(Method m);
const char* style_name(OptionStyle s);

/// Premium plus diagnostics. The premium is always the discounted value of
/// undiscounted_payoff; d1/d2 are populated by the closed form and std_error
/// by Monte Carlo.
struct PricingResult {
    double premium = 0.0;
    double undiscounted_payoff = 0.0;
    Method method = Method::closed_form;
    std::optional<double> d1;
    std::optional<double> d2;
    std::optional<double> std_error;
};

/// Quadrature controls: node count of the composite Simpson rule (rounded up
/// to an odd count) and the half-width of the integration window in units of
/// the terminal log std.
struct QuadratureSpec {
    int n_points = 4001;
    double n_log_stds = 12.0;
};

/// Backward-solve controls: spatial nodes, time steps, and the margin kept
/// between the interesting region and the grid boundary, in terminal log
/// stds.
struct PdeGridSpec {
    int n_space = 400;
    int n_time = 400;
    double width_stds = 8.0;
};

/// Optional numerics echoed into the params object of the JSON record.
struct RecordExtras {
    std::optional<std::int64_t> paths;
    std::optional<std::uint64_t> seed;
    std::optional<int> grid;
    std::optional<int> steps;
    std::optional<int> points;
};

// --- Operations -----------------------------------------------------------

/// Replace the drift by the risk-free rate; idempotent.
MarketParams risk_neutralize(const MarketParams& params);

/// Standard normal CDF via the complementary error function; absolute error
/// well below 1e-12.
double std_normal_cdf(double x);

/// d1 = [ln(s0/K) + (r + sigma^2/2) T] / (sigma sqrt(T)), d2 = d1 - sigma
/// sqrt(T). Requires a strictly positive strike; the zero-strike contract is
/// short-circuited inside the pricers instead.
std::pair<double, double> d1_d2(double s0, const OptionSpec& option,
                                const MarketParams& params);

/// Closed-form call premium s0 N(d1) - e^{-rT} K N(d2).
PricingResult bs_call(double s0, const OptionSpec& option, const MarketParams& params);

/// Closed-form put premium e^{-rT} K N(-d2) - s0 N(-d1).
PricingResult bs_put(double s0, const OptionSpec& option, const MarketParams& params);

/// Discounted expected payoff by Simpson quadrature against the risk-neutral
/// lognormal terminal density.
PricingResult quadrature_price(double s0, const OptionSpec& option,
                               const MarketParams& params,
                               const QuadratureSpec& grid_spec = {});

/// Residual of C - P = s0 - K e^{-rT}.
double parity_gap(double call_premium, double put_premium, double s0,
                  const OptionSpec& option, const MarketParams& params);

/// Premium from the backward value equation on a log-price grid, read at
/// ln(s0) by cubic interpolation.
PricingResult pde_price(double s0, const OptionSpec& option, const MarketParams& params,
                        const PdeGridSpec& grid_spec = {});

/// Plain Monte Carlo on risk-neutral terminal prices; deterministic per
/// seed. Payoff sums use compensated accumulation so that estimates sharing
/// a seed satisfy pathwise identities to roundoff.
PricingResult mc_price(double s0, const OptionSpec& option, const MarketParams& params,
                       std::int64_t n_paths, std::uint64_t seed);

/// One-line JSON record with fixed field names:
/// method, style, premium, d1, d2, std_error, params{...}. Reals carry 17
/// significant digits; absent diagnostics serialize as null.
std::string to_json_line(const PricingResult& result, const OptionSpec& option, double s0,
                         const MarketParams& params, const RecordExtras& extras = {});

}  // namespace entropt::pricing
