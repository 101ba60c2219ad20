#include "entropt/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include "entropt/dynamics.hpp"
#include "entropt/fokker_planck.hpp"
#include "entropt/rng.hpp"

namespace entropt::pricing {

namespace {

constexpr double kTailMassLimit = 1e-10;

/// Neumaier-compensated accumulator; the running error term keeps long sums
/// accurate to one rounding of the final total.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::fabs(sum) >= std::fabs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

void validate_common(double s0, const OptionSpec& option, const MarketParams& params) {
    if (!(s0 > 0.0) || !std::isfinite(s0))
        throw domain_error("pricing: spot must be positive and finite");
    option.validate();
    params.validate();
}

PricingResult make_result(Method method, double rate, double expiry,
                          double undiscounted) {
    PricingResult r;
    r.method = method;
    r.undiscounted_payoff = undiscounted;
    r.premium = std::exp(-rate * expiry) * undiscounted;
    return r;
}

void append_real(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

void append_optional(std::string& out, const std::optional<double>& v) {
    if (v)
        append_real(out, *v);
    else
        out += "null";
}

}  // namespace

const char* method_name(Method m) {
    switch (m) {
        case Method::closed_form: return "closed_form";
        case Method::quadrature: return "quadrature";
        case Method::pde: return "pde";
        case Method::monte_carlo: return "monte_carlo";
    }
    return "unknown";
}

const char* style_name(OptionStyle s) {
    return s == OptionStyle::call ? "call" : "put";
}

MarketParams risk_neutralize(const MarketParams& params) {
    return MarketParams{params.risk_free_rate, params.sigma, params.risk_free_rate};
}

double std_normal_cdf(double x) {
    if (!std::isfinite(x)) throw domain_error("std_normal_cdf: x must be finite");
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

std::pair<double, double> d1_d2(double s0, const OptionSpec& option,
                                const MarketParams& params) {
    validate_common(s0, option, params);
    if (option.strike <= 0.0)
        throw domain_error("d1_d2: zero strike is the degenerate branch; "
                           "pricers handle it directly");
    const double r = params.risk_free_rate;
    const double sig_sqrt_t = params.sigma * std::sqrt(option.expiry);
    const double d1 = (std::log(s0 / option.strike) +
                       (r + 0.5 * params.sigma * params.sigma) * option.expiry) /
                      sig_sqrt_t;
    return {d1, d1 - sig_sqrt_t};
}

PricingResult bs_call(double s0, const OptionSpec& option, const MarketParams& params) {
    validate_common(s0, option, params);
    const double r = params.risk_free_rate;
    const double t = option.expiry;
    if (option.strike == 0.0) {
        // Zero strike pays S_T outright; no d1/d2 evaluation.
        PricingResult res = make_result(Method::closed_form, r, t, s0 * std::exp(r * t));
        res.premium = s0;
        return res;
    }
    const auto [d1, d2] = d1_d2(s0, option, params);
    const double premium = s0 * std_normal_cdf(d1) -
                           std::exp(-r * t) * option.strike * std_normal_cdf(d2);
    PricingResult res;
    res.method = Method::closed_form;
    res.premium = premium;
    res.undiscounted_payoff = std::exp(r * t) * premium;
    res.d1 = d1;
    res.d2 = d2;
    return res;
}

PricingResult bs_put(double s0, const OptionSpec& option, const MarketParams& params) {
    validate_common(s0, option, params);
    const double r = params.risk_free_rate;
    const double t = option.expiry;
    if (option.strike == 0.0) {
        PricingResult res = make_result(Method::closed_form, r, t, 0.0);
        return res;
    }
    const auto [d1, d2] = d1_d2(s0, option, params);
    const double premium = std::exp(-r * t) * option.strike * std_normal_cdf(-d2) -
                           s0 * std_normal_cdf(-d1);
    PricingResult res;
    res.method = Method::closed_form;
    res.premium = premium;
    res.undiscounted_payoff = std::exp(r * t) * premium;
    res.d1 = d1;
    res.d2 = d2;
    return res;
}

PricingResult quadrature_price(double s0, const OptionSpec& option,
                               const MarketParams& params,
                               const QuadratureSpec& grid_spec) {
    validate_common(s0, option, params);
    if (grid_spec.n_points < 3)
        throw argument_error("quadrature_price: need at least 3 nodes");
    if (!(grid_spec.n_log_stds > 0.0))
        throw argument_error("quadrature_price: window width must be > 0");

    const MarketParams rn = risk_neutralize(params);
    const dynamics::LognormalSpec terminal =
        dynamics::terminal_distribution(rn, s0, option.expiry);
    const double m = terminal.log_mean;
    const double s = terminal.log_std;
    const double half_width = grid_spec.n_log_stds * s;

    // Density mass outside the window, and the e^x-weighted analog for the
    // call wing (the exponential tilts the Gaussian by one std^2).
    const double plain_tail = 2.0 * std_normal_cdf(-grid_spec.n_log_stds);
    const double weighted_tail = std_normal_cdf(-(grid_spec.n_log_stds - s));
    if (plain_tail > kTailMassLimit ||
        (option.style == OptionStyle::call && weighted_tail > kTailMassLimit))
        throw truncation_error(
            "quadrature_price: tail mass beyond the truncation window exceeds 1e-10; "
            "widen n_log_stds");

    const bool is_call = option.style == OptionStyle::call;
    if (!is_call && option.strike == 0.0)
        return make_result(Method::quadrature, rn.risk_free_rate, option.expiry, 0.0);

    double lo = m - half_width;
    double hi = m + half_width;
    if (option.strike > 0.0) {
        const double log_k = std::log(option.strike);
        if (is_call)
            lo = std::max(lo, log_k);
        else
            hi = std::min(hi, log_k);
    }
    if (!(hi > lo))
        return make_result(Method::quadrature, rn.risk_free_rate, option.expiry, 0.0);

    int n = grid_spec.n_points;
    if (n % 2 == 0) ++n;  // Simpson needs an even interval count
    const double h = (hi - lo) / (n - 1);
    auto integrand = [&](double x) {
        const double payoff = is_call ? std::exp(x) - option.strike
                                      : option.strike - std::exp(x);
        return payoff * terminal.pdf_log(x);
    };
    double acc = integrand(lo) + integrand(hi);
    for (int i = 1; i + 1 < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * integrand(lo + i * h);
    const double undiscounted = std::max(acc * h / 3.0, 0.0);
    return make_result(Method::quadrature, rn.risk_free_rate, option.expiry, undiscounted);
}

double parity_gap(double call_premium, double put_premium, double s0,
                  const OptionSpec& option, const MarketParams& params) {
    option.validate();
    params.validate();
    const double bound =
        s0 - option.strike * std::exp(-params.risk_free_rate * option.expiry);
    return (call_premium - put_premium) - bound;
}

PricingResult pde_price(double s0, const OptionSpec& option, const MarketParams& params,
                        const PdeGridSpec& grid_spec) {
    validate_common(s0, option, params);
    if (grid_spec.n_space < 16 || grid_spec.n_time < 1)
        throw argument_error("pde_price: grid spec too small");
    if (!(grid_spec.width_stds >= 4.0))
        throw argument_error("pde_price: boundary margin must be at least 4 stds");

    const MarketParams rn = risk_neutralize(params);
    const double r = rn.risk_free_rate;
    const double t = option.expiry;
    const double s = rn.sigma * std::sqrt(t);
    const double x_spot = std::log(s0);
    const double x_strike = option.strike > 0.0 ? std::log(option.strike) : x_spot;
    const double margin =
        grid_spec.width_stds * s + std::fabs(r - 0.5 * rn.sigma * rn.sigma) * t;
    const double x_lo = std::min(x_spot, x_strike) - margin;
    const double x_hi = std::max(x_spot, x_strike) + margin;

    fpe::ValueGrid terminal =
        fpe::ValueGrid::terminal_payoff(x_lo, x_hi, grid_spec.n_space, option, r);
    fpe::ValueGrid at_start = fpe::evolve_backward_value(
        terminal, fpe::CoefficientField::constant(r, rn.sigma), 0.0, grid_spec.n_time);

    const double undiscounted = std::max(at_start.value_at(x_spot), 0.0);
    PricingResult res = make_result(Method::pde, r, t, undiscounted);
    return res;
}

PricingResult mc_price(double s0, const OptionSpec& option, const MarketParams& params,
                       std::int64_t n_paths, std::uint64_t seed) {
    validate_common(s0, option, params);
    if (n_paths < 100) throw domain_error("mc_price: need at least 100 paths");

    const MarketParams rn = risk_neutralize(params);
    const double t = option.expiry;
    const double m = std::log(s0) + (rn.risk_free_rate - 0.5 * rn.sigma * rn.sigma) * t;
    const double s = rn.sigma * std::sqrt(t);
    const bool is_call = option.style == OptionStyle::call;

    CompensatedSum payoff_sum, payoff_sq_sum;
    for (std::int64_t p = 0; p < n_paths; ++p) {
        const double z = rng::standard_normal(seed, static_cast<uint64_t>(p), 0);
        const double price = std::exp(m + s * z);
        const double payoff = is_call ? std::max(price - option.strike, 0.0)
                                      : std::max(option.strike - price, 0.0);
        payoff_sum.add(payoff);
        payoff_sq_sum.add(payoff * payoff);
    }
    const double n = static_cast<double>(n_paths);
    const double mean = payoff_sum.value() / n;
    const double var =
        std::max(payoff_sq_sum.value() - n * mean * mean, 0.0) / (n - 1.0);
    const double discount = std::exp(-rn.risk_free_rate * t);

    PricingResult res = make_result(Method::monte_carlo, rn.risk_free_rate, t, mean);
    res.std_error = discount * std::sqrt(var / n);
    return res;
}

std::string to_json_line(const PricingResult& result, const OptionSpec& option, double s0,
                         const MarketParams& params, const RecordExtras& extras) {
    std::string out;
    out.reserve(256);
    out += "{\"method\":\"";
    out += method_name(result.method);
    out += "\",\"style\":\"";
    out += style_name(option.style);
    out += "\",\"premium\":";
    append_real(out, result.premium);
    out += ",\"d1\":";
    append_optional(out, result.d1);
    out += ",\"d2\":";
    append_optional(out, result.d2);
    out += ",\"std_error\":";
    append_optional(out, result.std_error);
    out += ",\"params\":{\"spot\":";
    append_real(out, s0);
    out += ",\"strike\":";
    append_real(out, option.strike);
    out += ",\"expiry\":";
    append_real(out, option.expiry);
    out += ",\"rate\":";
    append_real(out, params.risk_free_rate);
    out += ",\"sigma\":";
    append_real(out, params.sigma);
    if (extras.paths) {
        out += ",\"paths\":";
        out += std::to_string(*extras.paths);
    }
    if (extras.seed) {
        out += ",\"seed\":";
        out += std::to_string(*extras.seed);
    }
    if (extras.grid) {
        out += ",\"grid\":";
        out += std::to_string(*extras.grid);
    }
    if (extras.steps) {
        out += ",\"steps\":";
        out += std::to_string(*extras.steps);
    }
    if (extras.points) {
        out += ",\"points\":";
        out += std::to_string(*extras.points);
    }
    out += "}}";
    return out;
}

}  // namespace entropt::pricing
