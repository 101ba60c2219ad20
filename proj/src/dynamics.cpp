#include "entropt/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <utility>

#include "entropt/rng.hpp"

namespace entropt::dynamics {

namespace {

void append_real(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

}  // namespace

GaussianKernel::GaussianKernel(double mean_shift_, double variance_, double dt_)
    : mean_shift(mean_shift_), variance(variance_), dt(dt_) {
    if (!std::isfinite(mean_shift) || !std::isfinite(variance) || !std::isfinite(dt))
        throw domain_error("GaussianKernel: fields must be finite");
    if (variance <= 0.0) throw domain_error("GaussianKernel: variance must be > 0");
    if (dt <= 0.0) throw domain_error("GaussianKernel: dt must be > 0");
}

LognormalSpec::LognormalSpec(double log_mean_, double log_std_)
    : log_mean(log_mean_), log_std(log_std_) {
    if (!std::isfinite(log_mean) || !std::isfinite(log_std) || log_std <= 0.0)
        throw domain_error("LognormalSpec: log_std must be finite and > 0");
}

double LognormalSpec::pdf_log(double x) const {
    const double z = (x - log_mean) / log_std;
    return std::exp(-0.5 * z * z) / (log_std * std::sqrt(2.0 * std::numbers::pi));
}

double LognormalSpec::pdf_price(double s) const {
    if (!(s > 0.0)) throw domain_error("LognormalSpec: price must be > 0");
    return pdf_log(std::log(s)) / s;
}

double LognormalSpec::cdf_log(double x) const {
    return 0.5 * std::erfc(-(x - log_mean) / (log_std * std::numbers::sqrt2));
}

double LognormalSpec::mean_price() const {
    return std::exp(log_mean + 0.5 * log_std * log_std);
}

PathEnsemble::PathEnsemble(double initial_price, std::vector<double> times,
                           std::vector<double> log_prices, std::int64_t n_paths,
                           uint64_t seed, const MarketParams& params)
    : initial_price_(initial_price),
      times_(std::move(times)),
      log_prices_(std::move(log_prices)),
      n_paths_(n_paths),
      seed_(seed),
      params_(params) {
    if (!(initial_price_ > 0.0) || !std::isfinite(initial_price_))
        throw domain_error("PathEnsemble: initial price must be positive and finite");
    if (times_.empty() || times_.front() != 0.0)
        throw argument_error("PathEnsemble: times must start at 0");
    for (size_t i = 1; i < times_.size(); ++i)
        if (!(times_[i] > times_[i - 1]))
            throw argument_error("PathEnsemble: times must be strictly increasing");
    if (n_paths_ < 1 ||
        log_prices_.size() != static_cast<size_t>(n_paths_) * times_.size())
        throw argument_error("PathEnsemble: matrix shape mismatch");
    const double log_s0 = std::log(initial_price_);
    const size_t m = times_.size();
    for (std::int64_t p = 0; p < n_paths_; ++p) {
        const double* row = log_prices_.data() + static_cast<size_t>(p) * m;
        if (std::fabs(row[0] - log_s0) > 4e-16 * std::max(1.0, std::fabs(log_s0)))
            throw argument_error("PathEnsemble: column 0 must equal ln(initial_price)");
        for (size_t t = 0; t < m; ++t)
            if (!std::isfinite(row[t]))
                throw domain_error("PathEnsemble: log prices must be finite");
    }
}

std::span<const double> PathEnsemble::path(std::int64_t p) const {
    if (p < 0 || p >= n_paths_) throw argument_error("PathEnsemble: path index out of range");
    const size_t m = times_.size();
    return {log_prices_.data() + static_cast<size_t>(p) * m, m};
}

void PathEnsemble::write_csv(std::ostream& os) const {
    std::string line;
    line.reserve(times_.size() * 20);
    line = "# seed=";
    line += std::to_string(seed_);
    line += " s0=";
    append_real(line, initial_price_);
    line += " mu=";
    append_real(line, params_.mu);
    line += " sigma=";
    append_real(line, params_.sigma);
    line += '\n';
    os << line;

    line.clear();
    for (size_t t = 0; t < times_.size(); ++t) {
        if (t) line += ',';
        append_real(line, times_[t]);
    }
    line += '\n';
    os << line;

    for (std::int64_t p = 0; p < n_paths_; ++p) {
        line.clear();
        const auto row = path(p);
        for (size_t t = 0; t < row.size(); ++t) {
            if (t) line += ',';
            append_real(line, row[t]);
        }
        line += '\n';
        os << line;
    }
}

GaussianKernel transition_kernel(const MarketParams& params, double dt) {
    params.validate();
    if (!std::isfinite(dt) || dt <= 0.0)
        throw domain_error("transition_kernel: dt must be > 0");
    const double sigma_sq = params.sigma * params.sigma;
    return GaussianKernel{(params.mu - 0.5 * sigma_sq) * dt, sigma_sq * dt, dt};
}

GaussianKernel kernel_from_solution(const maxent::MaxEntSolution& solution, double dt) {
    if (!std::isfinite(dt) || dt <= 0.0)
        throw domain_error("kernel_from_solution: dt must be > 0");
    return GaussianKernel{solution.mean_shift(), solution.variance(), dt};
}

double price_transition_density(const GaussianKernel& kernel, double s_from, double s_to) {
    if (!(s_from > 0.0) || !std::isfinite(s_from) || !(s_to > 0.0) || !std::isfinite(s_to))
        throw domain_error("price_transition_density: prices must be positive and finite");
    const double x = std::log(s_to) - std::log(s_from) - kernel.mean_shift;
    const double norm = s_to * std::sqrt(2.0 * std::numbers::pi * kernel.variance);
    return std::exp(-0.5 * x * x / kernel.variance) / norm;
}

GaussianKernel compose_kernels(const GaussianKernel& k1, const GaussianKernel& k2) {
    return GaussianKernel{k1.mean_shift + k2.mean_shift, k1.variance + k2.variance,
                          k1.dt + k2.dt};
}

PathEnsemble sample_paths(const MarketParams& params, double s0, double horizon,
                          int n_steps, std::int64_t n_paths, uint64_t seed) {
    params.validate();
    if (!(s0 > 0.0) || !std::isfinite(s0))
        throw domain_error("sample_paths: s0 must be positive and finite");
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw domain_error("sample_paths: horizon must be > 0");
    if (n_steps < 1) throw domain_error("sample_paths: n_steps must be >= 1");
    if (n_paths < 1) throw domain_error("sample_paths: n_paths must be >= 1");

    const double dt = horizon / n_steps;
    const double drift = (params.mu - 0.5 * params.sigma * params.sigma) * dt;
    const double step_std = params.sigma * std::sqrt(dt);
    const double log_s0 = std::log(s0);
    const size_t n_times = static_cast<size_t>(n_steps) + 1;

    std::vector<double> times(n_times);
    for (size_t t = 0; t < n_times; ++t) times[t] = (t == n_times - 1) ? horizon : t * dt;

    std::vector<double> log_prices(static_cast<size_t>(n_paths) * n_times);
    for (std::int64_t p = 0; p < n_paths; ++p) {
        double* row = log_prices.data() + static_cast<size_t>(p) * n_times;
        row[0] = log_s0;
        double x = log_s0;
        for (int s = 0; s < n_steps; ++s) {
            const double z = rng::standard_normal(seed, static_cast<uint64_t>(p),
                                                  static_cast<uint64_t>(s));
            x += drift + step_std * z;
            row[s + 1] = x;
        }
    }
    return PathEnsemble(s0, std::move(times), std::move(log_prices), n_paths, seed, params);
}

LognormalSpec terminal_distribution(const MarketParams& params, double s0, double t_final) {
    params.validate();
    if (!(s0 > 0.0) || !std::isfinite(s0))
        throw domain_error("terminal_distribution: s0 must be positive and finite");
    if (!std::isfinite(t_final) || t_final <= 0.0)
        throw domain_error("terminal_distribution: t_final must be > 0");
    const double sigma_sq = params.sigma * params.sigma;
    return LognormalSpec{std::log(s0) + (params.mu - 0.5 * sigma_sq) * t_final,
                         params.sigma * std::sqrt(t_final)};
}

}  // namespace entropt::dynamics
