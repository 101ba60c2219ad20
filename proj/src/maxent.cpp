#include "entropt/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

namespace entropt::maxent {

namespace {

constexpr double kRawMassTolerance = 1e-6;
constexpr int kNewtonMaxIterations = 100;
constexpr double kBacktrackFactor = 0.5;

}  // namespace

LogPrice::LogPrice(double value) : value_(value) {
    const double price = std::isfinite(value) ? std::exp(value) : 0.0;
    if (!(price > 0.0) || !std::isfinite(price))
        throw domain_error("LogPrice: value must yield a positive finite price");
}

void ConstraintSpec::validate() const {
    if (!std::isfinite(second_moment_k) || !std::isfinite(first_moment_kprime))
        throw domain_error("ConstraintSpec: targets must be finite");
    if (second_moment_k < 0.0)
        throw domain_error("ConstraintSpec: second moment target must be >= 0");
}

double MaxEntSolution::mean_shift() const {
    if (alpha <= 0.0) throw domain_error("MaxEntSolution: mean_shift requires alpha > 0");
    return beta / alpha;
}

double MaxEntSolution::variance() const {
    if (alpha <= 0.0) throw domain_error("MaxEntSolution: variance requires alpha > 0");
    return 1.0 / alpha;
}

double MaxEntSolution::density(double x) const {
    return std::exp(-0.5 * alpha * x * x + beta * x - log_normalizer);
}

DiscretizedDensity::DiscretizedDensity(UniformGrid grid, std::vector<double> weights,
                                       bool renormalize)
    : grid_(grid), weights_(std::move(weights)) {
    if (grid_.n < 3) throw argument_error("DiscretizedDensity: need at least 3 points");
    if (static_cast<int>(weights_.size()) != grid_.n)
        throw argument_error("DiscretizedDensity: weight count does not match grid");
    for (double w : weights_) {
        if (!std::isfinite(w) || w < 0.0)
            throw domain_error("DiscretizedDensity: weights must be finite and >= 0");
    }
    const double mass = trapezoid(grid_, weights_);
    if (mass <= 0.0) throw domain_error("DiscretizedDensity: total mass must be positive");
    if (!renormalize && std::fabs(mass - 1.0) > kRawMassTolerance)
        throw domain_error("DiscretizedDensity: raw weights integrate to " +
                           std::to_string(mass) + ", expected 1 within 1e-6");
    for (double& w : weights_) w /= mass;
}

DiscretizedDensity::DiscretizedDensity(double grid_lo, double grid_hi, int n_points,
                                       std::vector<double> weights)
    : DiscretizedDensity(UniformGrid(grid_lo, grid_hi, n_points), std::move(weights),
                         /*renormalize=*/false) {}

DiscretizedDensity DiscretizedDensity::uniform(double grid_lo, double grid_hi,
                                               int n_points) {
    UniformGrid g(grid_lo, grid_hi, n_points);
    std::vector<double> w(n_points, 1.0 / (grid_hi - grid_lo));
    return DiscretizedDensity(g, std::move(w), /*renormalize=*/true);
}

DiscretizedDensity DiscretizedDensity::gaussian(double grid_lo, double grid_hi,
                                                int n_points, double mean,
                                                double stddev) {
    if (!(stddev > 0.0) || !std::isfinite(stddev) || !std::isfinite(mean))
        throw domain_error("DiscretizedDensity::gaussian: stddev must be > 0");
    UniformGrid g(grid_lo, grid_hi, n_points);
    std::vector<double> w(n_points);
    for (int i = 0; i < n_points; ++i) {
        const double z = (g.x(i) - mean) / stddev;
        w[i] = std::exp(-0.5 * z * z);
    }
    return DiscretizedDensity(g, std::move(w), /*renormalize=*/true);
}

double DiscretizedDensity::moment(int order) const {
    return trapezoid_weighted(grid_, weights_, [order](double x) {
        double acc = 1.0;
        for (int k = 0; k < order; ++k) acc *= x;
        return acc;
    });
}

LogPrice log_transform(double price) {
    if (!std::isfinite(price) || price <= 0.0)
        throw domain_error("log_transform: price must be positive and finite");
    return LogPrice(std::log(price));
}

double scale_shift(double scale_factor) {
    if (!std::isfinite(scale_factor) || scale_factor <= 0.0)
        throw domain_error("scale_shift: factor must be positive and finite");
    return std::log(scale_factor);
}

double relative_entropy(const DiscretizedDensity& p, const DiscretizedDensity& q) {
    if (!(p.grid() == q.grid()))
        throw argument_error("relative_entropy: densities must share a grid");
    const auto pw = p.weights();
    const auto qw = q.weights();
    const int n = p.grid().n;
    std::vector<double> integrand(n, 0.0);
    for (int i = 0; i < n; ++i) {
        if (pw[i] > 0.0) {
            if (qw[i] <= 0.0)
                throw support_error("relative_entropy: p has mass where q vanishes");
            integrand[i] = pw[i] * std::log(pw[i] / qw[i]);
        }
    }
    return -trapezoid(p.grid(), integrand);
}

MaxEntSolution closed_form_posterior(double alpha, double beta) {
    if (!std::isfinite(alpha) || alpha <= 0.0)
        throw domain_error("closed_form_posterior: alpha must be > 0");
    if (!std::isfinite(beta)) throw domain_error("closed_form_posterior: beta must be finite");
    // Z = sqrt(2 pi / alpha) * exp(beta^2 / (2 alpha)), completing the square.
    const double log_z = 0.5 * std::log(2.0 * std::numbers::pi / alpha) +
                         beta * beta / (2.0 * alpha);
    return MaxEntSolution{alpha, beta, log_z};
}

namespace {

struct ExpFamilyMoments {
    double log_z;       // log of the trapezoid normalizer
    double mean;        // <x>
    double second;      // <x^2>
    double third;       // <x^3>
    double fourth;      // <x^4>
    std::vector<double> density;
};

// Density proportional to base(x) * exp(theta1 x + theta2 x^2), evaluated
// stably by subtracting the max exponent before exponentiating. A non-finite
// log_z marks an unusable parameter point (line search rejects it).
ExpFamilyMoments exp_family_moments(const DiscretizedDensity& base, double theta1,
                                    double theta2) {
    const auto& g = base.grid();
    const auto bw = base.weights();
    const int n = g.n;
    ExpFamilyMoments m;
    m.log_z = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> exponent(n);
    double max_exp = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double x = g.x(i);
        exponent[i] = theta1 * x + theta2 * x * x;
        if (bw[i] > 0.0) {
            if (!std::isfinite(exponent[i])) return m;
            max_exp = std::max(max_exp, exponent[i]);
        }
    }
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i)
        w[i] = (bw[i] > 0.0) ? bw[i] * std::exp(exponent[i] - max_exp) : 0.0;
    const double mass = trapezoid(g, w);
    if (!(mass > 0.0) || !std::isfinite(mass)) return m;
    for (double& v : w) v /= mass;
    m.log_z = std::log(mass) + max_exp;
    m.mean = trapezoid_weighted(g, w, [](double x) { return x; });
    m.second = trapezoid_weighted(g, w, [](double x) { return x * x; });
    m.third = trapezoid_weighted(g, w, [](double x) { return x * x * x; });
    m.fourth = trapezoid_weighted(g, w, [](double x) { return x * x * x * x; });
    m.density = std::move(w);
    return m;
}

}  // namespace

DualResult solve_dual(const ConstraintSpec& constraints, const DiscretizedDensity& base,
                      double tol) {
    constraints.validate();
    if (!(tol > 0.0)) throw domain_error("solve_dual: tol must be > 0");
    const double kp = constraints.first_moment_kprime;
    const double k = constraints.second_moment_k;
    if (constraints.implied_variance() <= 0.0)
        throw infeasibility_error(
            "solve_dual: second moment target must exceed squared first moment target");
    const auto& g = base.grid();
    if (kp <= g.lo || kp >= g.hi)
        throw infeasibility_error("solve_dual: mean target lies outside the grid support");

    // Minimize the convex dual g(theta) = ln Z(theta) - theta1 k' - theta2 k
    // for the density base * exp(theta1 x + theta2 x^2) / Z.
    double theta1 = 0.0, theta2 = 0.0;
    auto dual_value = [&](const ExpFamilyMoments& m, double t1, double t2) {
        return m.log_z - t1 * kp - t2 * k;
    };

    ExpFamilyMoments m = exp_family_moments(base, theta1, theta2);
    if (!std::isfinite(m.log_z))
        throw infeasibility_error("solve_dual: base density degenerates on this grid");
    double residual = std::max(std::fabs(m.mean - kp), std::fabs(m.second - k));
    int iter = 0;
    for (; iter < kNewtonMaxIterations && residual > tol; ++iter) {
        const double g1 = m.mean - kp;
        const double g2 = m.second - k;
        // Hessian = covariance of (x, x^2) under the current density.
        const double h11 = m.second - m.mean * m.mean;
        const double h12 = m.third - m.mean * m.second;
        const double h22 = m.fourth - m.second * m.second;
        const double det = h11 * h22 - h12 * h12;
        if (!(det > 0.0) || !std::isfinite(det))
            throw convergence_error("solve_dual: singular dual Hessian", residual, iter);
        double d1 = -(h22 * g1 - h12 * g2) / det;
        double d2 = -(h11 * g2 - h12 * g1) / det;

        const double f0 = dual_value(m, theta1, theta2);
        double step = 1.0;
        ExpFamilyMoments trial = m;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            const double t1 = theta1 + step * d1;
            const double t2 = theta2 + step * d2;
            trial = exp_family_moments(base, t1, t2);
            if (std::isfinite(trial.log_z)) {
                // Near the optimum the dual decrement falls below roundoff
                // while the gradient is still above tol, so a shrinking
                // moment residual also counts as progress.
                const double trial_res =
                    std::max(std::fabs(trial.mean - kp), std::fabs(trial.second - k));
                if (dual_value(trial, t1, t2) < f0 || trial_res < residual) {
                    theta1 = t1;
                    theta2 = t2;
                    accepted = true;
                    break;
                }
            }
            step *= kBacktrackFactor;
        }
        if (!accepted)
            throw convergence_error("solve_dual: backtracking line search stalled", residual,
                                    iter);
        m = std::move(trial);
        residual = std::max(std::fabs(m.mean - kp), std::fabs(m.second - k));
    }
    if (residual > tol)
        throw convergence_error("solve_dual: residual " + std::to_string(residual) +
                                    " above tolerance after iteration cap",
                                residual, iter);

    const double alpha = -2.0 * theta2;
    // Report the continuum normalizer when the Gaussian interpretation holds;
    // otherwise fall back to the grid normalizer (alpha == 0 means no update).
    const double log_norm =
        alpha > 0.0 ? 0.5 * std::log(2.0 * std::numbers::pi / alpha) +
                          theta1 * theta1 / (2.0 * alpha)
                    : m.log_z;
    DualResult result{
        MaxEntSolution{alpha, theta1, log_norm},
        DiscretizedDensity(g, std::move(m.density), /*renormalize=*/true),
        iter,
        residual,
    };
    return result;
}

MaxEntSolution multipliers_from_market(const MarketParams& params, double dt) {
    params.validate();
    if (!std::isfinite(dt) || dt <= 0.0)
        throw domain_error("multipliers_from_market: dt must be > 0");
    const double sigma_sq = params.sigma * params.sigma;
    const double alpha = 1.0 / (sigma_sq * dt);
    const double beta = params.mu / sigma_sq - 0.5;
    return closed_form_posterior(alpha, beta);
}

}  // namespace entropt::maxent
