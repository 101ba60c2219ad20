#include "entropt/fokker_planck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <utility>

namespace entropt::fpe {

namespace {

constexpr double kUserMassTolerance = 1e-6;
constexpr double kLeakageTolerance = 1e-4;

void append_real(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

void write_grid_csv(std::ostream& os, const UniformGrid& g, std::span<const double> values,
                    double time) {
    std::string line = "# time=";
    append_real(line, time);
    line += " x_lo=";
    append_real(line, g.lo);
    line += " x_hi=";
    append_real(line, g.hi);
    line += " n=";
    line += std::to_string(g.n);
    line += "\nx,value\n";
    os << line;
    for (int i = 0; i < g.n; ++i) {
        line.clear();
        append_real(line, g.x(i));
        line += ',';
        append_real(line, values[i]);
        line += '\n';
        os << line;
    }
}

struct Tridiag {
    std::vector<double> lower, diag, upper;

    explicit Tridiag(int n) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}
    int size() const { return static_cast<int>(diag.size()); }
};

// y = (I + c * T) x
std::vector<double> apply_shifted(const Tridiag& t, double c, std::span<const double> x) {
    const int n = t.size();
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) {
        double acc = x[i] + c * t.diag[i] * x[i];
        if (i > 0) acc += c * t.lower[i] * x[i - 1];
        if (i + 1 < n) acc += c * t.upper[i] * x[i + 1];
        y[i] = acc;
    }
    return y;
}

// Solve (I - c * T) x = rhs in place by the Thomas algorithm.
void solve_shifted(const Tridiag& t, double c, std::vector<double>& rhs) {
    const int n = t.size();
    std::vector<double> diag(n), upper(n);
    for (int i = 0; i < n; ++i) {
        diag[i] = 1.0 - c * t.diag[i];
        upper[i] = -c * t.upper[i];
    }
    for (int i = 1; i < n; ++i) {
        const double lower = -c * t.lower[i];
        const double m = lower / diag[i - 1];
        diag[i] -= m * upper[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (int i = n - 2; i >= 0; --i) rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

double eval_vol_squared(const CoefficientField& coeffs, double x, double t,
                        bool allow_zero_vol) {
    const double sigma = coeffs.vol_of(x, t);
    if (!std::isfinite(sigma) || sigma < 0.0 || (!allow_zero_vol && sigma == 0.0))
        throw domain_error("coefficient error: vol_of must be > 0 on the grid");
    return sigma * sigma;
}

double eval_drift(const CoefficientField& coeffs, double x, double t) {
    const double mu = coeffs.drift_of(x, t);
    if (!std::isfinite(mu)) throw domain_error("coefficient error: drift_of must be finite");
    return mu;
}

// Generator of the conservative forward equation with zero-flux boundaries.
// Interior rows are the divided flux differences; the end rows use half
// cells, which makes the trapezoid mass an exact invariant of the stencil.
Tridiag forward_generator(const UniformGrid& g, const CoefficientField& coeffs, double t,
                          bool allow_zero_vol) {
    const int n = g.n;
    const double h = g.spacing();
    Tridiag op(n);

    std::vector<double> b(n), a(n);
    for (int i = 0; i < n; ++i) {
        const double x = g.x(i);
        b[i] = eval_vol_squared(coeffs, x, t, allow_zero_vol);
        a[i] = eval_drift(coeffs, x, t) - 0.5 * b[i];
    }

    // flux through interface i+1/2: c_lo * p_i + c_hi * p_{i+1}
    std::vector<double> c_lo(n - 1), c_hi(n - 1);
    for (int i = 0; i + 1 < n; ++i) {
        const double a_face = 0.5 * (a[i] + a[i + 1]);
        const double b_face = 0.5 * (b[i] + b[i + 1]);
        double adv_lo, adv_hi;
        if (std::fabs(a_face) * h > b_face) {  // cell Peclet above 2: upwind
            adv_lo = a_face > 0.0 ? a_face : 0.0;
            adv_hi = a_face > 0.0 ? 0.0 : a_face;
        } else {
            adv_lo = 0.5 * a_face;
            adv_hi = 0.5 * a_face;
        }
        c_lo[i] = adv_lo + b[i] / (2.0 * h);
        c_hi[i] = adv_hi - b[i + 1] / (2.0 * h);
    }

    op.diag[0] = -2.0 * c_lo[0] / h;
    op.upper[0] = -2.0 * c_hi[0] / h;
    for (int i = 1; i + 1 < n; ++i) {
        op.lower[i] = c_lo[i - 1] / h;
        op.diag[i] = (c_hi[i - 1] - c_lo[i]) / h;
        op.upper[i] = -c_hi[i] / h;
    }
    op.lower[n - 1] = 2.0 * c_lo[n - 2] / h;
    op.diag[n - 1] = 2.0 * c_hi[n - 2] / h;
    return op;
}

enum class EdgeRule { dirichlet, one_sided_advection };

// Generator of the backward equation in the time-to-expiry direction:
// d_tau V = (mu - sigma^2/2) d_x V + (sigma^2/2) d_x^2 V.
Tridiag backward_generator(const UniformGrid& g, const CoefficientField& coeffs, double t,
                           EdgeRule edges, bool allow_zero_vol) {
    const int n = g.n;
    const double h = g.spacing();
    Tridiag op(n);
    for (int i = 1; i + 1 < n; ++i) {
        const double x = g.x(i);
        const double b = eval_vol_squared(coeffs, x, t, allow_zero_vol);
        const double a = eval_drift(coeffs, x, t) - 0.5 * b;
        const double diff = b / (2.0 * h * h);
        if (std::fabs(a) * h > b) {
            if (a > 0.0) {
                op.lower[i] = diff;
                op.diag[i] = -2.0 * diff - a / h;
                op.upper[i] = diff + a / h;
            } else {
                op.lower[i] = diff - a / h;
                op.diag[i] = -2.0 * diff + a / h;
                op.upper[i] = diff;
            }
        } else {
            op.lower[i] = diff - a / (2.0 * h);
            op.diag[i] = -2.0 * diff;
            op.upper[i] = diff + a / (2.0 * h);
        }
    }
    if (edges == EdgeRule::one_sided_advection) {
        const double b0 = eval_vol_squared(coeffs, g.x(0), t, allow_zero_vol);
        const double a0 = eval_drift(coeffs, g.x(0), t) - 0.5 * b0;
        op.diag[0] = -a0 / h;
        op.upper[0] = a0 / h;
        const double bn = eval_vol_squared(coeffs, g.x(n - 1), t, allow_zero_vol);
        const double an = eval_drift(coeffs, g.x(n - 1), t) - 0.5 * bn;
        op.lower[n - 1] = -an / h;
        op.diag[n - 1] = an / h;
    }
    // Dirichlet edges stay zero rows; the stepper pins those nodes directly.
    return op;
}

void require_finite(std::span<const double> values, const char* what) {
    for (double v : values)
        if (!std::isfinite(v)) throw scheme_error(std::string(what) + ": non-finite value");
}

struct BoundaryValues {
    double lo, hi;
};

BoundaryValues tagged_boundary(const PayoffTag& tag, const UniformGrid& g,
                               double time_to_expiry) {
    if (tag.style == OptionStyle::call) {
        const double forward = std::exp(g.hi + tag.rate * time_to_expiry);
        return {0.0, forward - tag.strike};
    }
    return {tag.strike, 0.0};
}

}  // namespace

DensityGrid::DensityGrid(raw_tag, UniformGrid grid, std::vector<double> values,
                         double time)
    : grid_(grid), values_(std::move(values)), time_(time) {}

DensityGrid::DensityGrid(double x_lo, double x_hi, int n_points,
                         std::vector<double> values, double time)
    : grid_(UniformGrid(x_lo, x_hi, n_points)), values_(std::move(values)), time_(time) {
    if (n_points < 16) throw argument_error("DensityGrid: need at least 16 points");
    if (static_cast<int>(values_.size()) != n_points)
        throw argument_error("DensityGrid: value count does not match grid");
    for (double v : values_)
        if (!std::isfinite(v) || v < 0.0)
            throw domain_error("DensityGrid: values must be finite and >= 0");
    const double m = trapezoid(grid_, values_);
    if (m <= 0.0 || std::fabs(m - 1.0) > kUserMassTolerance)
        throw domain_error("DensityGrid: values integrate to " + std::to_string(m) +
                           ", expected 1 within 1e-6");
    for (double& v : values_) v /= m;
}

DensityGrid DensityGrid::gaussian(double x_lo, double x_hi, int n_points, double mean,
                                  double stddev, double time) {
    if (!(stddev > 0.0) || !std::isfinite(stddev))
        throw domain_error("DensityGrid::gaussian: stddev must be > 0");
    if (n_points < 16) throw argument_error("DensityGrid: need at least 16 points");
    UniformGrid g(x_lo, x_hi, n_points);
    std::vector<double> v(n_points);
    for (int i = 0; i < n_points; ++i) {
        const double z = (g.x(i) - mean) / stddev;
        v[i] = std::exp(-0.5 * z * z);
    }
    const double m = trapezoid(g, v);
    if (!(m > 0.0)) throw domain_error("DensityGrid::gaussian: vanishing mass on grid");
    for (double& w : v) w /= m;
    return DensityGrid(raw_tag{}, g, std::move(v), time);
}

DensityGrid DensityGrid::near_delta(double x_lo, double x_hi, int n_points, double center,
                                    double time) {
    UniformGrid g(x_lo, x_hi, n_points);
    return gaussian(x_lo, x_hi, n_points, center, g.spacing(), time);
}

double DensityGrid::mass() const { return trapezoid(grid_, values_); }

double DensityGrid::mean() const {
    return trapezoid_weighted(grid_, values_, [](double x) { return x; });
}

double DensityGrid::variance() const {
    const double m = mean();
    return trapezoid_weighted(grid_, values_,
                              [m](double x) { return (x - m) * (x - m); });
}

double DensityGrid::min_value() const {
    return *std::min_element(values_.begin(), values_.end());
}

void DensityGrid::write_csv(std::ostream& os) const {
    write_grid_csv(os, grid_, values_, time_);
}

ValueGrid::ValueGrid(double x_lo, double x_hi, int n_points, std::vector<double> values,
                     double time, std::optional<PayoffTag> payoff)
    : grid_(UniformGrid(x_lo, x_hi, n_points)),
      values_(std::move(values)),
      time_(time),
      payoff_(payoff) {
    if (n_points < 16) throw argument_error("ValueGrid: need at least 16 points");
    if (static_cast<int>(values_.size()) != n_points)
        throw argument_error("ValueGrid: value count does not match grid");
    for (double v : values_)
        if (!std::isfinite(v)) throw domain_error("ValueGrid: values must be finite");
}

ValueGrid ValueGrid::terminal_payoff(double x_lo, double x_hi, int n_points,
                                     const OptionSpec& option, double rate) {
    option.validate();
    UniformGrid g(x_lo, x_hi, n_points);
    std::vector<double> v(n_points);
    for (int i = 0; i < n_points; ++i) {
        const double s = std::exp(g.x(i));
        v[i] = option.style == OptionStyle::call ? std::max(s - option.strike, 0.0)
                                                 : std::max(option.strike - s, 0.0);
    }
    return ValueGrid(x_lo, x_hi, n_points, std::move(v), option.expiry,
                     PayoffTag{option.style, option.strike, rate, option.expiry});
}

double ValueGrid::value_at(double x) const {
    const double h = grid_.spacing();
    if (!(x >= grid_.lo + h) || !(x <= grid_.hi - h))
        throw argument_error("ValueGrid: query point outside grid interior");
    // 4-point Lagrange interpolation on the nodes bracketing x.
    int j = static_cast<int>((x - grid_.lo) / h);
    j = std::clamp(j, 1, grid_.n - 3);
    const double x0 = grid_.x(j - 1), x1 = grid_.x(j), x2 = grid_.x(j + 1),
                 x3 = grid_.x(j + 2);
    const double l0 = (x - x1) * (x - x2) * (x - x3) / ((x0 - x1) * (x0 - x2) * (x0 - x3));
    const double l1 = (x - x0) * (x - x2) * (x - x3) / ((x1 - x0) * (x1 - x2) * (x1 - x3));
    const double l2 = (x - x0) * (x - x1) * (x - x3) / ((x2 - x0) * (x2 - x1) * (x2 - x3));
    const double l3 = (x - x0) * (x - x1) * (x - x2) / ((x3 - x0) * (x3 - x1) * (x3 - x2));
    return l0 * values_[j - 1] + l1 * values_[j] + l2 * values_[j + 1] + l3 * values_[j + 2];
}

double ValueGrid::monotonicity_gap() const {
    if (!payoff_) return 0.0;
    double worst = 0.0;
    for (int i = 0; i + 1 < grid_.n; ++i) {
        const double step = values_[i + 1] - values_[i];
        if (payoff_->style == OptionStyle::call)
            worst = std::max(worst, -step);
        else
            worst = std::max(worst, step);
    }
    return worst;
}

void ValueGrid::write_csv(std::ostream& os) const {
    write_grid_csv(os, grid_, values_, time_);
}

DensityGrid evolve_forward(const DensityGrid& density, const CoefficientField& coeffs,
                           double t_final, int n_steps) {
    if (!coeffs.drift_of || !coeffs.vol_of)
        throw argument_error("evolve_forward: coefficient field is empty");
    if (!(t_final > density.time()))
        throw argument_error("evolve_forward: t_final must exceed the density's time");
    if (n_steps < 1) throw argument_error("evolve_forward: n_steps must be >= 1");

    const UniformGrid& g = density.grid();
    const double t0 = density.time();
    const double dt = (t_final - t0) / n_steps;
    std::vector<double> p(density.values().begin(), density.values().end());
    const double mass0 = trapezoid(g, p);

    Tridiag op_now = forward_generator(g, coeffs, t0, /*allow_zero_vol=*/false);
    for (int step = 0; step < n_steps; ++step) {
        const double t_next = (step + 1 == n_steps) ? t_final : t0 + (step + 1) * dt;
        Tridiag op_next = forward_generator(g, coeffs, t_next, /*allow_zero_vol=*/false);
        std::vector<double> rhs = apply_shifted(op_now, 0.5 * dt, p);
        solve_shifted(op_next, 0.5 * dt, rhs);
        p = std::move(rhs);
        require_finite(p, "evolve_forward");
        const double mass = trapezoid(g, p);
        if (std::fabs(mass - mass0) > kLeakageTolerance)
            throw truncation_error(
                "evolve_forward: probability leaked through the boundaries; widen the grid");
        op_now = std::move(op_next);
    }
    return DensityGrid(DensityGrid::raw_tag{}, g, std::move(p), t_final);
}

ValueGrid evolve_backward_value(const ValueGrid& value_at_expiry,
                                const CoefficientField& coeffs, double t_start,
                                int n_steps) {
    if (!coeffs.drift_of || !coeffs.vol_of)
        throw argument_error("evolve_backward_value: coefficient field is empty");
    if (!(t_start < value_at_expiry.time()))
        throw argument_error("evolve_backward_value: t_start must precede the value time");
    if (n_steps < 1) throw argument_error("evolve_backward_value: n_steps must be >= 1");

    const UniformGrid& g = value_at_expiry.grid();
    const double expiry = value_at_expiry.time();
    const double dt = (expiry - t_start) / n_steps;
    const auto& payoff = value_at_expiry.payoff();
    const EdgeRule edges =
        payoff ? EdgeRule::dirichlet : EdgeRule::one_sided_advection;

    std::vector<std::string> warnings;
    if (payoff) {
        const BoundaryValues now =
            tagged_boundary(*payoff, g, payoff->expiry - expiry);
        const auto vals = value_at_expiry.values();
        const double scale = std::max(1.0, std::fabs(now.hi));
        if (std::fabs(vals.front() - now.lo) > 1e-6 * scale ||
            std::fabs(vals.back() - now.hi) > 1e-6 * scale)
            warnings.push_back(
                "boundary values disagree with the declared payoff asymptotics");
    }

    std::vector<double> v(value_at_expiry.values().begin(), value_at_expiry.values().end());
    // March in time-to-expiry tau, anchoring tagged boundaries to the
    // contract expiry rather than to this leg's start time.
    Tridiag op_now =
        backward_generator(g, coeffs, expiry, edges, /*allow_zero_vol=*/false);
    for (int step = 0; step < n_steps; ++step) {
        const double t_next =
            (step + 1 == n_steps) ? t_start : expiry - (step + 1) * dt;
        Tridiag op_next =
            backward_generator(g, coeffs, t_next, edges, /*allow_zero_vol=*/false);
        std::vector<double> rhs = apply_shifted(op_now, 0.5 * dt, v);
        if (payoff) {
            const BoundaryValues bv = tagged_boundary(*payoff, g, payoff->expiry - t_next);
            rhs.front() = bv.lo;
            rhs.back() = bv.hi;
        }
        solve_shifted(op_next, 0.5 * dt, rhs);
        v = std::move(rhs);
        require_finite(v, "evolve_backward_value");
        op_now = std::move(op_next);
    }
    ValueGrid out(g.lo, g.hi, g.n, std::move(v), t_start, payoff);
    out.warnings_ = std::move(warnings);
    return out;
}

double adjoint_consistency_check(const DensityGrid& density, const ValueGrid& value,
                                 const CoefficientField& coeffs, double dt) {
    if (!(density.grid() == value.grid()))
        throw argument_error("adjoint_consistency_check: grids must match");
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw argument_error("adjoint_consistency_check: dt must be > 0");
    // Spot-check that the coefficients do not vary over the probe window.
    const UniformGrid& g = density.grid();
    const double t0 = density.time();
    for (double x : {g.lo, 0.5 * (g.lo + g.hi), g.hi}) {
        for (double t : {t0, t0 + 0.5 * dt, t0 + dt}) {
            if (coeffs.drift_of(x, t) != coeffs.drift_of(g.lo, t0) ||
                coeffs.vol_of(x, t) != coeffs.vol_of(g.lo, t0))
                throw argument_error(
                    "adjoint_consistency_check: coefficients must be constant");
        }
    }

    const int n = g.n;
    std::vector<double> p(density.values().begin(), density.values().end());
    std::vector<double> v(value.values().begin(), value.values().end());

    const Tridiag fwd = forward_generator(g, coeffs, t0, /*allow_zero_vol=*/true);
    const EdgeRule edges =
        value.payoff() ? EdgeRule::dirichlet : EdgeRule::one_sided_advection;
    const Tridiag bwd = backward_generator(g, coeffs, t0, edges, /*allow_zero_vol=*/true);

    std::vector<double> p_next = apply_shifted(fwd, 0.5 * dt, p);
    solve_shifted(fwd, 0.5 * dt, p_next);

    std::vector<double> v_prev = apply_shifted(bwd, 0.5 * dt, v);
    if (value.payoff()) {
        const double tau = value.payoff()->expiry - (value.time() - dt);
        const BoundaryValues bv = tagged_boundary(*value.payoff(), g, tau);
        v_prev.front() = bv.lo;
        v_prev.back() = bv.hi;
    }
    solve_shifted(bwd, 0.5 * dt, v_prev);

    std::vector<double> prod_before(n), prod_after(n);
    for (int i = 0; i < n; ++i) {
        prod_before[i] = p[i] * v_prev[i];
        prod_after[i] = p_next[i] * v[i];
    }
    return std::fabs(trapezoid(g, prod_after) - trapezoid(g, prod_before));
}

}  // namespace entropt::fpe
