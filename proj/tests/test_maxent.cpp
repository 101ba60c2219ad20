#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "entropt/maxent.hpp"
#include "oracles.hpp"

using namespace entropt;
using namespace entropt::maxent;

namespace {

DiscretizedDensity gaussian_density(double lo, double hi, int n, double mean,
                                    double stddev) {
    return DiscretizedDensity::gaussian(lo, hi, n, mean, stddev);
}

}  // namespace

TEST_CASE("log_transform basics") {
    CHECK(log_transform(1.0).value() == 0.0);
    CHECK(log_transform(std::exp(1.0)).value() == doctest::Approx(1.0).epsilon(1e-15));
    // Frozen from a high-precision evaluation of ln(100).
    CHECK(log_transform(100.0).value() == doctest::Approx(4.605170185988092).epsilon(1e-15));

    // Round trip price -> log -> price.
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(1e-6, 1e6);
    for (int i = 0; i < 200; ++i) {
        const double price = u(gen);
        CHECK(log_transform(price).price() == doctest::Approx(price).epsilon(1e-14));
    }

    CHECK_THROWS_AS(log_transform(0.0), domain_error);
    CHECK_THROWS_AS(log_transform(-3.0), domain_error);
    CHECK_THROWS_AS(log_transform(std::numeric_limits<double>::infinity()), domain_error);
    CHECK_THROWS_AS(log_transform(std::nan("")), domain_error);
}

TEST_CASE("scale_shift solves the composition equation") {
    CHECK(scale_shift(1.0) == 0.0);
    CHECK(scale_shift(2.0) + scale_shift(3.0) ==
          doctest::Approx(scale_shift(6.0)).epsilon(1e-15));
    // Frozen from a high-precision evaluation of ln(10).
    CHECK(scale_shift(10.0) == doctest::Approx(2.302585092994046).epsilon(1e-15));

    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(std::log(1e-3), std::log(1e3));
    for (int i = 0; i < 1000; ++i) {
        const double l = std::exp(u(gen));
        const double lp = std::exp(u(gen));
        CHECK(std::fabs(scale_shift(l) + scale_shift(lp) - scale_shift(l * lp)) < 1e-12);
    }

    CHECK_THROWS_AS(scale_shift(0.0), domain_error);
    CHECK_THROWS_AS(scale_shift(-1.0), domain_error);
}

TEST_CASE("DiscretizedDensity construction and normalization") {
    // Accepted: raw integral within 1e-6 of 1; stored weights renormalized.
    const int n = 101;
    std::vector<double> w(n, (1.0 + 5e-7) / 10.0);
    DiscretizedDensity d(-5.0, 5.0, n, w);
    CHECK(trapezoid(d.grid(), d.weights()) == doctest::Approx(1.0).epsilon(1e-14));

    // Rejected: off by more than 1e-6.
    std::vector<double> bad(n, 0.9 / 10.0);
    CHECK_THROWS_AS(DiscretizedDensity(-5.0, 5.0, n, bad), domain_error);

    // Rejected: negative weights.
    std::vector<double> neg(n, 1.0 / 10.0);
    neg[3] = -neg[3];
    CHECK_THROWS_AS(DiscretizedDensity(-5.0, 5.0, n, neg), domain_error);

    CHECK_THROWS_AS(DiscretizedDensity(-5.0, 5.0, 2, {0.1, 0.1}), argument_error);
}

TEST_CASE("relative_entropy against the Gaussian closed form") {
    const auto p = gaussian_density(-12.0, 12.0, 4001, 0.0, 1.0);

    SUBCASE("identical densities score zero") {
        CHECK(std::fabs(relative_entropy(p, p)) < 1e-12);
    }
    SUBCASE("variance mismatch") {
        const auto q = gaussian_density(-12.0, 12.0, 4001, 0.0, std::sqrt(2.0));
        const double expected = -oracles::gaussian_kl(0.0, 1.0, 0.0, 2.0);
        CHECK(expected == doctest::Approx(-0.09657359027997265).epsilon(1e-12));
        CHECK(relative_entropy(p, q) == doctest::Approx(expected).epsilon(1e-9));
    }
    SUBCASE("mean shift") {
        const auto ps = gaussian_density(-12.0, 12.0, 4001, 0.5, 1.0);
        const auto q = gaussian_density(-12.0, 12.0, 4001, 0.0, 1.0);
        CHECK(relative_entropy(ps, q) == doctest::Approx(-0.125).epsilon(1e-9));
    }
    SUBCASE("entropy is never positive") {
        std::mt19937_64 gen(23);
        std::uniform_real_distribution<double> um(-2.0, 2.0), us(0.5, 3.0);
        for (int i = 0; i < 50; ++i) {
            const auto a = gaussian_density(-8.0, 8.0, 2001, um(gen), us(gen));
            const auto b = gaussian_density(-8.0, 8.0, 2001, um(gen), us(gen));
            CHECK(relative_entropy(a, b) <= 1e-12);
        }
    }
    SUBCASE("mismatched grids are rejected") {
        const auto q = gaussian_density(-12.0, 12.0, 2001, 0.0, 1.0);
        CHECK_THROWS_AS(relative_entropy(p, q), argument_error);
    }
    SUBCASE("support violations are rejected") {
        const int n = 101;
        std::vector<double> half(n, 0.0);
        for (int i = 0; i < n / 2; ++i) half[i] = 0.2;  // uniform on the left half
        const double mass = 0.2 * 5.0 - 0.5 * 0.2 * 0.1;  // trapezoid of the step
        for (auto& v : half) v /= mass;
        DiscretizedDensity q(-5.0, 5.0, n, half);
        DiscretizedDensity u = DiscretizedDensity::uniform(-5.0, 5.0, n);
        CHECK_THROWS_AS(relative_entropy(u, q), support_error);
    }
}

TEST_CASE("closed_form_posterior completes the square") {
    SUBCASE("standard normal increment") {
        const auto sol = closed_form_posterior(1.0, 0.0);
        CHECK(sol.mean_shift() == 0.0);
        CHECK(sol.variance() == 1.0);
    }
    SUBCASE("shifted, scaled") {
        const auto sol = closed_form_posterior(4.0, 2.0);
        CHECK(sol.mean_shift() == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(sol.variance() == doctest::Approx(0.25).epsilon(1e-15));
    }
    SUBCASE("market values") {
        // alpha = 1/(sigma^2 dt) at sigma=0.2, dt=0.01; beta = mu/sigma^2 - 1/2.
        const double alpha = 1.0 / (0.04 * 0.01);
        const double beta = 0.05 / 0.04 - 0.5;
        const auto sol = closed_form_posterior(alpha, beta);
        CHECK(sol.mean_shift() == doctest::Approx(3.0e-4).epsilon(1e-12));
        CHECK(sol.variance() == doctest::Approx(4.0e-4).epsilon(1e-12));
    }
    SUBCASE("normalizer makes the density integrate to one") {
        const auto sol = closed_form_posterior(2500.0, 0.75);
        const double mean = sol.mean_shift(), std = std::sqrt(sol.variance());
        const int n = 4001;
        const double lo = mean - 10.0 * std, hi = mean + 10.0 * std;
        const double h = (hi - lo) / (n - 1);
        double acc = 0.5 * (sol.density(lo) + sol.density(hi));
        for (int i = 1; i + 1 < n; ++i) acc += sol.density(lo + i * h);
        CHECK(acc * h == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(closed_form_posterior(0.0, 1.0), domain_error);
    CHECK_THROWS_AS(closed_form_posterior(-2.0, 1.0), domain_error);
}

TEST_CASE("multipliers_from_market") {
    CHECK(multipliers_from_market({0.0, 1.0, 0.0}, 1.0).alpha == 1.0);
    CHECK(multipliers_from_market({0.0, 1.0, 0.0}, 1.0).beta == -0.5);

    // Drift equal to half the variance kills beta exactly.
    const double sigma = 0.3;
    const auto sol = multipliers_from_market({0.5 * sigma * sigma, sigma, 0.0}, 0.37);
    CHECK(sol.beta == 0.0);

    const auto market = multipliers_from_market({0.05, 0.2, 0.0}, 1.0 / 252.0);
    CHECK(market.alpha == doctest::Approx(6300.0).epsilon(1e-12));
    CHECK(market.beta == doctest::Approx(0.75).epsilon(1e-12));

    CHECK_THROWS_AS(multipliers_from_market({0.05, 0.0, 0.0}, 1.0), domain_error);
    CHECK_THROWS_AS(multipliers_from_market({0.05, 0.2, 0.0}, 0.0), domain_error);
    CHECK_THROWS_AS(multipliers_from_market({0.05, 0.2, 0.0}, -1.0), domain_error);
}

TEST_CASE("solve_dual recovers the closed-form multipliers") {
    // Targets generated from the closed-form kernel at mu=0.05, sigma=0.2,
    // dt=0.01 (the oracle for this recovery).
    const double alpha_true = 2500.0;
    const double beta_true = 0.75;
    const double kp = beta_true / alpha_true;
    const double k = 1.0 / alpha_true + kp * kp;
    const double std_true = std::sqrt(1.0 / alpha_true);

    const auto base =
        DiscretizedDensity::uniform(kp - 8.0 * std_true, kp + 8.0 * std_true, 801);
    const auto res = solve_dual({k, kp}, base, 1e-10);
    CHECK(res.solution.alpha == doctest::Approx(alpha_true).epsilon(1e-6));
    CHECK(res.solution.beta == doctest::Approx(beta_true).epsilon(1e-6));
    CHECK(res.residual <= 1e-10);

    SUBCASE("duality consistency: returned density reproduces the targets") {
        CHECK(std::fabs(res.density.moment(1) - kp) < 1e-10);
        CHECK(std::fabs(res.density.moment(2) - k) < 1e-10);
    }
}

TEST_CASE("solve_dual with symmetric targets has no drift multiplier") {
    const auto base = DiscretizedDensity::uniform(-10.0, 10.0, 2001);
    const auto res = solve_dual({1.0, 0.0}, base, 1e-10);
    CHECK(std::fabs(res.solution.beta) < 1e-8);
    CHECK(res.solution.alpha == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("solve_dual rejects degenerate and infeasible targets") {
    const auto base = DiscretizedDensity::uniform(-5.0, 5.0, 501);
    CHECK_THROWS_AS(solve_dual({0.25, 0.5}, base, 1e-10), infeasibility_error);
    CHECK_THROWS_AS(solve_dual({0.2, 0.5}, base, 1e-10), infeasibility_error);
    CHECK_THROWS_AS(solve_dual({1.0, 7.0}, base, 1e-10), infeasibility_error);
    CHECK_THROWS_AS(solve_dual({1.0, 0.0}, base, 0.0), domain_error);
}

TEST_CASE("solve_dual converges across randomized feasible targets") {
    const auto base = DiscretizedDensity::uniform(-6.0, 6.0, 1201);
    std::mt19937_64 gen(271828);
    std::uniform_real_distribution<double> um(-2.0, 2.0), uv(0.05, 2.0);
    for (int i = 0; i < 25; ++i) {
        const double mean = um(gen);
        const double var = uv(gen);
        const ConstraintSpec targets{var + mean * mean, mean};
        const auto res = solve_dual(targets, base, 1e-10);
        CHECK(res.residual <= 1e-10);
        CHECK(std::fabs(res.density.moment(1) - targets.first_moment_kprime) < 1e-9);
        CHECK(std::fabs(res.density.moment(2) - targets.second_moment_k) < 1e-9);
        CHECK(res.solution.alpha > 0.0);
    }
}

TEST_CASE("solve_dual fixed point: no information, no update") {
    const auto base = gaussian_density(-8.0, 8.0, 1601, 0.3, 0.7);
    const double kp = base.moment(1);
    const double k = base.moment(2);
    const auto res = solve_dual({k, kp}, base, 1e-10);

    double linf = 0.0;
    for (int i = 0; i < base.grid().n; ++i)
        linf = std::max(linf, std::fabs(res.density.weight(i) - base.weight(i)));
    CHECK(linf < 1e-10);
    CHECK(std::fabs(res.solution.alpha) < 1e-8);
    CHECK(std::fabs(res.solution.beta) < 1e-8);
}

TEST_CASE("solved density maximizes entropy over feasible perturbations") {
    const double kp = 0.1, k = 0.5 * 0.5 + kp * kp;
    const auto base = DiscretizedDensity::uniform(-6.0, 6.0, 601);
    const auto res = solve_dual({k, kp}, base, 1e-12);
    const double best = relative_entropy(res.density, base);

    const auto& g = res.density.grid();
    const int n = g.n;
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> u(-1.0, 1.0);

    for (int trial = 0; trial < 20; ++trial) {
        // Random smooth direction, then project out the components that move
        // normalization or either constrained moment.
        std::vector<double> delta(n);
        const double a1 = u(gen), a2 = u(gen), a3 = u(gen), w1 = u(gen) * 2.0;
        for (int i = 0; i < n; ++i) {
            const double x = g.x(i);
            delta[i] = a1 * std::sin(1.7 * x + w1) + a2 * std::cos(0.9 * x) +
                       a3 * std::sin(2.3 * x);
        }
        // Basis used to cancel the first three moments of the perturbation.
        std::vector<std::vector<double>> basis(3, std::vector<double>(n));
        for (int i = 0; i < n; ++i) {
            const double x = g.x(i);
            basis[0][i] = std::exp(-x * x);
            basis[1][i] = x * std::exp(-x * x);
            basis[2][i] = x * x * std::exp(-x * x);
        }
        auto moment_of = [&](const std::vector<double>& v, int order) {
            return trapezoid_weighted(g, v, [order](double x) {
                double acc = 1.0;
                for (int j = 0; j < order; ++j) acc *= x;
                return acc;
            });
        };
        // Solve the 3x3 system sum_j c_j * M[order][j] = -moment(delta, order).
        double mat[3][3], rhs[3];
        for (int r = 0; r < 3; ++r) {
            rhs[r] = -moment_of(delta, r);
            for (int c = 0; c < 3; ++c) mat[r][c] = moment_of(basis[c], r);
        }
        for (int col = 0; col < 3; ++col) {  // tiny Gaussian elimination
            int piv = col;
            for (int r = col + 1; r < 3; ++r)
                if (std::fabs(mat[r][col]) > std::fabs(mat[piv][col])) piv = r;
            std::swap(mat[col], mat[piv]);
            std::swap(rhs[col], rhs[piv]);
            for (int r = col + 1; r < 3; ++r) {
                const double f = mat[r][col] / mat[col][col];
                for (int c = col; c < 3; ++c) mat[r][c] -= f * mat[col][c];
                rhs[r] -= f * rhs[col];
            }
        }
        double coef[3];
        for (int r = 2; r >= 0; --r) {
            double acc = rhs[r];
            for (int c = r + 1; c < 3; ++c) acc -= mat[r][c] * coef[c];
            coef[r] = acc / mat[r][r];
        }
        for (int i = 0; i < n; ++i)
            delta[i] += coef[0] * basis[0][i] + coef[1] * basis[1][i] +
                        coef[2] * basis[2][i];

        // Scale so the perturbed weights stay non-negative.
        double t = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i)
            if (delta[i] < 0.0) t = std::min(t, -0.5 * res.density.weight(i) / delta[i]);
        if (!std::isfinite(t)) continue;
        std::vector<double> perturbed(n);
        for (int i = 0; i < n; ++i)
            perturbed[i] = res.density.weight(i) + t * delta[i];
        DiscretizedDensity q(g.lo, g.hi, n, perturbed);

        // Same moments, lower (or equal) entropy.
        CHECK(std::fabs(q.moment(1) - kp) < 1e-8);
        CHECK(std::fabs(q.moment(2) - k) < 1e-8);
        CHECK(relative_entropy(q, base) <= best + 1e-12);
    }
}

TEST_CASE("transition density is a function of the log ratio only") {
    const auto sol = closed_form_posterior(2500.0, 0.75);
    const double step_std = std::sqrt(sol.variance());
    std::mt19937_64 gen(41);
    std::uniform_real_distribution<double> us(0.5, 200.0), ux(-5.0, 5.0), ul(-4.0, 4.0);
    for (int i = 0; i < 300; ++i) {
        const double s_from = us(gen);
        const double s_to = s_from * std::exp(ux(gen) * step_std);
        const double l = std::exp(ul(gen));
        const double base = sol.transition_density_log(std::log(s_from), std::log(s_to));
        const double scaled =
            sol.transition_density_log(std::log(l * s_from), std::log(l * s_to));
        CHECK(std::fabs(scaled / base - 1.0) < 1e-12);
    }
}
