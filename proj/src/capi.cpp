#include "entropt/entropt.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "entropt/dynamics.hpp"
#include "entropt/fokker_planck.hpp"
#include "entropt/maxent.hpp"
#include "entropt/pricing.hpp"

namespace {

thread_local char tl_error[512] = "";

void set_error(const char* msg) {
    std::strncpy(tl_error, msg, sizeof(tl_error) - 1);
    tl_error[sizeof(tl_error) - 1] = '\0';
}

/// Run the body and translate exceptions into status codes.
template <typename F>
ept_status guarded(F&& body) {
    try {
        tl_error[0] = '\0';
        return body();
    } catch (const entropt::domain_error& e) {
        set_error(e.what());
        return EPT_ERR_INVALID_ARGUMENT;
    } catch (const entropt::argument_error& e) {
        set_error(e.what());
        return EPT_ERR_INVALID_ARGUMENT;
    } catch (const entropt::support_error& e) {
        set_error(e.what());
        return EPT_ERR_INVALID_ARGUMENT;
    } catch (const entropt::error& e) {  // infeasible / convergence / truncation / scheme
        set_error(e.what());
        return EPT_ERR_NUMERICAL;
    } catch (const std::exception& e) {
        set_error(e.what());
        return EPT_ERR_NUMERICAL;
    }
}

ept_status require(bool ok, const char* msg) {
    if (!ok) {
        set_error(msg);
        return EPT_ERR_INVALID_ARGUMENT;
    }
    return EPT_OK;
}

entropt::OptionStyle to_style(int style) {
    if (style != EPT_CALL && style != EPT_PUT)
        throw entropt::domain_error("style must be EPT_CALL or EPT_PUT");
    return style == EPT_CALL ? entropt::OptionStyle::call : entropt::OptionStyle::put;
}

int method_code(entropt::pricing::Method m) {
    using entropt::pricing::Method;
    switch (m) {
        case Method::closed_form: return EPT_METHOD_CLOSED_FORM;
        case Method::quadrature: return EPT_METHOD_QUADRATURE;
        case Method::pde: return EPT_METHOD_PDE;
        case Method::monte_carlo: return EPT_METHOD_MONTE_CARLO;
    }
    return -1;
}

void fill_result(const entropt::pricing::PricingResult& r, ept_pricing_result* out) {
    out->premium = r.premium;
    out->undiscounted_payoff = r.undiscounted_payoff;
    out->d1 = r.d1.value_or(0.0);
    out->d2 = r.d2.value_or(0.0);
    out->std_error = r.std_error.value_or(0.0);
    out->method = method_code(r.method);
    out->has_d1_d2 = r.d1.has_value() ? 1 : 0;
    out->has_std_error = r.std_error.has_value() ? 1 : 0;
}

}  // namespace

struct ept_paths {
    entropt::dynamics::PathEnsemble ensemble;
};

struct ept_density {
    entropt::fpe::DensityGrid grid;
};

extern "C" {

const char* ept_version(void) { return "1.0.0"; }

const char* ept_last_error(void) { return tl_error; }

ept_status ept_price_closed(double spot, double strike, double expiry, double rate,
                            double sigma, int style, ept_pricing_result* out) {
    if (auto rc = require(out != nullptr, "out must not be null")) return rc;
    return guarded([&]() {
        const entropt::OptionSpec option{to_style(style), strike, expiry};
        const entropt::MarketParams params{rate, sigma, rate};
        const auto res = option.style == entropt::OptionStyle::call
                             ? entropt::pricing::bs_call(spot, option, params)
                             : entropt::pricing::bs_put(spot, option, params);
        fill_result(res, out);
        return EPT_OK;
    });
}

ept_status ept_price_quadrature(double spot, double strike, double expiry, double rate,
                                double sigma, int style, int n_points,
                                ept_pricing_result* out) {
    if (auto rc = require(out != nullptr, "out must not be null")) return rc;
    return guarded([&]() {
        const entropt::OptionSpec option{to_style(style), strike, expiry};
        const entropt::MarketParams params{rate, sigma, rate};
        entropt::pricing::QuadratureSpec spec;
        if (n_points > 0) spec.n_points = n_points;
        fill_result(entropt::pricing::quadrature_price(spot, option, params, spec), out);
        return EPT_OK;
    });
}

ept_status ept_price_pde(double spot, double strike, double expiry, double rate,
                         double sigma, int style, int n_space, int n_time,
                         ept_pricing_result* out) {
    if (auto rc = require(out != nullptr, "out must not be null")) return rc;
    return guarded([&]() {
        const entropt::OptionSpec option{to_style(style), strike, expiry};
        const entropt::MarketParams params{rate, sigma, rate};
        entropt::pricing::PdeGridSpec spec;
        if (n_space > 0) spec.n_space = n_space;
        if (n_time > 0) spec.n_time = n_time;
        fill_result(entropt::pricing::pde_price(spot, option, params, spec), out);
        return EPT_OK;
    });
}

ept_status ept_price_mc(double spot, double strike, double expiry, double rate,
                        double sigma, int style, long long n_paths,
                        unsigned long long seed, ept_pricing_result* out) {
    if (auto rc = require(out != nullptr, "out must not be null")) return rc;
    return guarded([&]() {
        const entropt::OptionSpec option{to_style(style), strike, expiry};
        const entropt::MarketParams params{rate, sigma, rate};
        fill_result(entropt::pricing::mc_price(spot, option, params, n_paths, seed), out);
        return EPT_OK;
    });
}

ept_status ept_parity_gap(double call_premium, double put_premium, double spot,
                          double strike, double expiry, double rate, double* out_gap) {
    if (auto rc = require(out_gap != nullptr, "out_gap must not be null")) return rc;
    return guarded([&]() {
        const entropt::OptionSpec option{entropt::OptionStyle::call, strike, expiry};
        const entropt::MarketParams params{rate, 1.0, rate};
        *out_gap =
            entropt::pricing::parity_gap(call_premium, put_premium, spot, option, params);
        return EPT_OK;
    });
}

ept_status ept_pricing_json(const ept_pricing_result* result,
                            const ept_record_params* params, char* buf, size_t buf_size) {
    if (auto rc = require(result && params && buf && buf_size > 0,
                          "result, params and buf must not be null"))
        return rc;
    return guarded([&]() {
        entropt::pricing::PricingResult r;
        r.premium = result->premium;
        r.undiscounted_payoff = result->undiscounted_payoff;
        switch (result->method) {
            case EPT_METHOD_CLOSED_FORM:
                r.method = entropt::pricing::Method::closed_form;
                break;
            case EPT_METHOD_QUADRATURE:
                r.method = entropt::pricing::Method::quadrature;
                break;
            case EPT_METHOD_PDE: r.method = entropt::pricing::Method::pde; break;
            case EPT_METHOD_MONTE_CARLO:
                r.method = entropt::pricing::Method::monte_carlo;
                break;
            default: throw entropt::domain_error("unknown method code");
        }
        if (result->has_d1_d2) {
            r.d1 = result->d1;
            r.d2 = result->d2;
        }
        if (result->has_std_error) r.std_error = result->std_error;

        const entropt::OptionSpec option{to_style(params->style), params->strike,
                                         params->expiry};
        const entropt::MarketParams market{params->rate, params->sigma, params->rate};
        entropt::pricing::RecordExtras extras;
        if (params->paths > 0) extras.paths = params->paths;
        if (params->has_seed) extras.seed = params->seed;
        if (params->grid > 0) extras.grid = params->grid;
        if (params->steps > 0) extras.steps = params->steps;
        if (params->points > 0) extras.points = params->points;
        const std::string line =
            entropt::pricing::to_json_line(r, option, params->spot, market, extras);
        if (line.size() + 1 > buf_size)
            throw entropt::argument_error("buffer too small for the JSON record");
        std::memcpy(buf, line.c_str(), line.size() + 1);
        return EPT_OK;
    });
}

ept_status ept_multipliers_from_market(double mu, double sigma, double dt,
                                       double* out_alpha, double* out_beta) {
    if (auto rc = require(out_alpha && out_beta, "outputs must not be null")) return rc;
    return guarded([&]() {
        const auto sol =
            entropt::maxent::multipliers_from_market({mu, sigma, 0.0}, dt);
        *out_alpha = sol.alpha;
        *out_beta = sol.beta;
        return EPT_OK;
    });
}

ept_status ept_solve_dual(double second_moment, double first_moment, double grid_lo,
                          double grid_hi, int n_points, double tol,
                          ept_maxent_result* out) {
    if (auto rc = require(out != nullptr, "out must not be null")) return rc;
    return guarded([&]() {
        const auto base =
            entropt::maxent::DiscretizedDensity::uniform(grid_lo, grid_hi, n_points);
        const auto res = entropt::maxent::solve_dual(
            {second_moment, first_moment}, base, tol > 0.0 ? tol : 1e-10);
        out->alpha = res.solution.alpha;
        out->beta = res.solution.beta;
        const bool gaussian = res.solution.alpha > 0.0;
        out->mean_shift = gaussian ? res.solution.mean_shift()
                                   : std::numeric_limits<double>::quiet_NaN();
        out->variance = gaussian ? res.solution.variance()
                                 : std::numeric_limits<double>::quiet_NaN();
        out->residual = res.residual;
        out->iterations = res.iterations;
        return EPT_OK;
    });
}

ept_status ept_simulate(double s0, double mu, double sigma, double horizon, int n_steps,
                        long long n_paths, unsigned long long seed, ept_paths** out) {
    if (auto rc = require(out != nullptr, "out must not be null")) return rc;
    *out = nullptr;
    return guarded([&]() {
        auto ensemble = entropt::dynamics::sample_paths({mu, sigma, 0.0}, s0, horizon,
                                                        n_steps, n_paths, seed);
        *out = new ept_paths{std::move(ensemble)};
        return EPT_OK;
    });
}

void ept_paths_free(ept_paths* paths) { delete paths; }

long long ept_paths_count(const ept_paths* paths) {
    return paths ? paths->ensemble.n_paths() : 0;
}

int ept_paths_times_count(const ept_paths* paths) {
    return paths ? paths->ensemble.n_times() : 0;
}

ept_status ept_paths_times(const ept_paths* paths, double* out, size_t capacity) {
    if (auto rc = require(paths && out, "paths and out must not be null")) return rc;
    return guarded([&]() {
        const auto times = paths->ensemble.times();
        if (capacity < times.size())
            throw entropt::argument_error("capacity below the number of times");
        std::memcpy(out, times.data(), times.size() * sizeof(double));
        return EPT_OK;
    });
}

ept_status ept_paths_row(const ept_paths* paths, long long path_index, double* out,
                         size_t capacity) {
    if (auto rc = require(paths && out, "paths and out must not be null")) return rc;
    return guarded([&]() {
        const auto row = paths->ensemble.path(path_index);
        if (capacity < row.size())
            throw entropt::argument_error("capacity below the number of times");
        std::memcpy(out, row.data(), row.size() * sizeof(double));
        return EPT_OK;
    });
}

ept_status ept_paths_write_csv(const ept_paths* paths, const char* file_path) {
    if (auto rc = require(paths && file_path, "paths and file_path must not be null"))
        return rc;
    return guarded([&]() {
        std::ofstream os(file_path, std::ios::binary);
        if (!os) {
            set_error("cannot open file for writing");
            return EPT_ERR_IO;
        }
        paths->ensemble.write_csv(os);
        os.flush();
        if (!os) {
            set_error("write failed");
            return EPT_ERR_IO;
        }
        return EPT_OK;
    });
}

ept_status ept_density_create_delta(double x_lo, double x_hi, int n_points, double center,
                                    ept_density** out) {
    if (auto rc = require(out != nullptr, "out must not be null")) return rc;
    *out = nullptr;
    return guarded([&]() {
        *out = new ept_density{
            entropt::fpe::DensityGrid::near_delta(x_lo, x_hi, n_points, center)};
        return EPT_OK;
    });
}

ept_status ept_density_create_gaussian(double x_lo, double x_hi, int n_points, double mean,
                                       double stddev, ept_density** out) {
    if (auto rc = require(out != nullptr, "out must not be null")) return rc;
    *out = nullptr;
    return guarded([&]() {
        *out = new ept_density{
            entropt::fpe::DensityGrid::gaussian(x_lo, x_hi, n_points, mean, stddev)};
        return EPT_OK;
    });
}

void ept_density_free(ept_density* density) { delete density; }

ept_status ept_density_evolve(ept_density* density, double mu, double sigma,
                              double t_final, int n_steps) {
    if (auto rc = require(density != nullptr, "density must not be null")) return rc;
    return guarded([&]() {
        density->grid = entropt::fpe::evolve_forward(
            density->grid, entropt::fpe::CoefficientField::constant(mu, sigma), t_final,
            n_steps);
        return EPT_OK;
    });
}

ept_status ept_density_info(const ept_density* density, double* x_lo, double* x_hi,
                            int* n_points, double* time) {
    if (auto rc = require(density != nullptr, "density must not be null")) return rc;
    if (x_lo) *x_lo = density->grid.grid().lo;
    if (x_hi) *x_hi = density->grid.grid().hi;
    if (n_points) *n_points = density->grid.grid().n;
    if (time) *time = density->grid.time();
    return EPT_OK;
}

ept_status ept_density_values(const ept_density* density, double* out, size_t capacity) {
    if (auto rc = require(density && out, "density and out must not be null")) return rc;
    return guarded([&]() {
        const auto values = density->grid.values();
        if (capacity < values.size())
            throw entropt::argument_error("capacity below the node count");
        std::memcpy(out, values.data(), values.size() * sizeof(double));
        return EPT_OK;
    });
}

ept_status ept_density_write_csv(const ept_density* density, const char* file_path) {
    if (auto rc = require(density && file_path, "density and file_path must not be null"))
        return rc;
    return guarded([&]() {
        std::ofstream os(file_path, std::ios::binary);
        if (!os) {
            set_error("cannot open file for writing");
            return EPT_ERR_IO;
        }
        density->grid.write_csv(os);
        os.flush();
        if (!os) {
            set_error("write failed");
            return EPT_ERR_IO;
        }
        return EPT_OK;
    });
}

}  // extern "C"
