/* C interface to the entropic option-pricing library.
 *
 * All functions return EPT_OK on success or an EPT_ERR_* code on failure;
 * ept_last_error() describes the most recent failure on the calling thread.
 * Objects returned through ept_*_create/ept_simulate are owned by the caller
 * and released with the matching *_free function.
 */
#ifndef ENTROPT_H
#define ENTROPT_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef int ept_status;

#define EPT_OK 0
#define EPT_ERR_INVALID_ARGUMENT 1 /* bad inputs or domain violations */
#define EPT_ERR_NUMERICAL 2        /* infeasible, non-convergent, or unstable */
#define EPT_ERR_IO 3               /* file could not be written */

#define EPT_CALL 0
#define EPT_PUT 1

#define EPT_METHOD_CLOSED_FORM 0
#define EPT_METHOD_QUADRATURE 1
#define EPT_METHOD_PDE 2
#define EPT_METHOD_MONTE_CARLO 3

const char* ept_version(void);

/* Message for the last failure on this thread; empty string when none. */
const char* ept_last_error(void);

/* --- Pricing ----------------------------------------------------------- */

typedef struct ept_pricing_result {
    double premium;
    double undiscounted_payoff;
    double d1;        /* valid when has_d1_d2 != 0 */
    double d2;        /* valid when has_d1_d2 != 0 */
    double std_error; /* valid when has_std_error != 0 */
    int method;       /* EPT_METHOD_* */
    int has_d1_d2;
    int has_std_error;
} ept_pricing_result;

ept_status ept_price_closed(double spot, double strike, double expiry, double rate,
                            double sigma, int style, ept_pricing_result* out);

ept_status ept_price_quadrature(double spot, double strike, double expiry, double rate,
                                double sigma, int style, int n_points,
                                ept_pricing_result* out);

ept_status ept_price_pde(double spot, double strike, double expiry, double rate,
                         double sigma, int style, int n_space, int n_time,
                         ept_pricing_result* out);

ept_status ept_price_mc(double spot, double strike, double expiry, double rate,
                        double sigma, int style, long long n_paths,
                        unsigned long long seed, ept_pricing_result* out);

/* (call - put) - (spot - strike * exp(-rate * expiry)) */
ept_status ept_parity_gap(double call_premium, double put_premium, double spot,
                          double strike, double expiry, double rate, double* out_gap);

/* Inputs echoed into the params{} object of the JSON record. paths/grid/
 * steps/points are included only when positive; seed requires has_seed. */
typedef struct ept_record_params {
    double spot, strike, expiry, rate, sigma;
    int style;
    long long paths;
    unsigned long long seed;
    int has_seed;
    int grid;
    int steps;
    int points;
} ept_record_params;

/* One-line JSON record (no trailing newline), NUL-terminated into buf. */
ept_status ept_pricing_json(const ept_pricing_result* result,
                            const ept_record_params* params, char* buf, size_t buf_size);

/* --- Maximum-entropy multipliers ---------------------------------------- */

/* alpha = 1 / (sigma^2 dt), beta = mu / sigma^2 - 1/2. */
ept_status ept_multipliers_from_market(double mu, double sigma, double dt,
                                       double* out_alpha, double* out_beta);

typedef struct ept_maxent_result {
    double alpha;
    double beta;
    double mean_shift; /* beta / alpha; NaN when alpha == 0 */
    double variance;   /* 1 / alpha;   NaN when alpha == 0 */
    double residual;
    int iterations;
} ept_maxent_result;

/* Newton solve of the two-moment dual on a uniform base density over
 * [grid_lo, grid_hi] with n_points nodes. */
ept_status ept_solve_dual(double second_moment, double first_moment, double grid_lo,
                          double grid_hi, int n_points, double tol,
                          ept_maxent_result* out);

/* --- Path simulation ----------------------------------------------------- */

typedef struct ept_paths ept_paths;

ept_status ept_simulate(double s0, double mu, double sigma, double horizon, int n_steps,
                        long long n_paths, unsigned long long seed, ept_paths** out);
void ept_paths_free(ept_paths* paths);

long long ept_paths_count(const ept_paths* paths);
int ept_paths_times_count(const ept_paths* paths);
ept_status ept_paths_times(const ept_paths* paths, double* out, size_t capacity);
ept_status ept_paths_row(const ept_paths* paths, long long path_index, double* out,
                         size_t capacity);
ept_status ept_paths_write_csv(const ept_paths* paths, const char* file_path);

/* --- Density evolution (constant coefficients) --------------------------- */

typedef struct ept_density ept_density;

/* Delta-like start: Gaussian whose std is one grid spacing. */
ept_status ept_density_create_delta(double x_lo, double x_hi, int n_points, double center,
                                    ept_density** out);
ept_status ept_density_create_gaussian(double x_lo, double x_hi, int n_points, double mean,
                                       double stddev, ept_density** out);
void ept_density_free(ept_density* density);

/* Advance the handle's density in place from its current time to t_final. */
ept_status ept_density_evolve(ept_density* density, double mu, double sigma,
                              double t_final, int n_steps);
ept_status ept_density_info(const ept_density* density, double* x_lo, double* x_hi,
                            int* n_points, double* time);
ept_status ept_density_values(const ept_density* density, double* out, size_t capacity);
ept_status ept_density_write_csv(const ept_density* density, const char* file_path);

#ifdef __cplusplus
}
#endif

#endif /* ENTROPT_H */
