#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "entropt/entropt.h"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("version and error reporting") {
    CHECK(std::strlen(ept_version()) > 0);

    ept_pricing_result out;
    CHECK(ept_price_closed(100.0, 100.0, 1.0, 0.05, 0.2, EPT_CALL, &out) == EPT_OK);
    CHECK(std::strlen(ept_last_error()) == 0);

    CHECK(ept_price_closed(-1.0, 100.0, 1.0, 0.05, 0.2, EPT_CALL, &out) ==
          EPT_ERR_INVALID_ARGUMENT);
    CHECK(std::strlen(ept_last_error()) > 0);

    CHECK(ept_price_closed(100.0, 100.0, 1.0, 0.05, 0.2, 7, &out) ==
          EPT_ERR_INVALID_ARGUMENT);
    CHECK(ept_price_closed(100.0, 100.0, 1.0, 0.05, 0.2, EPT_CALL, nullptr) ==
          EPT_ERR_INVALID_ARGUMENT);
}

TEST_CASE("four pricing routes agree through the C surface") {
    ept_pricing_result closed, quad, pde, mc;
    REQUIRE(ept_price_closed(100.0, 100.0, 1.0, 0.05, 0.2, EPT_CALL, &closed) == EPT_OK);
    REQUIRE(ept_price_quadrature(100.0, 100.0, 1.0, 0.05, 0.2, EPT_CALL, 0, &quad) ==
            EPT_OK);
    REQUIRE(ept_price_pde(100.0, 100.0, 1.0, 0.05, 0.2, EPT_CALL, 400, 400, &pde) ==
            EPT_OK);
    REQUIRE(ept_price_mc(100.0, 100.0, 1.0, 0.05, 0.2, EPT_CALL, 200000, 11, &mc) ==
            EPT_OK);

    CHECK(closed.method == EPT_METHOD_CLOSED_FORM);
    CHECK(closed.has_d1_d2 == 1);
    CHECK(closed.has_std_error == 0);
    CHECK(quad.method == EPT_METHOD_QUADRATURE);
    CHECK(quad.has_d1_d2 == 0);
    CHECK(pde.method == EPT_METHOD_PDE);
    CHECK(mc.method == EPT_METHOD_MONTE_CARLO);
    CHECK(mc.has_std_error == 1);

    CHECK(std::fabs(quad.premium / closed.premium - 1.0) < 1e-6);
    CHECK(std::fabs(pde.premium / closed.premium - 1.0) < 1e-3);
    CHECK(std::fabs(mc.premium - closed.premium) < 3.0 * mc.std_error);
    CHECK(std::fabs(closed.premium - std::exp(-0.05) * closed.undiscounted_payoff) <
          1e-12 * closed.premium);
}

TEST_CASE("parity gap through the C surface") {
    ept_pricing_result call, put;
    REQUIRE(ept_price_closed(100.0, 100.0, 1.0, 0.05, 0.2, EPT_CALL, &call) == EPT_OK);
    REQUIRE(ept_price_closed(100.0, 100.0, 1.0, 0.05, 0.2, EPT_PUT, &put) == EPT_OK);
    double gap = 1.0;
    REQUIRE(ept_parity_gap(call.premium, put.premium, 100.0, 100.0, 1.0, 0.05, &gap) ==
            EPT_OK);
    CHECK(std::fabs(gap) < 1e-12);
}

TEST_CASE("JSON record formatting") {
    ept_pricing_result mc;
    REQUIRE(ept_price_mc(100.0, 100.0, 1.0, 0.05, 0.2, EPT_PUT, 1000, 5, &mc) == EPT_OK);

    ept_record_params rp{};
    rp.spot = 100.0;
    rp.strike = 100.0;
    rp.expiry = 1.0;
    rp.rate = 0.05;
    rp.sigma = 0.2;
    rp.style = EPT_PUT;
    rp.paths = 1000;
    rp.seed = 5;
    rp.has_seed = 1;

    char buf[1024];
    REQUIRE(ept_pricing_json(&mc, &rp, buf, sizeof(buf)) == EPT_OK);
    const auto parsed = nlohmann::json::parse(buf);
    CHECK(parsed["method"] == "monte_carlo");
    CHECK(parsed["style"] == "put");
    CHECK(parsed["premium"].get<double>() == mc.premium);
    CHECK(parsed["d1"].is_null());
    CHECK(parsed["std_error"].get<double>() == mc.std_error);
    CHECK(parsed["params"]["paths"] == 1000);
    CHECK(parsed["params"]["seed"] == 5);

    char tiny[8];
    CHECK(ept_pricing_json(&mc, &rp, tiny, sizeof(tiny)) == EPT_ERR_INVALID_ARGUMENT);
}

TEST_CASE("maxent multipliers through the C surface") {
    double alpha = 0.0, beta = 0.0;
    REQUIRE(ept_multipliers_from_market(0.05, 0.2, 1.0 / 252.0, &alpha, &beta) == EPT_OK);
    CHECK(std::fabs(alpha - 6300.0) < 1e-6 * 6300.0);
    CHECK(std::fabs(beta - 0.75) < 1e-12);

    CHECK(ept_multipliers_from_market(0.05, 0.0, 1.0, &alpha, &beta) ==
          EPT_ERR_INVALID_ARGUMENT);

    ept_maxent_result res;
    const double kprime = (0.05 - 0.02) / 252.0;
    const double k = 0.04 / 252.0 + kprime * kprime;
    const double spread = 0.2 * std::sqrt(1.0 / 252.0);
    REQUIRE(ept_solve_dual(k, kprime, kprime - 8.0 * spread, kprime + 8.0 * spread, 801,
                           1e-10, &res) == EPT_OK);
    CHECK(std::fabs(res.alpha / 6300.0 - 1.0) < 1e-6);
    CHECK(std::fabs(res.beta / 0.75 - 1.0) < 1e-6);
    CHECK(res.residual <= 1e-10);
    CHECK(res.iterations > 0);

    // Degenerate targets are a numerical failure, not a crash.
    CHECK(ept_solve_dual(0.25, 0.5, -1.0, 1.0, 801, 1e-10, &res) == EPT_ERR_NUMERICAL);
}

TEST_CASE("path simulation handles") {
    ept_paths* paths = nullptr;
    REQUIRE(ept_simulate(100.0, 0.05, 0.2, 1.0, 4, 3, 42, &paths) == EPT_OK);
    REQUIRE(paths != nullptr);
    CHECK(ept_paths_count(paths) == 3);
    CHECK(ept_paths_times_count(paths) == 5);

    std::vector<double> times(5), row(5);
    REQUIRE(ept_paths_times(paths, times.data(), times.size()) == EPT_OK);
    CHECK(times.front() == 0.0);
    CHECK(times.back() == 1.0);
    REQUIRE(ept_paths_row(paths, 0, row.data(), row.size()) == EPT_OK);
    CHECK(row[0] == doctest::Approx(std::log(100.0)).epsilon(1e-15));

    CHECK(ept_paths_row(paths, 99, row.data(), row.size()) == EPT_ERR_INVALID_ARGUMENT);
    CHECK(ept_paths_times(paths, times.data(), 2) == EPT_ERR_INVALID_ARGUMENT);

    const std::string file = "/tmp/ept_paths_test.csv";
    REQUIRE(ept_paths_write_csv(paths, file.c_str()) == EPT_OK);
    const std::string text = read_file(file);
    CHECK(text.rfind("# seed=42 s0=100 ", 0) == 0);
    CHECK(ept_paths_write_csv(paths, "/nonexistent-dir/out.csv") == EPT_ERR_IO);
    ept_paths_free(paths);
    std::remove(file.c_str());

    ept_paths* bad = nullptr;
    CHECK(ept_simulate(-1.0, 0.05, 0.2, 1.0, 4, 3, 42, &bad) == EPT_ERR_INVALID_ARGUMENT);
    CHECK(bad == nullptr);
}

TEST_CASE("concurrent calls keep their error states separate") {
    std::atomic<int> failures{0};
    std::vector<std::thread> workers;
    for (int t = 0; t < 8; ++t) {
        workers.emplace_back([&failures, t] {
            for (int i = 0; i < 200; ++i) {
                ept_pricing_result r;
                if (t % 2 == 0) {
                    if (ept_price_closed(100.0, 100.0, 1.0, 0.05, 0.2, EPT_CALL, &r) !=
                            EPT_OK ||
                        std::strlen(ept_last_error()) != 0)
                        ++failures;
                } else {
                    if (ept_price_closed(-1.0, 100.0, 1.0, 0.05, 0.2, EPT_CALL, &r) !=
                            EPT_ERR_INVALID_ARGUMENT ||
                        std::strlen(ept_last_error()) == 0)
                        ++failures;
                }
            }
        });
    }
    for (auto& w : workers) w.join();
    CHECK(failures == 0);
}

TEST_CASE("density evolution handles") {
    const double x0 = std::log(100.0);
    ept_density* density = nullptr;
    REQUIRE(ept_density_create_delta(x0 - 1.6, x0 + 1.6, 400, x0, &density) == EPT_OK);

    double lo = 0, hi = 0, time = -1;
    int n = 0;
    REQUIRE(ept_density_info(density, &lo, &hi, &n, &time) == EPT_OK);
    CHECK(n == 400);
    CHECK(time == 0.0);

    REQUIRE(ept_density_evolve(density, 0.05, 0.2, 1.0, 2000) == EPT_OK);
    REQUIRE(ept_density_info(density, &lo, &hi, &n, &time) == EPT_OK);
    CHECK(time == 1.0);

    std::vector<double> values(400);
    REQUIRE(ept_density_values(density, values.data(), values.size()) == EPT_OK);
    const double h = (hi - lo) / (n - 1);
    double mass = 0.5 * (values.front() + values.back());
    for (int i = 1; i + 1 < n; ++i) mass += values[i];
    mass *= h;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));

    // L1 distance to the closed-form terminal density.
    double l1 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = lo + h * i;
        const double z = (x - (x0 + 0.03)) / 0.2;
        const double ref = std::exp(-0.5 * z * z) / (0.2 * std::sqrt(2.0 * M_PI));
        l1 += std::fabs(values[i] - ref) * h;
    }
    CHECK(l1 < 1e-3);

    const std::string file = "/tmp/ept_density_test.csv";
    REQUIRE(ept_density_write_csv(density, file.c_str()) == EPT_OK);
    CHECK(read_file(file).rfind("# time=1 ", 0) == 0);
    std::remove(file.c_str());
    ept_density_free(density);

    ept_density* bad = nullptr;
    CHECK(ept_density_create_gaussian(1.0, -1.0, 64, 0.0, 0.1, &bad) ==
          EPT_ERR_INVALID_ARGUMENT);
    CHECK(ept_density_create_delta(-1.0, 1.0, 4, 0.0, &bad) == EPT_ERR_INVALID_ARGUMENT);

    // Backward time requests are rejected.
    REQUIRE(ept_density_create_delta(-1.0, 1.0, 64, 0.0, &density) == EPT_OK);
    CHECK(ept_density_evolve(density, 0.0, 0.2, -1.0, 10) == EPT_ERR_INVALID_ARGUMENT);
    ept_density_free(density);
}
