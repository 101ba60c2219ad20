// Command-line front end for the entropt shared library. Everything numeric
// goes through the C API in entropt/entropt.h; this file only parses flags,
// merges JSON config files, validates inputs, and formats output.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "entropt/entropt.h"

namespace {

using nlohmann::json;

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

int exit_code_for(ept_status status) {
    switch (status) {
        case EPT_OK: return 0;
        case EPT_ERR_INVALID_ARGUMENT: return kExitValidation;
        case EPT_ERR_NUMERICAL: return kExitNumerical;
        case EPT_ERR_IO: return kExitIo;
    }
    return kExitNumerical;
}

int fail(ept_status status) {
    std::fprintf(stderr, "error: %s\n", ept_last_error());
    return exit_code_for(status);
}

void append_real(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

/// Collects validation problems so a bad invocation reports everything at
/// once instead of failing flag by flag.
struct Validator {
    std::vector<std::string> problems;

    void require(bool ok, const std::string& message) {
        if (!ok) problems.push_back(message);
    }
    int finish() const {
        if (problems.empty()) return 0;
        for (const auto& p : problems) std::fprintf(stderr, "error: %s\n", p.c_str());
        return kExitValidation;
    }
};

/// Values from --config merge below explicit flags: a flag given on the
/// command line always wins.
struct ConfigFile {
    json data = json::object();

    static std::optional<ConfigFile> load(const std::string& path, Validator& v) {
        if (path.empty()) return ConfigFile{};
        std::ifstream is(path);
        if (!is) {
            v.require(false, "cannot read --config file '" + path + "'");
            return std::nullopt;
        }
        ConfigFile cfg;
        try {
            is >> cfg.data;
        } catch (const std::exception& e) {
            v.require(false, std::string("cannot parse --config JSON: ") + e.what());
            return std::nullopt;
        }
        return cfg;
    }

    const json* find(const std::string& dotted_key) const {
        const json* node = &data;
        size_t start = 0;
        while (true) {
            const size_t dot = dotted_key.find('.', start);
            const std::string part = dotted_key.substr(
                start, dot == std::string::npos ? std::string::npos : dot - start);
            if (!node->is_object() || !node->contains(part)) return nullptr;
            node = &(*node)[part];
            if (dot == std::string::npos) return node;
            start = dot + 1;
        }
    }

    template <typename T>
    void merge(const CLI::Option* opt, const std::string& key, T& target) const {
        if (opt->count() > 0) return;  // explicit flag wins
        if (const json* v = find(key)) {
            try {
                target = v->get<T>();
            } catch (const std::exception&) {
                // wrong type in the config; leave the default and let
                // validation report it
            }
        }
    }
};

json config_echo_common(double spot, double rate, double mu, double sigma) {
    json j;
    if (std::isfinite(spot)) j["spot"] = spot;
    json market;
    if (std::isfinite(rate)) market["rate"] = rate;
    if (std::isfinite(mu)) market["mu"] = mu;
    if (std::isfinite(sigma)) market["sigma"] = sigma;
    j["market"] = market;
    return j;
}

void echo_config(const json& resolved) {
    json wrapper;
    wrapper["config"] = resolved;
    std::printf("%s\n", wrapper.dump().c_str());
}

// --- price / parity -------------------------------------------------------

struct PriceArgs {
    double spot = NAN, strike = NAN, rate = NAN, vol = NAN, expiry = NAN;
    std::string style, method;
    long long paths = 100000;
    unsigned long long seed = 1;
    int grid = 400, steps = 400, points = 4001;
    std::string config_path;
    bool verbose = false;
};

void add_market_flags(CLI::App* cmd, PriceArgs& a,
                      std::vector<std::pair<CLI::Option*, std::string>>& merges) {
    merges.emplace_back(cmd->add_option("--spot", a.spot, "Spot price"), "spot");
    merges.emplace_back(cmd->add_option("--strike", a.strike, "Strike price"),
                        "option.strike");
    merges.emplace_back(
        cmd->add_option("--rate", a.rate, "Risk-free rate, annualized"), "market.rate");
    merges.emplace_back(cmd->add_option("--vol", a.vol, "Volatility, annualized"),
                        "market.sigma");
    merges.emplace_back(cmd->add_option("--expiry", a.expiry, "Expiry in years"),
                        "option.expiry");
    merges.emplace_back(
        cmd->add_option("--method", a.method,
                        "Pricing method: closed|quadrature|pde|mc"),
        "method");
    merges.emplace_back(cmd->add_option("--paths", a.paths, "Monte Carlo paths"),
                        "numerics.paths");
    merges.emplace_back(cmd->add_option("--seed", a.seed, "Monte Carlo seed"),
                        "numerics.seed");
    merges.emplace_back(cmd->add_option("--grid", a.grid, "Spatial nodes (pde)"),
                        "numerics.grid");
    merges.emplace_back(cmd->add_option("--steps", a.steps, "Time steps (pde)"),
                        "numerics.steps");
    merges.emplace_back(
        cmd->add_option("--points", a.points, "Quadrature nodes (quadrature)"),
        "numerics.points");
    cmd->add_option("--config", a.config_path, "JSON config file; flags win");
    cmd->add_flag("--verbose", a.verbose, "Echo the resolved config");
}

void validate_market(const PriceArgs& a, Validator& v) {
    v.require(std::isfinite(a.spot) && a.spot > 0.0, "invalid --spot: must be > 0");
    v.require(std::isfinite(a.strike) && a.strike >= 0.0,
              "invalid --strike: must be >= 0");
    v.require(std::isfinite(a.rate), "invalid --rate: must be finite");
    v.require(std::isfinite(a.vol) && a.vol > 0.0, "invalid --vol: must be > 0");
    v.require(std::isfinite(a.expiry) && a.expiry > 0.0, "invalid --expiry: must be > 0");
    v.require(a.method == "closed" || a.method == "quadrature" || a.method == "pde" ||
                  a.method == "mc",
              "invalid --method: expected closed|quadrature|pde|mc");
    if (a.method == "mc") v.require(a.paths >= 100, "invalid --paths: need at least 100");
    if (a.method == "pde") {
        v.require(a.grid >= 16, "invalid --grid: need at least 16 nodes");
        v.require(a.steps >= 1, "invalid --steps: must be >= 1");
    }
    if (a.method == "quadrature")
        v.require(a.points >= 3, "invalid --points: need at least 3 nodes");
}

json price_config_echo(const PriceArgs& a, const std::string& style) {
    json j = config_echo_common(a.spot, a.rate, NAN, a.vol);
    json option;
    if (!style.empty()) option["style"] = style;
    option["strike"] = a.strike;
    option["expiry"] = a.expiry;
    j["option"] = option;
    j["method"] = a.method;
    json numerics;
    numerics["paths"] = a.paths;
    numerics["seed"] = a.seed;
    numerics["grid"] = a.grid;
    numerics["steps"] = a.steps;
    numerics["points"] = a.points;
    j["numerics"] = numerics;
    return j;
}

ept_status price_one(const PriceArgs& a, int style, ept_pricing_result* out) {
    if (a.method == "closed")
        return ept_price_closed(a.spot, a.strike, a.expiry, a.rate, a.vol, style, out);
    if (a.method == "quadrature")
        return ept_price_quadrature(a.spot, a.strike, a.expiry, a.rate, a.vol, style,
                                    a.points, out);
    if (a.method == "pde")
        return ept_price_pde(a.spot, a.strike, a.expiry, a.rate, a.vol, style, a.grid,
                             a.steps, out);
    return ept_price_mc(a.spot, a.strike, a.expiry, a.rate, a.vol, style, a.paths,
                        a.seed, out);
}

ept_record_params record_params_for(const PriceArgs& a, int style) {
    ept_record_params p{};
    p.spot = a.spot;
    p.strike = a.strike;
    p.expiry = a.expiry;
    p.rate = a.rate;
    p.sigma = a.vol;
    p.style = style;
    if (a.method == "mc") {
        p.paths = a.paths;
        p.seed = a.seed;
        p.has_seed = 1;
    } else if (a.method == "pde") {
        p.grid = a.grid;
        p.steps = a.steps;
    } else if (a.method == "quadrature") {
        p.points = a.points;
    }
    return p;
}

int run_price(PriceArgs& a, const std::vector<std::pair<CLI::Option*, std::string>>& merges,
              CLI::Option* style_opt) {
    Validator v;
    auto cfg = ConfigFile::load(a.config_path, v);
    if (cfg) {
        for (const auto& [opt, key] : merges) {
            if (key == "numerics.paths")
                cfg->merge(opt, key, a.paths);
            else if (key == "numerics.seed")
                cfg->merge(opt, key, a.seed);
            else if (key == "numerics.grid")
                cfg->merge(opt, key, a.grid);
            else if (key == "numerics.steps")
                cfg->merge(opt, key, a.steps);
            else if (key == "numerics.points")
                cfg->merge(opt, key, a.points);
            else if (key == "method")
                cfg->merge(opt, key, a.method);
            else if (key == "option.style")
                cfg->merge(opt, key, a.style);
            else {
                double* target = key == "spot"            ? &a.spot
                                 : key == "option.strike" ? &a.strike
                                 : key == "market.rate"   ? &a.rate
                                 : key == "market.sigma"  ? &a.vol
                                                          : &a.expiry;
                cfg->merge(opt, key, *target);
            }
        }
    }
    const bool want_style = style_opt != nullptr;
    if (want_style && cfg) cfg->merge(style_opt, "option.style", a.style);
    if (want_style)
        v.require(a.style == "call" || a.style == "put",
                  "invalid --style: expected call or put");
    validate_market(a, v);
    if (int rc = v.finish()) return rc;

    if (a.verbose) echo_config(price_config_echo(a, want_style ? a.style : ""));

    char buf[1024];
    if (want_style) {
        const int style = a.style == "call" ? EPT_CALL : EPT_PUT;
        ept_pricing_result result;
        if (ept_status rc = price_one(a, style, &result)) return fail(rc);
        const ept_record_params rp = record_params_for(a, style);
        if (ept_status rc = ept_pricing_json(&result, &rp, buf, sizeof(buf)))
            return fail(rc);
        std::printf("%s\n", buf);
        return 0;
    }

    // parity: price both legs with a shared seed and report the gap.
    ept_pricing_result call_res, put_res;
    if (ept_status rc = price_one(a, EPT_CALL, &call_res)) return fail(rc);
    if (ept_status rc = price_one(a, EPT_PUT, &put_res)) return fail(rc);
    double gap = 0.0;
    if (ept_status rc = ept_parity_gap(call_res.premium, put_res.premium, a.spot,
                                       a.strike, a.expiry, a.rate, &gap))
        return fail(rc);
    std::string line = "{\"method\":\"";
    line += a.method;
    line += "\",\"call_premium\":";
    append_real(line, call_res.premium);
    line += ",\"put_premium\":";
    append_real(line, put_res.premium);
    line += ",\"parity_gap\":";
    append_real(line, gap);
    line += "}";
    std::printf("%s\n", line.c_str());
    return 0;
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
    double spot = NAN, mu = NAN, vol = NAN, horizon = NAN;
    int steps = 252;
    long long paths = 100;
    unsigned long long seed = 1;
    std::string out, config_path;
    bool verbose = false;
};

int run_simulate(SimulateArgs& a,
                 const std::vector<std::pair<CLI::Option*, std::string>>& merges) {
    Validator v;
    auto cfg = ConfigFile::load(a.config_path, v);
    if (cfg) {
        for (const auto& [opt, key] : merges) {
            if (key == "spot") cfg->merge(opt, key, a.spot);
            else if (key == "market.mu") cfg->merge(opt, key, a.mu);
            else if (key == "market.sigma") cfg->merge(opt, key, a.vol);
            else if (key == "numerics.horizon") cfg->merge(opt, key, a.horizon);
            else if (key == "numerics.steps") cfg->merge(opt, key, a.steps);
            else if (key == "numerics.paths") cfg->merge(opt, key, a.paths);
            else if (key == "numerics.seed") cfg->merge(opt, key, a.seed);
            else if (key == "output_path") cfg->merge(opt, key, a.out);
        }
    }
    v.require(std::isfinite(a.spot) && a.spot > 0.0, "invalid --spot: must be > 0");
    v.require(std::isfinite(a.mu), "invalid --mu: must be finite");
    v.require(std::isfinite(a.vol) && a.vol > 0.0, "invalid --vol: must be > 0");
    v.require(std::isfinite(a.horizon) && a.horizon > 0.0,
              "invalid --horizon: must be > 0");
    v.require(a.steps >= 1, "invalid --steps: must be >= 1");
    v.require(a.paths >= 1, "invalid --paths: must be >= 1");
    v.require(!a.out.empty(), "missing --out: output file required");
    if (int rc = v.finish()) return rc;

    if (a.verbose) {
        json j = config_echo_common(a.spot, NAN, a.mu, a.vol);
        j["numerics"] = {{"horizon", a.horizon},
                         {"steps", a.steps},
                         {"paths", a.paths},
                         {"seed", a.seed}};
        j["output_path"] = a.out;
        echo_config(j);
    }

    ept_paths* paths = nullptr;
    if (ept_status rc = ept_simulate(a.spot, a.mu, a.vol, a.horizon, a.steps, a.paths,
                                     a.seed, &paths))
        return fail(rc);
    const ept_status rc = ept_paths_write_csv(paths, a.out.c_str());
    ept_paths_free(paths);
    if (rc) return fail(rc);

    std::string line = "{\"out\":\"";
    line += a.out;
    line += "\",\"paths\":";
    line += std::to_string(a.paths);
    line += ",\"steps\":";
    line += std::to_string(a.steps);
    line += ",\"seed\":";
    line += std::to_string(a.seed);
    line += "}";
    std::printf("%s\n", line.c_str());
    return 0;
}

// --- fpe ---------------------------------------------------------------------

struct FpeArgs {
    double spot = NAN, mu = NAN, vol = NAN, t_final = NAN;
    int grid = 400, steps = 400, snapshots = 0;
    std::string out, config_path;
    bool verbose = false;
};

int run_fpe(FpeArgs& a, const std::vector<std::pair<CLI::Option*, std::string>>& merges) {
    Validator v;
    auto cfg = ConfigFile::load(a.config_path, v);
    if (cfg) {
        for (const auto& [opt, key] : merges) {
            if (key == "spot") cfg->merge(opt, key, a.spot);
            else if (key == "market.mu") cfg->merge(opt, key, a.mu);
            else if (key == "market.sigma") cfg->merge(opt, key, a.vol);
            else if (key == "numerics.t_final") cfg->merge(opt, key, a.t_final);
            else if (key == "numerics.grid") cfg->merge(opt, key, a.grid);
            else if (key == "numerics.steps") cfg->merge(opt, key, a.steps);
            else if (key == "numerics.snapshots") cfg->merge(opt, key, a.snapshots);
            else if (key == "output_path") cfg->merge(opt, key, a.out);
        }
    }
    v.require(std::isfinite(a.spot) && a.spot > 0.0, "invalid --spot: must be > 0");
    v.require(std::isfinite(a.mu), "invalid --mu: must be finite");
    v.require(std::isfinite(a.vol) && a.vol > 0.0, "invalid --vol: must be > 0");
    v.require(std::isfinite(a.t_final) && a.t_final > 0.0,
              "invalid --t-final: must be > 0");
    v.require(a.grid >= 16, "invalid --grid: need at least 16 nodes");
    v.require(a.steps >= 1, "invalid --steps: must be >= 1");
    v.require(a.snapshots >= 0, "invalid --snapshots: must be >= 0");
    v.require(!a.out.empty(), "missing --out: output directory required");
    if (int rc = v.finish()) return rc;

    if (a.verbose) {
        json j = config_echo_common(a.spot, NAN, a.mu, a.vol);
        j["numerics"] = {{"t_final", a.t_final},
                         {"grid", a.grid},
                         {"steps", a.steps},
                         {"snapshots", a.snapshots}};
        j["output_path"] = a.out;
        echo_config(j);
    }

    std::error_code ec;
    std::filesystem::create_directories(a.out, ec);
    if (ec) {
        std::fprintf(stderr, "error: cannot create output directory '%s'\n",
                     a.out.c_str());
        return kExitIo;
    }

    // Grid wide enough for the terminal spread plus the drift displacement.
    const double x0 = std::log(a.spot);
    const double spread = a.vol * std::sqrt(a.t_final);
    const double drift = (a.mu - 0.5 * a.vol * a.vol) * a.t_final;
    const double x_lo = x0 + std::min(0.0, drift) - 8.0 * spread;
    const double x_hi = x0 + std::max(0.0, drift) + 8.0 * spread;

    ept_density* density = nullptr;
    if (ept_status rc = ept_density_create_delta(x_lo, x_hi, a.grid, x0, &density))
        return fail(rc);

    auto snapshot_path = [&](int index) {
        char name[32];
        std::snprintf(name, sizeof(name), "density_%04d.csv", index);
        return (std::filesystem::path(a.out) / name).string();
    };

    const int segments = a.snapshots > 0 ? a.snapshots : 1;
    const int steps_per_segment = (a.steps + segments - 1) / segments;
    int written = 0;
    ept_status rc = EPT_OK;
    if (a.snapshots > 0) {
        rc = ept_density_write_csv(density, snapshot_path(written).c_str());
        if (rc == EPT_OK) ++written;
    }
    for (int seg = 1; seg <= segments && rc == EPT_OK; ++seg) {
        const double t_target = a.t_final * seg / segments;
        rc = ept_density_evolve(density, a.mu, a.vol, t_target, steps_per_segment);
        if (rc == EPT_OK)
            rc = ept_density_write_csv(density, snapshot_path(written).c_str());
        if (rc == EPT_OK) ++written;
    }

    double mass = 0.0;
    if (rc == EPT_OK) {
        std::vector<double> values(a.grid);
        rc = ept_density_values(density, values.data(), values.size());
        if (rc == EPT_OK) {
            const double h = (x_hi - x_lo) / (a.grid - 1);
            mass = 0.5 * (values.front() + values.back());
            for (int i = 1; i + 1 < a.grid; ++i) mass += values[i];
            mass *= h;
        }
    }
    ept_density_free(density);
    if (rc) return fail(rc);

    std::string line = "{\"out_dir\":\"";
    line += a.out;
    line += "\",\"snapshots\":";
    line += std::to_string(written);
    line += ",\"final_mass\":";
    append_real(line, mass);
    line += "}";
    std::printf("%s\n", line.c_str());
    return 0;
}

// --- maxent -------------------------------------------------------------------

struct MaxentArgs {
    double mu = NAN, vol = NAN, dt = NAN, tol = 1e-10;
    bool numeric = false, verbose = false;
    std::string config_path;
};

int run_maxent(MaxentArgs& a,
               const std::vector<std::pair<CLI::Option*, std::string>>& merges) {
    Validator v;
    auto cfg = ConfigFile::load(a.config_path, v);
    if (cfg) {
        for (const auto& [opt, key] : merges) {
            if (key == "market.mu") cfg->merge(opt, key, a.mu);
            else if (key == "market.sigma") cfg->merge(opt, key, a.vol);
            else if (key == "numerics.dt") cfg->merge(opt, key, a.dt);
            else if (key == "numerics.tol") cfg->merge(opt, key, a.tol);
        }
    }
    v.require(std::isfinite(a.mu), "invalid --mu: must be finite");
    v.require(std::isfinite(a.vol) && a.vol > 0.0, "invalid --vol: must be > 0");
    v.require(std::isfinite(a.dt) && a.dt > 0.0, "invalid --dt: must be > 0");
    v.require(std::isfinite(a.tol) && a.tol > 0.0, "invalid --tol: must be > 0");
    if (int rc = v.finish()) return rc;

    if (a.verbose) {
        json j = config_echo_common(NAN, NAN, a.mu, a.vol);
        j["numerics"] = {{"dt", a.dt}, {"tol", a.tol}, {"numeric", a.numeric}};
        echo_config(j);
    }

    std::string line;
    if (!a.numeric) {
        double alpha = 0.0, beta = 0.0;
        if (ept_status rc = ept_multipliers_from_market(a.mu, a.vol, a.dt, &alpha, &beta))
            return fail(rc);
        line = "{\"alpha\":";
        append_real(line, alpha);
        line += ",\"beta\":";
        append_real(line, beta);
        line += ",\"mean_shift\":";
        append_real(line, beta / alpha);
        line += ",\"variance\":";
        append_real(line, 1.0 / alpha);
        line += "}";
    } else {
        // Route the same targets through the numerical dual solver.
        const double kprime = (a.mu - 0.5 * a.vol * a.vol) * a.dt;
        const double k = a.vol * a.vol * a.dt + kprime * kprime;
        const double spread = a.vol * std::sqrt(a.dt);
        ept_maxent_result res;
        if (ept_status rc = ept_solve_dual(k, kprime, kprime - 8.0 * spread,
                                           kprime + 8.0 * spread, 801, a.tol, &res))
            return fail(rc);
        line = "{\"alpha\":";
        append_real(line, res.alpha);
        line += ",\"beta\":";
        append_real(line, res.beta);
        line += ",\"mean_shift\":";
        append_real(line, res.mean_shift);
        line += ",\"variance\":";
        append_real(line, res.variance);
        line += ",\"residual\":";
        append_real(line, res.residual);
        line += ",\"iterations\":";
        line += std::to_string(res.iterations);
        line += "}";
    }
    std::printf("%s\n", line.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Entropy-based stock dynamics and European option pricing.\n"
        "Time is measured in years; rates and volatilities are annualized."};
    app.require_subcommand(1);

    PriceArgs price_args;
    std::vector<std::pair<CLI::Option*, std::string>> price_merges;
    auto* price_cmd =
        app.add_subcommand("price", "Price a European option and print one JSON record");
    auto* style_opt =
        price_cmd->add_option("--style", price_args.style, "Option style: call|put");
    add_market_flags(price_cmd, price_args, price_merges);

    PriceArgs parity_args;
    std::vector<std::pair<CLI::Option*, std::string>> parity_merges;
    auto* parity_cmd = app.add_subcommand(
        "parity", "Price both legs and print the put-call parity gap");
    add_market_flags(parity_cmd, parity_args, parity_merges);

    SimulateArgs sim_args;
    std::vector<std::pair<CLI::Option*, std::string>> sim_merges;
    auto* sim_cmd =
        app.add_subcommand("simulate", "Sample log-price paths and write them as CSV");
    sim_merges.emplace_back(sim_cmd->add_option("--spot", sim_args.spot, "Spot price"),
                            "spot");
    sim_merges.emplace_back(sim_cmd->add_option("--mu", sim_args.mu, "Drift, annualized"),
                            "market.mu");
    sim_merges.emplace_back(
        sim_cmd->add_option("--vol", sim_args.vol, "Volatility, annualized"),
        "market.sigma");
    sim_merges.emplace_back(
        sim_cmd->add_option("--horizon", sim_args.horizon, "Horizon in years"),
        "numerics.horizon");
    sim_merges.emplace_back(sim_cmd->add_option("--steps", sim_args.steps, "Time steps"),
                            "numerics.steps");
    sim_merges.emplace_back(sim_cmd->add_option("--paths", sim_args.paths, "Path count"),
                            "numerics.paths");
    sim_merges.emplace_back(sim_cmd->add_option("--seed", sim_args.seed, "RNG seed"),
                            "numerics.seed");
    sim_merges.emplace_back(sim_cmd->add_option("--out", sim_args.out, "Output CSV file"),
                            "output_path");
    sim_cmd->add_option("--config", sim_args.config_path, "JSON config file; flags win");
    sim_cmd->add_flag("--verbose", sim_args.verbose, "Echo the resolved config");

    FpeArgs fpe_args;
    std::vector<std::pair<CLI::Option*, std::string>> fpe_merges;
    auto* fpe_cmd = app.add_subcommand(
        "fpe", "Evolve the log-price density forward and write CSV snapshots");
    fpe_merges.emplace_back(fpe_cmd->add_option("--spot", fpe_args.spot, "Spot price"),
                            "spot");
    fpe_merges.emplace_back(fpe_cmd->add_option("--mu", fpe_args.mu, "Drift, annualized"),
                            "market.mu");
    fpe_merges.emplace_back(
        fpe_cmd->add_option("--vol", fpe_args.vol, "Volatility, annualized"),
        "market.sigma");
    fpe_merges.emplace_back(
        fpe_cmd->add_option("--t-final", fpe_args.t_final, "Final time in years"),
        "numerics.t_final");
    fpe_merges.emplace_back(fpe_cmd->add_option("--grid", fpe_args.grid, "Grid nodes"),
                            "numerics.grid");
    fpe_merges.emplace_back(fpe_cmd->add_option("--steps", fpe_args.steps, "Time steps"),
                            "numerics.steps");
    fpe_merges.emplace_back(
        fpe_cmd->add_option("--snapshots", fpe_args.snapshots,
                            "Intermediate snapshots (0 = terminal only)"),
        "numerics.snapshots");
    fpe_merges.emplace_back(
        fpe_cmd->add_option("--out", fpe_args.out, "Output directory"), "output_path");
    fpe_cmd->add_option("--config", fpe_args.config_path, "JSON config file; flags win");
    fpe_cmd->add_flag("--verbose", fpe_args.verbose, "Echo the resolved config");

    MaxentArgs maxent_args;
    std::vector<std::pair<CLI::Option*, std::string>> maxent_merges;
    auto* maxent_cmd = app.add_subcommand(
        "maxent", "Report the transition-kernel multipliers for market parameters");
    maxent_merges.emplace_back(
        maxent_cmd->add_option("--mu", maxent_args.mu, "Drift, annualized"), "market.mu");
    maxent_merges.emplace_back(
        maxent_cmd->add_option("--vol", maxent_args.vol, "Volatility, annualized"),
        "market.sigma");
    maxent_merges.emplace_back(
        maxent_cmd->add_option("--dt", maxent_args.dt, "Step size in years"),
        "numerics.dt");
    maxent_merges.emplace_back(
        maxent_cmd->add_option("--tol", maxent_args.tol, "Moment residual tolerance"),
        "numerics.tol");
    maxent_cmd->add_flag("--numeric", maxent_args.numeric,
                         "Solve numerically instead of using the closed form");
    maxent_cmd->add_option("--config", maxent_args.config_path,
                           "JSON config file; flags win");
    maxent_cmd->add_flag("--verbose", maxent_args.verbose, "Echo the resolved config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitValidation;
    }

    if (price_cmd->parsed()) return run_price(price_args, price_merges, style_opt);
    if (parity_cmd->parsed()) return run_price(parity_args, parity_merges, nullptr);
    if (sim_cmd->parsed()) return run_simulate(sim_args, sim_merges);
    if (fpe_cmd->parsed()) return run_fpe(fpe_args, fpe_merges);
    if (maxent_cmd->parsed()) return run_maxent(maxent_args, maxent_merges);
    return kExitValidation;
}
