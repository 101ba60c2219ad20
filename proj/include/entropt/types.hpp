#pragma once

#include <cmath>

#include "entropt/errors.hpp"

namespace entropt {

/// Market parameters of a single stock. Rates and volatilities are
/// annualized; time is measured in years.
struct MarketParams {
    double mu = 0.0;              ///< drift, per unit time
    double sigma = 0.0;           ///< volatility, per sqrt unit time (> 0)
    double risk_free_rate = 0.0;  ///< continuously compounded, per unit time

    void validate() const {
        if (!std::isfinite(mu) || !std::isfinite(sigma) || !std::isfinite(risk_free_rate))
            throw domain_error("MarketParams: all fields must be finite");
        if (sigma <= 0.0)
            throw domain_error("MarketParams: sigma must be > 0");
    }
};

enum class OptionStyle { call, put };

/// European option contract. strike = 0 is permitted as the degenerate
/// forward-like contract; expiry must be strictly positive.
struct OptionSpec {
    OptionStyle style = OptionStyle::call;
    double strike = 0.0;
    double expiry = 0.0;

    void validate() const {
        if (!std::isfinite(strike) || strike < 0.0)
            throw domain_error("OptionSpec: strike must be finite and >= 0");
        if (!std::isfinite(expiry) || expiry <= 0.0)
            throw domain_error("OptionSpec: expiry must be finite and > 0");
    }
};

}  // namespace entropt
