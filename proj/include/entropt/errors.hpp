#pragma once

#include <stdexcept>
#include <string>

namespace entropt {

/// Base class for all library errors.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A scalar input is outside its mathematical domain (non-positive price,
/// zero volatility, negative time step, ...).
class domain_error : public error {
public:
    using error::error;
};

/// Structurally inconsistent arguments (mismatched grids, spot outside the
/// grid interior, bad array sizes).
class argument_error : public error {
public:
    using error::error;
};

/// A density places mass where the reference density has none.
class support_error : public error {
public:
    using error::error;
};

/// Moment targets that no density can satisfy (second moment not exceeding
/// the squared first moment, or targets unreachable on the grid).
class infeasibility_error : public error {
public:
    using error::error;
};

/// An iterative solver exhausted its iteration budget.
class convergence_error : public error {
public:
    convergence_error(const std::string& msg, double residual, int iterations)
        : error(msg), residual_(residual), iterations_(iterations) {}

    double residual() const noexcept { return residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    double residual_;
    int iterations_;
};

/// The computational domain is too narrow for the requested accuracy
/// (quadrature tail mass, probability leakage at grid boundaries).
class truncation_error : public error {
public:
    using error::error;
};

/// The discretization produced non-finite values or otherwise broke down.
class scheme_error : public error {
public:
    using error::error;
};

}  // namespace entropt
