#pragma once

#include <stdexcept>
#include <string>

namespace mixedvol {

// Every failure raised by the library derives from Error, so callers can
// render a structured diagnostic instead of crashing.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "domain"; }
};

// An iterative method ran out of budget. The best estimate reached so far is
// kept so callers can decide whether it is still usable.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double best_estimate, double error_estimate)
        : Error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}
    const char* kind() const noexcept override { return "convergence"; }
    double best_estimate() const noexcept { return best_estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double best_estimate_;
    double error_estimate_;
};

// Root finder was handed an interval without a sign change.
class BracketError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "bracket"; }
};

// An integral that should converge does not (Mellin transform off its strip).
class DivergenceError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "divergence"; }
};

// Requested moment order lies at or beyond the critical moment.
class MomentExplosionError : public DomainError {
public:
    using DomainError::DomainError;
    const char* kind() const noexcept override { return "moment_explosion"; }
};

// Mellin strip condition sigma < rho < tau violated.
class StripError : public DomainError {
public:
    using DomainError::DomainError;
    const char* kind() const noexcept override { return "strip"; }
};

// Asymptotic formula evaluated outside its regime guard.
class RegimeError : public DomainError {
public:
    using DomainError::DomainError;
    const char* kind() const noexcept override { return "regime"; }
};

// Competing tail exponents coincide; no dominance statement is available.
class DegenerateError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "degenerate"; }
};

// Drift or parameter choice incompatible with a martingale price.
class NoArbitrageError : public DomainError {
public:
    using DomainError::DomainError;
    const char* kind() const noexcept override { return "no_arbitrage"; }
};

}  // namespace mixedvol
