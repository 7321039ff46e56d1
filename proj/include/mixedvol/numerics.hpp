#pragma once

#include <cstdint>
#include <functional>
#include <random>

namespace mixedvol {

/// Stopping rule shared by every iterative routine.
struct Tolerance {
    double rel = 1e-10;
    double abs = 0.0;
    int max_iter = 2000;

    void validate() const;
};

namespace numerics {

using RealFunction = std::function<double(double)>;

/// log Gamma(x) for x > 0.
double log_gamma(double x);

struct BesselK1Value {
    double value;   // K_1(z), 0 when it underflows
    double scaled;  // e^z K_1(z), always representable
    bool underflow;
};

/// Modified Bessel function of the second kind, order one.
///
/// Regimes: z <= 30 uses the library series/continued-fraction evaluation,
/// z > 30 the Hankel expansion of e^z K_1(z) (relative error < 1e-15 there).
BesselK1Value bessel_k1_checked(double z);
double bessel_k1(double z);
double bessel_k1_scaled(double z);
double log_bessel_k1(double z);

/// Standard normal cdf and its logarithm, accurate deep into the left tail.
double normal_cdf(double x);
double log_normal_cdf(double x);
/// Mills ratio (1 - Phi(z)) / phi(z).
double mills_ratio(double z);

struct QuadratureResult {
    double value;
    double error;
    int intervals;
};

/// Globally adaptive 21-point Gauss-Kronrod quadrature.
///
/// Infinite endpoints are mapped with x = a + u/(1-u). Subdivision stops once
/// the summed error estimate is below max(tol.abs, tol.rel*|I|); otherwise a
/// ConvergenceError carrying the best estimate is thrown after tol.max_iter
/// subdivisions.
QuadratureResult integrate_with_error(const RealFunction& f, double a, double b,
                                      const Tolerance& tol);
double integrate(const RealFunction& f, double a, double b, const Tolerance& tol);

/// Brent's method. Non-finite function values are allowed and force a
/// bisection step (+inf counts as positive, -inf as negative).
double find_root(const RealFunction& f, double lo, double hi, const Tolerance& tol);

/// Brent minimisation on [lo, hi].
double minimize_scalar(const RealFunction& f, double lo, double hi, double xtol = 1e-10,
                       int max_iter = 200);

/// Deterministic pseudo-random stream. Sub-streams derived by index are seeded
/// from (seed, index) through std::seed_seq and are statistically independent
/// for practical purposes.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t index = 0);

    RngStream substream(std::uint64_t index) const;
    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t index() const noexcept { return index_; }

    double uniform();           // (0, 1)
    double normal();
    double exponential();       // rate 1
    unsigned long poisson(double mean);

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::uint64_t seed_;
    std::uint64_t index_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace numerics
}  // namespace mixedvol
