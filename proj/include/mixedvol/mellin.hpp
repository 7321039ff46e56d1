#pragma once

#include "mixedvol/numerics.hpp"

#include <functional>
#include <optional>
#include <string>

namespace mixedvol {

struct MellinStrip {
    double sigma;
    double tau;

    bool contains(double z) const noexcept { return sigma < z && z < tau; }
};

enum class TailSide { AtInfinity, AtZero };

// Relative error order of an asymptote, as a function of L = |log x|.
enum class ErrorOrder { InvSqrtLog, InvLog };

ErrorOrder coarser(ErrorOrder a, ErrorOrder b) noexcept;
const char* to_string(ErrorOrder e) noexcept;
const char* to_string(TailSide s) noexcept;

/// r1 x^{-r3} e^{r2 sqrt(L)} L^{r4} with L = log x at infinity, and
/// r1 x^{r3} e^{r2 sqrt(L)} L^{r4} with L = log(1/x) at zero.
struct TailAsymptote {
    double r1 = 1.0;
    double r2 = 0.0;
    double r3 = 0.0;
    double r4 = 0.0;
    TailSide side = TailSide::AtInfinity;
    ErrorOrder error_order = ErrorOrder::InvSqrtLog;
    bool extrapolated = false;  // obtained by symmetry rather than a proven statement

    void validate() const;
    double log_value(double x) const;
    /// log_value at x = exp(lx), usable where x itself overflows.
    double log_value_at_log(double lx) const;
    double value(double x) const;
    /// L^{-1/2} or L^{-1} at x.
    double error_bound(double x) const;
    /// Power index of the regularly varying profile (-r3 at infinity, r3 at zero).
    double index() const noexcept { return side == TailSide::AtInfinity ? -r3 : r3; }
};

/// A function used as the left factor U of a Mellin convolution, with the
/// strip where its transform converges and, when known, a closed form.
struct MellinKernel {
    numerics::RealFunction density;
    MellinStrip strip;
    std::function<double(double)> transform;  // optional closed form of MU(z)
    std::string name = "U";
};

/// MU(z) = int_0^inf t^{-z-1} U(t) dt, computed in the variable y = log t.
double mellin_transform(const numerics::RealFunction& U, double z, const Tolerance& tol);

/// (f * g)(x) = int_0^inf f(x/t) g(t) dt/t.
double mellin_convolve(const numerics::RealFunction& f, const numerics::RealFunction& g, double x,
                       const Tolerance& tol);

/// Transform of the kernel at z: closed form if supplied, quadrature otherwise.
double kernel_transform(const MellinKernel& U, double z, const Tolerance& tol);

/// Reflected kernel U~(x) = U(1/x) with strip (-tau, -sigma).
MellinKernel reflect(const MellinKernel& U);
/// Tail of f~(x) = f(1/x): sides are exchanged, constants unchanged.
TailAsymptote reflect(const TailAsymptote& tail);

/// Asymptote of U * f at infinity when f = x^rho l(x) at infinity,
/// rho = -f_tail.r3: MU(rho) x^rho l(x). Requires sigma < rho < tau.
TailAsymptote convolve_asymptote_infinity(const MellinKernel& U, const TailAsymptote& f_tail,
                                          const Tolerance& tol);

/// Asymptote of U * f at zero when f = x^rho l(1/x) at zero, rho = f_zero.r3,
/// obtained by reflecting both factors and using the result at infinity.
TailAsymptote convolve_asymptote_zero(const MellinKernel& U, const TailAsymptote& f_zero,
                                      const Tolerance& tol);

/// epsilon(x) = x l'(x) / l(x). Uses dl when given, otherwise a central
/// difference with relative step rel_step.
double zygmund_epsilon(const numerics::RealFunction& l, double x,
                       const numerics::RealFunction& dl = nullptr, double rel_step = 1e-6);

/// l(lambda x)/l(x) - 1.
double slow_variation_remainder(const numerics::RealFunction& l, double lambda, double x);

}  // namespace mixedvol
