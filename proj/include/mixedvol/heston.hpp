#pragma once

#include "mixedvol/mellin.hpp"
#include "mixedvol/numerics.hpp"

#include <complex>

namespace mixedvol {

// dX = mu X dt + sqrt(Y) X dW,  dY = (a - b Y) dt + c sqrt(Y) dZ,  d<W,Z> = rho dt.
struct HestonParams {
    double mu = 0.0;
    double a = 1.0;
    double b = 2.0;
    double c = 0.5;
    double rho = -0.3;
    double x0 = 1.0;
    double y0 = 0.04;
    double t = 1.0;

    /// Throws DomainError; rho > 0 is rejected because the tail formulas are
    /// only available for -1 < rho <= 0.
    void validate() const;
};

struct CriticalMoments {
    double s_plus;
    double s_minus;
    double sigma_plus;   // -dT*/ds at s_plus
    double sigma_minus;  // |dT*/ds| at s_minus, reported positive
    double kappa_plus;   // d^2T*/ds^2 at s_plus
    double kappa_minus;
    double t;
};

struct HestonTailConstants {
    double A1, A2, A3;
    double A1t, A2t, A3t;
    double B1, B1t;
    // True when the square root inside the sinh bracket had a negative
    // argument and the sin continuation was used.
    bool A1_sin_branch;
    bool A1t_sin_branch;
};

/// Explosion time of the moment of order s; +inf when it never explodes.
double explosion_time(const HestonParams& p, double s);

struct ExplosionDerivatives {
    double value, first, second;
};
/// T*(s) with first and second derivatives (forward-mode jets on the closed form).
ExplosionDerivatives explosion_time_derivatives(const HestonParams& p, double s);

CriticalMoments critical_moments(const HestonParams& p, const Tolerance& tol = {1e-13, 0.0, 500});

HestonTailConstants tail_constants(const HestonParams& p, const CriticalMoments& m);
HestonTailConstants tail_constants(const HestonParams& p);

/// Leading terms of the density at infinity and at zero as TailAsymptote records.
TailAsymptote heston_tail_asymptote(const HestonParams& p, const HestonTailConstants& k);
TailAsymptote heston_zero_asymptote(const HestonParams& p, const HestonTailConstants& k);

/// B1 x^{-A3} e^{A2 sqrt(log x)} (log x)^{-3/4 + a/c^2}; requires x > max(x0 e^{mu t}, e).
double density_tail(const HestonParams& p, double x);
/// B1~ x^{A3~} e^{A2~ sqrt(log 1/x)} (log 1/x)^{-3/4 + a/c^2}; requires x < min(x0 e^{mu t}, 1/e).
double density_zero(const HestonParams& p, double x);

/// E[X_t^s] for s strictly inside (s_-, s_+).
double mgf(const HestonParams& p, double s);
double log_mgf(const HestonParams& p, double s);

/// log E[exp(i w log X_t)] for complex w with -Im w inside the moment strip,
/// using the continuous-branch ("little trap") form.
std::complex<double> log_cf(const HestonParams& p, std::complex<double> w);

}  // namespace mixedvol
