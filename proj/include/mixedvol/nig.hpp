#pragma once

#include "mixedvol/mellin.hpp"
#include "mixedvol/numerics.hpp"

#include <complex>

namespace mixedvol {

// Symmetric centred normal inverse Gaussian Levy process Y at time t.
struct NIGParams {
    double alpha = 4.0;
    double delta = 0.5;
    double t = 1.0;

    void validate() const;
};

/// alpha delta t e^{alpha delta t} / pi.
double nig_k(const NIGParams& p);

struct NigDensityValue {
    double value;      // 0 when it underflows
    double log_value;  // always finite
    bool underflow;
};

/// Density of Y_t at y.
NigDensityValue nig_log_density_checked(const NIGParams& p, double y);
double nig_log_density(const NIGParams& p, double y);

/// Density of exp(Y_t) at x > 0.
double nig_price_density(const NIGParams& p, double x);
double log_nig_price_density(const NIGParams& p, double x);

/// k sqrt(pi/(2 alpha)) x^{-alpha-1} (log x)^{-3/2} at infinity; the mirror at
/// zero (exponent alpha - 1) follows from the symmetry of Y.
TailAsymptote nig_tail_asymptote(const NIGParams& p);
TailAsymptote nig_zero_asymptote(const NIGParams& p);
/// Value of the tail asymptote with the regime guard log x >= guard.
double nig_tail_value(const NIGParams& p, double x, double guard = 4.0);

/// E[e^{s Y_t}] for |s| < alpha.
double nig_mgf(const NIGParams& p, double s);
double log_nig_mgf(const NIGParams& p, double s);
/// log E[exp(i w Y_t)] for complex w with |Im w| < alpha.
std::complex<double> nig_log_cf(const NIGParams& p, std::complex<double> w);

/// Heston drift making the Heston x NIG price a martingale at zero rate.
double nig_no_arb_drift(const NIGParams& p);

/// Inverse Gaussian draw with the given mean and shape.
double sample_inverse_gaussian(double mean, double shape, numerics::RngStream& rng);
/// One draw of Y_t by subordinating a Brownian motion to the IG time change.
double sample_nig(const NIGParams& p, numerics::RngStream& rng);

}  // namespace mixedvol
