#pragma once

#include "mixedvol/numerics.hpp"

#include <complex>
#include <functional>

namespace mixedvol {

using LogCharacteristic = std::function<std::complex<double>(std::complex<double>)>;

struct FourierOptions {
    double step = 0.0314;        // trapezoid step in the frequency variable (alias period ~200)
    double cutoff = 1e-17;       // stop once |phi| falls below cutoff * M(theta) ...
    int patience = 50;           // ... for this many consecutive nodes
    long max_terms = 2000000;
    double boundary_gap = 0.25;  // tilts stay this far inside the moment strip
};

struct FourierDensity {
    double value;
    double log_value;
    double tilt;
    long terms;
    double rel_error;  // size of the discarded tail relative to the sum
};

// Density of a real random variable Y from log E[exp(i w Y)], inverted along
// the line Im w = -theta. The tilt is picked at the saddle point of
// theta y - log E[e^{theta Y}], which keeps the relative accuracy uniform
// far into the tails.
class TiltedFourierInverter {
public:
    /// log_cf(w) = log E[e^{i w Y}], analytic for -Im w in (theta_lo, theta_hi).
    TiltedFourierInverter(LogCharacteristic log_cf, double theta_lo, double theta_hi, FourierOptions opt = {});

    double log_mgf(double theta) const;
    double saddle_tilt(double y) const;

    FourierDensity density(double y) const;
    FourierDensity density_at_tilt(double y, double theta) const;

    double theta_lo() const noexcept { return lo_; }
    double theta_hi() const noexcept { return hi_; }

private:
    LogCharacteristic log_cf_;
    double lo_, hi_;
    FourierOptions opt_;
};

}  // namespace mixedvol
