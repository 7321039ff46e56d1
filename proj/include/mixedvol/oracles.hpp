#pragma once

#include "mixedvol/fourier.hpp"
#include "mixedvol/mixed.hpp"
#include "mixedvol/numerics.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace mixedvol::oracles {

/// Characteristic function of log X_t.
std::complex<double> mixed_cf(const MixedModel& m, double u);

/// Saddle-tilted inverter for log X_t (or the Heston factor only).
TiltedFourierInverter mixed_inverter(const MixedModel& m, const FourierOptions& opt = {});
TiltedFourierInverter heston_inverter(const HestonParams& p, const FourierOptions& opt = {});

/// Density of X_t at x by Fourier inversion in log price.
double density_fourier(const MixedModel& m, double x, const FourierOptions& opt = {});
double log_density_fourier(const MixedModel& m, double x, const FourierOptions& opt = {});
/// Heston price density only.
double heston_density_fourier(const HestonParams& p, double x, const FourierOptions& opt = {});

struct CallOptions {
    std::optional<double> damping;  // Carr-Madan alpha; default: midpoint of (0, s_+ - 1)
    bool saddle = false;            // pick alpha minimising the integrand size at v = 0
    double step = 0.01;
    double cutoff = 1e-18;
    long max_terms = 4000000;
};

/// E[(X_t - K)^+] by damped-transform inversion. A damping alpha < -1 inside
/// the strip returns the put E[(K - X_t)^+] instead.
double call_fourier(const MixedModel& m, double K, const CallOptions& opt = {});
double put_fourier(const MixedModel& m, double K, const CallOptions& opt = {});

struct MCResult {
    double estimate;
    double std_error;
    std::uint64_t n_paths;
    std::uint64_t seed;
};

struct SimulationOptions {
    int steps = 200;
    std::uint64_t chunk = 8192;  // paths per sub-stream
    unsigned threads = 0;        // 0: hardware concurrency
};

/// Terminal values X_T: log-Euler with full truncation for the variance, exact
/// conditional lognormal increments for the price, independent jump factor.
std::vector<double> simulate_paths(const MixedModel& m, std::uint64_t n_paths, std::uint64_t seed,
                                   const SimulationOptions& opt = {});

/// Monte Carlo estimate of E[X_T^s] (s = 1 gives the mean).
MCResult mc_moment(const MixedModel& m, double s, std::uint64_t n_paths, std::uint64_t seed,
                   const SimulationOptions& opt = {});
MCResult mc_moment(const std::vector<double>& samples, double s, std::uint64_t seed);
MCResult mc_call(const std::vector<double>& samples, double K, std::uint64_t seed);

}  // namespace mixedvol::oracles
