#pragma once

#include "mixedvol/heston.hpp"

namespace mixedvol::oracles {

struct RiccatiOptions {
    double step = 1e-4;      // RK4 step as a fraction of the horizon scale
    double horizon = 50.0;   // give up (report +inf) beyond this time
};

/// Blow-up time of the moment Riccati equation
///   B' = (s^2 - s)/2 + (c rho s - b) B + c^2 B^2 / 2,  B(0) = 0,
/// found by RK4 integration, switching to u = 1/B once B is large and
/// locating the zero of u. Independent of the closed-form classification.
double riccati_explosion_time(const HestonParams& p, double s, const RiccatiOptions& opt = {});

/// Critical moment on the side given by sign (+1: s_+, -1: s_-) by bisection
/// on riccati_explosion_time(s) = t.
double riccati_critical_moment(const HestonParams& p, int sign, double tol = 1e-10,
                               const RiccatiOptions& opt = {});

}  // namespace mixedvol::oracles
