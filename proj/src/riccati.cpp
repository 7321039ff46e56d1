#include "mixedvol/riccati.hpp"

#include "mixedvol/errors.hpp"

#include <cmath>
#include <limits>

namespace mixedvol::oracles {

namespace {

struct Coeffs {
    double k;     // (s^2 - s)/2
    double lin;   // c rho s - b
    double quad;  // c^2/2
};

double rhs_b(const Coeffs& q, double B) { return q.k + q.lin * B + q.quad * B * B; }
// u = 1/B:  u' = -(k u^2 + lin u + quad)
double rhs_u(const Coeffs& q, double u) { return -(q.k * u * u + q.lin * u + q.quad); }

template <class F>
double rk4(F f, double y, double h) {
    const double k1 = f(y);
    const double k2 = f(y + 0.5 * h * k1);
    const double k3 = f(y + 0.5 * h * k2);
    const double k4 = f(y + h * k3);
    return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

double riccati_explosion_time(const HestonParams& p, double s, const RiccatiOptions& opt) {
    const Coeffs q{0.5 * (s * s - s), p.c * p.rho * s - p.b, 0.5 * p.c * p.c};
    auto fb = [&](double B) { return rhs_b(q, B); };
    auto fu = [&](double u) { return rhs_u(q, u); };
    const double h = opt.step;
    double t = 0.0;
    double B = 0.0;
    // Phase 1: integrate B until it is large or settles.
    while (t < opt.horizon) {
        const double Bn = rk4(fb, B, h);
        t += h;
        if (!std::isfinite(Bn)) return t;  // should not happen before the switch
        if (std::abs(Bn - B) < 1e-15 * std::max(1.0, std::abs(B)) && std::abs(fb(Bn)) < 1e-13) {
            return std::numeric_limits<double>::infinity();  // stationary point reached
        }
        B = Bn;
        if (B > 1.0) break;
    }
    if (t >= opt.horizon) return std::numeric_limits<double>::infinity();
    // Phase 2: u = 1/B decreases to zero at the blow-up time.
    double u = 1.0 / B;
    while (t < opt.horizon) {
        const double un = rk4(fu, u, h);
        if (un <= 0.0) {
            double lo = 0.0, hi = h;
            for (int i = 0; i < 80; ++i) {
                const double mid = 0.5 * (lo + hi);
                if (rk4(fu, u, mid) > 0.0) lo = mid; else hi = mid;
            }
            return t + 0.5 * (lo + hi);
        }
        u = un;
        t += h;
    }
    return std::numeric_limits<double>::infinity();
}

double riccati_critical_moment(const HestonParams& p, int sign, double tol, const RiccatiOptions& opt) {
    if (sign == 0) throw DomainError("riccati_critical_moment: sign must be +1 or -1");
    const double dir = sign > 0 ? 1.0 : -1.0;
    const double start = sign > 0 ? 1.0 : 0.0;
    double lo = start + dir * 1e-6;
    double step = 1.0;
    double hi = start + dir * step;
    while (!(riccati_explosion_time(p, hi, opt) < p.t)) {
        lo = hi;
        step *= 2.0;
        hi = start + dir * step;
        if (step > 1e6) throw BracketError("riccati_critical_moment: no explosion found");
    }
    while (std::abs(hi - lo) > tol) {
        const double mid = 0.5 * (lo + hi);
        if (riccati_explosion_time(p, mid, opt) < p.t) hi = mid; else lo = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace mixedvol::oracles
