#include "mixedvol/nig.hpp"

#include "mixedvol/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace mixedvol {

void NIGParams::validate() const {
    std::ostringstream os;
    if (!(alpha > 0.0) || !std::isfinite(alpha)) os << "alpha must be positive; ";
    if (!(delta > 0.0) || !std::isfinite(delta)) os << "delta must be positive; ";
    if (!(t > 0.0) || !std::isfinite(t)) os << "t must be positive; ";
    const std::string msg = os.str();
    if (!msg.empty()) throw DomainError("NIGParams: " + msg.substr(0, msg.size() - 2));
}

double nig_k(const NIGParams& p) {
    const double adt = p.alpha * p.delta * p.t;
    return adt * std::exp(adt) / std::numbers::pi;
}

NigDensityValue nig_log_density_checked(const NIGParams& p, double y) {
    p.validate();
    const double dt = p.delta * p.t;
    const double rad = std::hypot(y, dt);
    const double adt = p.alpha * dt;
    const double lv = std::log(adt / std::numbers::pi) + adt + numerics::log_bessel_k1(p.alpha * rad) - std::log(rad);
    const double v = std::exp(lv);
    return {v, lv, v == 0.0};
}

double nig_log_density(const NIGParams& p, double y) { return nig_log_density_checked(p, y).value; }

double log_nig_price_density(const NIGParams& p, double x) {
    if (!(x > 0.0)) throw DomainError("nig_price_density: x must be positive");
    const double y = std::log(x);
    return nig_log_density_checked(p, y).log_value - y;
}

double nig_price_density(const NIGParams& p, double x) { return std::exp(log_nig_price_density(p, x)); }

TailAsymptote nig_tail_asymptote(const NIGParams& p) {
    p.validate();
    TailAsymptote a;
    a.r1 = nig_k(p) * std::sqrt(std::numbers::pi / (2.0 * p.alpha));
    a.r2 = 0.0;
    a.r3 = p.alpha + 1.0;
    a.r4 = -1.5;
    a.side = TailSide::AtInfinity;
    a.error_order = ErrorOrder::InvLog;
    return a;
}

TailAsymptote nig_zero_asymptote(const NIGParams& p) {
    TailAsymptote a = nig_tail_asymptote(p);
    a.r3 = p.alpha - 1.0;
    a.side = TailSide::AtZero;
    a.extrapolated = true;
    return a;
}

double nig_tail_value(const NIGParams& p, double x, double guard) {
    const double L = std::log(x);
    if (!(L >= guard)) {
        std::ostringstream os;
        os << "nig tail asymptote: log x = " << L << " below the regime guard " << guard;
        throw RegimeError(os.str());
    }
    return nig_tail_asymptote(p).value(x);
}

double log_nig_mgf(const NIGParams& p, double s) {
    p.validate();
    if (!(std::abs(s) < p.alpha)) {
        std::ostringstream os;
        os << "NIG moment of order " << s << " requires |s| < alpha = " << p.alpha;
        throw MomentExplosionError(os.str());
    }
    return p.delta * p.t * (p.alpha - std::sqrt(p.alpha * p.alpha - s * s));
}

double nig_mgf(const NIGParams& p, double s) { return std::exp(log_nig_mgf(p, s)); }

std::complex<double> nig_log_cf(const NIGParams& p, std::complex<double> w) {
    return p.delta * p.t * (p.alpha - std::sqrt(p.alpha * p.alpha + w * w));
}

double nig_no_arb_drift(const NIGParams& p) {
    p.validate();
    if (p.alpha < 1.0) {
        std::ostringstream os;
        os << "no martingale drift exists for alpha = " << p.alpha << " < 1";
        throw NoArbitrageError(os.str());
    }
    return p.delta * (std::sqrt(p.alpha * p.alpha - 1.0) - p.alpha);
}

double sample_inverse_gaussian(double mean, double shape, numerics::RngStream& rng) {
    // Michael, Schucany and Haas: root of the chi-square transform, then a
    // coin flip between the two roots.
    const double n = rng.normal();
    const double y = n * n;
    const double my = mean * y;
    const double root = std::sqrt(4.0 * shape * my + my * my);
    const double x = 4.0 * shape * mean * my / ((root + my) * (root + my));  // smaller root, cancellation-free
    if (!(x > 0.0)) return mean;
    return rng.uniform() <= mean / (mean + x) ? x : mean * mean / x;
}

double sample_nig(const NIGParams& p, numerics::RngStream& rng) {
    const double dt = p.delta * p.t;
    const double tau = sample_inverse_gaussian(dt / p.alpha, dt * dt, rng);
    return std::sqrt(tau) * rng.normal();
}

}  // namespace mixedvol
