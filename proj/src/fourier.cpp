#include "mixedvol/fourier.hpp"

#include "mixedvol/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace mixedvol {

TiltedFourierInverter::TiltedFourierInverter(LogCharacteristic log_cf, double theta_lo, double theta_hi,
                                             FourierOptions opt)
    : log_cf_(std::move(log_cf)), lo_(theta_lo), hi_(theta_hi), opt_(opt) {
    if (!(theta_lo < 0.0 && theta_hi > 0.0)) throw DomainError("Fourier inverter: the strip must contain 0");
    if (!(opt.step > 0.0) || !(opt.cutoff > 0.0)) throw DomainError("Fourier inverter: invalid options");
}

double TiltedFourierInverter::log_mgf(double theta) const {
    return std::real(log_cf_({0.0, -theta}));
}

double TiltedFourierInverter::saddle_tilt(double y) const {
    const double width = hi_ - lo_;
    const double gap = std::min(opt_.boundary_gap, 0.1 * width);
    const double a = std::isfinite(lo_) ? lo_ + gap : -50.0;
    const double b = std::isfinite(hi_) ? hi_ - gap : 50.0;
    auto f = [&](double th) {
        const double v = log_mgf(th) - th * y;
        return std::isfinite(v) ? v : std::numeric_limits<double>::max();
    };
    return numerics::minimize_scalar(f, a, b, 1e-8);
}

FourierDensity TiltedFourierInverter::density(double y) const { return density_at_tilt(y, saddle_tilt(y)); }

FourierDensity TiltedFourierInverter::density_at_tilt(double y, double theta) const {
    if (!(theta > lo_ && theta < hi_)) throw StripError("Fourier inverter: tilt outside the moment strip");
    const double K = log_mgf(theta);
    // The alias period 2 pi / h must cover the tilted law: its exponential
    // tail (rate d, the distance to the strip edge) and its bulk (sd sqrt K'').
    const double d = std::min(theta - lo_, hi_ - theta);
    const double dt = 0.1 * d;
    const double k2 = (log_mgf(theta + dt) - 2.0 * K + log_mgf(theta - dt)) / (dt * dt);
    const double spread = 40.0 / d + 20.0 * std::sqrt(std::max(k2, 0.0));
    const double h = std::min(opt_.step, 2.0 * std::numbers::pi / spread);
    auto term = [&](double v) {
        const std::complex<double> lc = log_cf_({v, -theta}) - K;
        const std::complex<double> z = std::exp(lc + std::complex<double>(0.0, -v * y));
        return std::pair<double, double>{z.real(), std::exp(lc.real())};
    };
    double sum = 0.5 * term(0.0).first;
    double tail = 0.0;
    int quiet = 0;
    long j = 1;
    for (; j < opt_.max_terms; ++j) {
        const auto [re, mod] = term(j * h);
        sum += re;
        if (mod < opt_.cutoff) {
            tail += mod;
            if (++quiet >= opt_.patience) break;
        } else {
            quiet = 0;
            tail = 0.0;
        }
    }
    if (j >= opt_.max_terms) {
        std::ostringstream os;
        os << "Fourier inversion at y=" << y << " did not reach the cutoff within " << opt_.max_terms << " nodes";
        throw ConvergenceError(os.str(), sum, tail);
    }
    const double scaled = sum * h / std::numbers::pi;
    if (!(scaled > 0.0)) {
        std::ostringstream os;
        os << "Fourier inversion at y=" << y << " lost all relative accuracy (tilt " << theta << ")";
        throw ConvergenceError(os.str(), 0.0, std::abs(scaled));
    }
    const double lv = -theta * y + K + std::log(scaled);
    return {std::exp(lv), lv, theta, j, tail * h / std::numbers::pi / scaled};
}

}  // namespace mixedvol
