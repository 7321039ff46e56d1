#include "mixedvol/mellin.hpp"

#include "mixedvol/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace mixedvol {

namespace {

double integrate_split(const numerics::RealFunction& g, std::vector<double> breaks, const Tolerance& tol) {
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    double total = 0.0;
    double lo = -INFINITY;
    for (double b : breaks) {
        total += numerics::integrate(g, lo, b, tol);
        lo = b;
    }
    total += numerics::integrate(g, lo, INFINITY, tol);
    return total;
}

}  // namespace

ErrorOrder coarser(ErrorOrder a, ErrorOrder b) noexcept {
    return (a == ErrorOrder::InvSqrtLog || b == ErrorOrder::InvSqrtLog) ? ErrorOrder::InvSqrtLog
                                                                        : ErrorOrder::InvLog;
}

const char* to_string(ErrorOrder e) noexcept {
    return e == ErrorOrder::InvSqrtLog ? "(log x)^(-1/2)" : "(log x)^(-1)";
}

const char* to_string(TailSide s) noexcept { return s == TailSide::AtInfinity ? "infinity" : "zero"; }

void TailAsymptote::validate() const {
    if (!(r1 > 0.0) || !std::isfinite(r1) || !(r2 >= 0.0) || !std::isfinite(r3) || !std::isfinite(r4)) {
        std::ostringstream os;
        os << "invalid tail asymptote (r1=" << r1 << ", r2=" << r2 << ", r3=" << r3 << ", r4=" << r4
           << "): need r1 > 0, r2 >= 0 and finite exponents";
        throw DomainError(os.str());
    }
}

double TailAsymptote::log_value(double x) const {
    if (!(x > 0.0)) throw DomainError("tail asymptote: x must be positive");
    return log_value_at_log(std::log(x));
}

double TailAsymptote::log_value_at_log(double lx) const {
    if (side == TailSide::AtInfinity) {
        if (!(lx > 0.0)) throw RegimeError("tail asymptote at infinity evaluated at x <= 1");
        return std::log(r1) - r3 * lx + r2 * std::sqrt(lx) + r4 * std::log(lx);
    }
    if (!(lx < 0.0)) throw RegimeError("tail asymptote at zero evaluated at x >= 1");
    const double L = -lx;
    return std::log(r1) + r3 * lx + r2 * std::sqrt(L) + r4 * std::log(L);
}

double TailAsymptote::value(double x) const { return std::exp(log_value(x)); }

double TailAsymptote::error_bound(double x) const {
    const double L = std::abs(std::log(x));
    return error_order == ErrorOrder::InvSqrtLog ? 1.0 / std::sqrt(L) : 1.0 / L;
}

double mellin_transform(const numerics::RealFunction& U, double z, const Tolerance& tol) {
    auto g = [&](double y) {
        const double u = U(std::exp(y));
        return u == 0.0 ? 0.0 : std::exp(-z * y + std::log(u));
    };
    auto diverges = [&](double y_near, double y_far) {
        const double a = std::abs(g(y_near));
        const double b = std::abs(g(y_far));
        return !std::isfinite(b) || (b > 0.0 && b >= a);
    };
    if (diverges(40.0, 80.0) || diverges(-40.0, -80.0)) {
        std::ostringstream os;
        os << "Mellin transform diverges at z=" << z;
        throw DivergenceError(os.str());
    }
    try {
        const double v = integrate_split(g, {0.0}, tol);
        if (!std::isfinite(v)) throw ConvergenceError("non-finite transform", v, INFINITY);
        return v;
    } catch (const ConvergenceError& e) {
        std::ostringstream os;
        os << "Mellin transform does not converge at z=" << z << " (" << e.what() << ")";
        throw DivergenceError(os.str());
    }
}

double mellin_convolve(const numerics::RealFunction& f, const numerics::RealFunction& g, double x,
                       const Tolerance& tol) {
    if (!(x > 0.0)) throw DomainError("mellin_convolve: x must be positive");
    const double lx = std::log(x);
    auto integrand = [&](double y) {
        const double gv = g(std::exp(y));
        if (gv == 0.0) return 0.0;
        return f(std::exp(lx - y)) * gv;
    };
    try {
        return integrate_split(integrand, {0.0, lx}, tol);
    } catch (const ConvergenceError& e) {
        std::ostringstream os;
        os << "Mellin convolution does not converge at x=" << x << " (" << e.what() << ")";
        throw DivergenceError(os.str());
    }
}

double kernel_transform(const MellinKernel& U, double z, const Tolerance& tol) {
    if (!U.strip.contains(z)) {
        std::ostringstream os;
        os << "Mellin transform of " << U.name << " requested at z=" << z << " outside its strip ("
           << U.strip.sigma << ", " << U.strip.tau << ")";
        throw StripError(os.str());
    }
    if (U.transform) return U.transform(z);
    return mellin_transform(U.density, z, tol);
}

MellinKernel reflect(const MellinKernel& U) {
    MellinKernel r;
    auto d = U.density;
    if (d) r.density = [d](double x) { return d(1.0 / x); };
    r.strip = {-U.strip.tau, -U.strip.sigma};
    if (U.transform) {
        auto tr = U.transform;
        r.transform = [tr](double z) { return tr(-z); };
    }
    r.name = U.name + "~";
    return r;
}

TailAsymptote reflect(const TailAsymptote& tail) {
    TailAsymptote r = tail;
    r.side = tail.side == TailSide::AtInfinity ? TailSide::AtZero : TailSide::AtInfinity;
    return r;
}

TailAsymptote convolve_asymptote_infinity(const MellinKernel& U, const TailAsymptote& f_tail,
                                          const Tolerance& tol) {
    f_tail.validate();
    if (f_tail.side != TailSide::AtInfinity) {
        throw DomainError("convolve_asymptote_infinity needs a tail given at infinity");
    }
    const double rho = -f_tail.r3;
    if (!U.strip.contains(rho)) {
        std::ostringstream os;
        os << "strip condition sigma < rho < tau fails: rho=" << rho << ", strip of " << U.name << " is ("
           << U.strip.sigma << ", " << U.strip.tau << ")";
        throw StripError(os.str());
    }
    TailAsymptote out = f_tail;
    out.r1 = f_tail.r1 * kernel_transform(U, rho, tol);
    return out;
}

TailAsymptote convolve_asymptote_zero(const MellinKernel& U, const TailAsymptote& f_zero,
                                      const Tolerance& tol) {
    if (f_zero.side != TailSide::AtZero) {
        throw DomainError("convolve_asymptote_zero needs a tail given at zero");
    }
    // U*f(x) = U~ * f~(1/x) with f~ behaving like x^{-r3} l(x) at infinity.
    return reflect(convolve_asymptote_infinity(reflect(U), reflect(f_zero), tol));
}

double zygmund_epsilon(const numerics::RealFunction& l, double x, const numerics::RealFunction& dl,
                       double rel_step) {
    if (!(x > 0.0)) throw DomainError("zygmund_epsilon: x must be positive");
    const double lx = l(x);
    if (lx == 0.0 || !std::isfinite(lx)) throw DomainError("zygmund_epsilon: l(x) must be nonzero and finite");
    double d;
    if (dl) {
        d = dl(x);
    } else {
        const double h = rel_step * x;
        d = (l(x + h) - l(x - h)) / (2.0 * h);
    }
    return x * d / lx;
}

double slow_variation_remainder(const numerics::RealFunction& l, double lambda, double x) {
    const double lx = l(x);
    if (lx == 0.0) throw DomainError("slow_variation_remainder: l(x) = 0");
    return l(lambda * x) / lx - 1.0;
}

}  // namespace mixedvol
