#include "mixedvol/heston.hpp"

#include "mixedvol/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace mixedvol {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Second-order forward-mode jet: value, first and second derivative.
struct Jet {
    double v, d, dd;
};

Jet operator+(Jet a, Jet b) { return {a.v + b.v, a.d + b.d, a.dd + b.dd}; }
Jet operator-(Jet a, Jet b) { return {a.v - b.v, a.d - b.d, a.dd - b.dd}; }
Jet operator-(Jet a) { return {-a.v, -a.d, -a.dd}; }
Jet operator*(Jet a, Jet b) { return {a.v * b.v, a.d * b.v + a.v * b.d, a.dd * b.v + 2.0 * a.d * b.d + a.v * b.dd}; }
Jet operator*(double k, Jet a) { return {k * a.v, k * a.d, k * a.dd}; }
Jet operator+(double k, Jet a) { return {k + a.v, a.d, a.dd}; }

Jet apply(Jet a, double f, double f1, double f2) { return {f, f1 * a.d, f2 * a.d * a.d + f1 * a.dd}; }
Jet inv(Jet a) {
    const double v = 1.0 / a.v;
    return apply(a, v, -v * v, 2.0 * v * v * v);
}
Jet operator/(Jet a, Jet b) { return a * inv(b); }
Jet jsqrt(Jet a) {
    const double r = std::sqrt(a.v);
    return apply(a, r, 0.5 / r, -0.25 / (r * a.v));
}
Jet jatan(Jet a) {
    const double q = 1.0 / (1.0 + a.v * a.v);
    return apply(a, std::atan(a.v), q, -2.0 * a.v * q * q);
}
Jet jlog(Jet a) { return apply(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v)); }

struct Branch {
    double beta, delta;
};

Branch classify(const HestonParams& p, double s) {
    const double beta = p.b - p.c * p.rho * s;
    const double delta = beta * beta - p.c * p.c * (s * s - s);
    return {beta, delta};
}

// Closed-form T*(s) on the finite branches; never called when T* = inf.
Jet explosion_jet(const HestonParams& p, double s) {
    const Jet S{s, 1.0, 0.0};
    const Jet beta = p.b + (-(p.c * p.rho)) * S;
    const Jet delta = beta * beta - (p.c * p.c) * (S * S - S);
    if (delta.v < 0.0) {
        const Jet omega = jsqrt(-delta);
        return (2.0 * (0.5 * kPi + jatan(beta / omega))) / omega;
    }
    const Jet D = jsqrt(delta);
    return jlog((-beta + D) / (-beta - D)) / D;
}

double heston_strip_check(const HestonParams& p, double s) {
    if (s >= 0.0 && s <= 1.0) return kInf;
    return explosion_time(p, s);
}

}  // namespace

void HestonParams::validate() const {
    std::ostringstream os;
    if (!(a >= 0.0)) os << "a must be >= 0; ";
    if (!(b >= 0.0)) os << "b must be >= 0; ";
    if (!(c > 0.0)) os << "c must be > 0; ";
    if (!(rho > -1.0 && rho <= 0.0)) os << "rho must lie in (-1, 0] (tail formulas are unproven for rho > 0); ";
    if (!(x0 > 0.0)) os << "x0 must be > 0; ";
    if (!(y0 > 0.0)) os << "y0 must be > 0; ";
    if (!(t > 0.0)) os << "t must be > 0; ";
    if (!std::isfinite(mu)) os << "mu must be finite; ";
    const std::string msg = os.str();
    if (!msg.empty()) throw DomainError("invalid Heston parameters: " + msg);
}

double explosion_time(const HestonParams& p, double s) {
    if (s >= 0.0 && s <= 1.0) return kInf;
    const Branch br = classify(p, s);
    if (br.delta < 0.0) {
        const double omega = std::sqrt(-br.delta);
        return 2.0 * std::atan2(omega, -br.beta) / omega;
    }
    if (br.beta >= 0.0) return kInf;
    if (br.delta == 0.0) return 2.0 / (-br.beta);
    const double D = std::sqrt(br.delta);
    // log((-beta + D)/(-beta - D)) / D written as 2 atanh(D / -beta) / D.
    return 2.0 * std::atanh(D / (-br.beta)) / D;
}

ExplosionDerivatives explosion_time_derivatives(const HestonParams& p, double s) {
    const double v = explosion_time(p, s);
    if (!std::isfinite(v)) return {v, 0.0, 0.0};
    const Branch br = classify(p, s);
    if (br.delta == 0.0) {
        // Exactly on the branch switch: fall back to central differences.
        const double h = 1e-5 * std::max(1.0, std::abs(s));
        const double fp = explosion_time(p, s + h), fm = explosion_time(p, s - h);
        return {v, (fp - fm) / (2.0 * h), (fp - 2.0 * v + fm) / (h * h)};
    }
    const Jet j = explosion_jet(p, s);
    return {v, j.d, j.dd};
}

CriticalMoments critical_moments(const HestonParams& p, const Tolerance& tol) {
    p.validate();
    auto g = [&](double s) {
        const double T = explosion_time(p, s);
        return std::isfinite(T) ? T - p.t : kInf;
    };
    auto search = [&](double start, double direction) {
        double lo = start;
        double step = 1.0;
        double hi = start + direction * step;
        int doublings = 0;
        while (!(g(hi) < 0.0)) {
            lo = hi;
            step *= 2.0;
            hi = start + direction * step;
            if (++doublings > 60) {
                std::ostringstream os;
                os << "critical moment search failed: T*(s) >= t up to s=" << hi;
                throw BracketError(os.str());
            }
        }
        Tolerance rt = tol;
        rt.abs = std::max(tol.abs, 1e-15);
        return numerics::find_root(g, lo, hi, rt);
    };
    CriticalMoments m{};
    m.t = p.t;
    m.s_plus = search(1.0 + 1e-9, +1.0);
    m.s_minus = search(-1e-9, -1.0);
    const auto dp = explosion_time_derivatives(p, m.s_plus);
    const auto dm = explosion_time_derivatives(p, m.s_minus);
    m.sigma_plus = -dp.first;
    m.sigma_minus = std::abs(dm.first);
    m.kappa_plus = dp.second;
    m.kappa_minus = dm.second;
    if (!(m.sigma_plus > 0.0) || !(m.sigma_minus > 0.0)) {
        throw DomainError("critical slopes are not positive; explosion time is flat at the critical moment");
    }
    return m;
}

namespace {

// log of { 2 sqrt(Delta) / (c^2 s (s-1) sinh(t sqrt(Delta)/2)) }, with the
// ratio sqrt(Delta)/sinh(t sqrt(Delta)/2) continued to omega/sin(t omega/2)
// when Delta < 0 (the ratio is an even analytic function of sqrt(Delta)).
double log_sinh_bracket(const HestonParams& p, double s, bool& sin_branch) {
    const Branch br = classify(p, s);
    const double half_t = 0.5 * p.t;
    double ratio;
    if (br.delta > 0.0) {
        const double r = std::sqrt(br.delta);
        ratio = r / std::sinh(half_t * r);
        sin_branch = false;
    } else if (br.delta < 0.0) {
        const double w = std::sqrt(-br.delta);
        const double sn = std::sin(half_t * w);
        if (!(sn > 0.0)) throw DomainError("sin continuation of the A1 bracket is not positive");
        ratio = w / sn;
        sin_branch = true;
    } else {
        ratio = 1.0 / half_t;
        sin_branch = false;
    }
    const double denom = p.c * p.c * s * (s - 1.0);
    return std::log(2.0 * ratio / denom);
}

double log_A1_generic(const HestonParams& p, double s, double sigma, double kappa, bool& sin_branch) {
    const double ac2 = p.a / (p.c * p.c);
    const double c2 = p.c * p.c;
    const double crsb = p.c * p.rho * s - p.b;
    double v = -0.5 * std::log(kPi) + (-0.75 - ac2) * std::log(2.0) + (0.25 - ac2) * std::log(p.y0) +
               (2.0 * ac2 - 0.5) * std::log(p.c) + (-ac2 - 0.25) * std::log(sigma);
    v += -p.y0 * (crsb / c2 + kappa / (c2 * sigma * sigma)) - (p.a * p.t / c2) * crsb;
    v += 2.0 * ac2 * log_sinh_bracket(p, s, sin_branch);
    return v;
}

}  // namespace

HestonTailConstants tail_constants(const HestonParams& p, const CriticalMoments& m) {
    p.validate();
    HestonTailConstants k{};
    const double logA1 = log_A1_generic(p, m.s_plus, m.sigma_plus, m.kappa_plus, k.A1_sin_branch);
    const double logA1t = log_A1_generic(p, m.s_minus, m.sigma_minus, m.kappa_minus, k.A1t_sin_branch);
    k.A1 = std::exp(logA1);
    k.A1t = std::exp(logA1t);
    k.A2 = 2.0 * std::sqrt(2.0 * p.y0) / p.c / std::sqrt(m.sigma_plus);
    k.A2t = 2.0 * std::sqrt(2.0 * p.y0) / p.c / std::sqrt(m.sigma_minus);
    k.A3 = m.s_plus + 1.0;
    k.A3t = -(m.s_minus + 1.0);
    // Scaling X = m X' with m = x0 e^{mu t} maps x^{-A3} to m^{A3-1} x^{-A3}
    // and x^{A3~} to m^{-A3~-1} x^{A3~} (the density picks up a 1/m Jacobian).
    const double log_scale = std::log(p.x0) + p.mu * p.t;
    k.B1 = std::exp(logA1 + (k.A3 - 1.0) * log_scale);
    k.B1t = std::exp(logA1t + (-k.A3t - 1.0) * log_scale);
    return k;
}

HestonTailConstants tail_constants(const HestonParams& p) { return tail_constants(p, critical_moments(p)); }

TailAsymptote heston_tail_asymptote(const HestonParams& p, const HestonTailConstants& k) {
    TailAsymptote t;
    t.r1 = k.B1;
    t.r2 = k.A2;
    t.r3 = k.A3;
    t.r4 = -0.75 + p.a / (p.c * p.c);
    t.side = TailSide::AtInfinity;
    t.error_order = ErrorOrder::InvSqrtLog;
    return t;
}

TailAsymptote heston_zero_asymptote(const HestonParams& p, const HestonTailConstants& k) {
    TailAsymptote t;
    t.r1 = k.B1t;
    t.r2 = k.A2t;
    t.r3 = k.A3t;
    t.r4 = -0.75 + p.a / (p.c * p.c);
    t.side = TailSide::AtZero;
    t.error_order = ErrorOrder::InvSqrtLog;
    return t;
}

double density_tail(const HestonParams& p, double x) {
    const double guard = std::max(p.x0 * std::exp(p.mu * p.t), std::exp(1.0));
    if (!(x > guard)) {
        std::ostringstream os;
        os << "density_tail: x=" << x << " is inside the guard region x <= " << guard;
        throw RegimeError(os.str());
    }
    return heston_tail_asymptote(p, tail_constants(p)).value(x);
}

double density_zero(const HestonParams& p, double x) {
    const double guard = std::min(p.x0 * std::exp(p.mu * p.t), std::exp(-1.0));
    if (!(x > 0.0 && x < guard)) {
        std::ostringstream os;
        os << "density_zero: x=" << x << " is outside the regime 0 < x < " << guard;
        throw RegimeError(os.str());
    }
    return heston_zero_asymptote(p, tail_constants(p)).value(x);
}

double log_mgf(const HestonParams& p, double s) {
    p.validate();
    if (s == 0.0) return 0.0;
    const double T = heston_strip_check(p, s);
    if (!(T > p.t)) {
        std::ostringstream os;
        os << "moment of order " << s << " is infinite at t=" << p.t << " (explosion time " << T << ")";
        throw MomentExplosionError(os.str());
    }
    const Branch br = classify(p, s);
    const double ht = 0.5 * p.t;
    double C, S;  // cosh(g t/2) and sinh(g t/2)/g, continued to cos/sin when Delta < 0
    if (br.delta > 0.0) {
        const double g = std::sqrt(br.delta);
        C = std::cosh(g * ht);
        S = std::sinh(g * ht) / g;
    } else if (br.delta < 0.0) {
        const double w = std::sqrt(-br.delta);
        C = std::cos(w * ht);
        S = std::sin(w * ht) / w;
    } else {
        C = 1.0;
        S = ht;
    }
    const double den = C + br.beta * S;
    const double c2 = p.c * p.c;
    double logden;
    if (br.delta > 0.0) {
        // Large g t: work with the exponentially scaled quantities.
        const double g = std::sqrt(br.delta);
        const double e = std::exp(-2.0 * g * ht);
        logden = g * ht + std::log(0.5 * (1.0 + e) + br.beta * 0.5 * (1.0 - e) / g);
    } else {
        logden = std::log(den);
    }
    double Bratio;
    if (br.delta > 0.0) {
        const double g = std::sqrt(br.delta);
        const double e = std::exp(-2.0 * g * ht);
        Bratio = (0.5 * (1.0 - e) / g) / (0.5 * (1.0 + e) + br.beta * 0.5 * (1.0 - e) / g);
    } else {
        Bratio = S / den;
    }
    const double B = (s * s - s) * Bratio;
    const double A = (p.a / c2) * (br.beta * p.t - 2.0 * logden);
    return s * (std::log(p.x0) + p.mu * p.t) + A + B * p.y0;
}

double mgf(const HestonParams& p, double s) { return std::exp(log_mgf(p, s)); }

std::complex<double> log_cf(const HestonParams& p, std::complex<double> w) {
    using cd = std::complex<double>;
    const cd i(0.0, 1.0);
    const cd s = i * w;
    const double c2 = p.c * p.c;
    const cd beta = p.b - p.c * p.rho * s;
    cd D = std::sqrt(beta * beta - c2 * (s * s - s));
    if (std::real(D) < 0.0) D = -D;
    const cd g = (beta - D) / (beta + D);
    const cd e = std::exp(-D * p.t);
    const cd A = (p.a / c2) * ((beta - D) * p.t - 2.0 * std::log((1.0 - g * e) / (1.0 - g)));
    const cd B = ((beta - D) / c2) * (1.0 - e) / (1.0 - g * e);
    return s * (std::log(p.x0) + p.mu * p.t) + A + B * p.y0;
}

}  // namespace mixedvol
