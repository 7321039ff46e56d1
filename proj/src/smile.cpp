#include "mixedvol/smile.hpp"

#include "mixedvol/errors.hpp"
#include "mixedvol/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace mixedvol {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

double log_pdf(double d) { return -0.5 * d * d - kLogSqrt2Pi; }

// 1 - u R(u), R the Mills ratio. The continued fraction
// R(u) = 1/(u + 1/(u + 2/(u + 3/(u + ...)))) gives 1 - u R = c/(u + c) without cancellation.
double one_minus_u_mills(double u) {
    if (u < 5.0) return 1.0 - u * numerics::mills_ratio(u);
    double c = 0.0;
    for (int n = 80; n >= 2; --n) c = n / (u + c);
    c = 1.0 / (u + c);
    return c / (u + c);
}

// R(z) - R(z + s) > 0 for s > 0.
double mills_drop(double z, double s) {
    if (s >= 0.1 * std::max(1.0, std::abs(z))) return numerics::mills_ratio(z) - numerics::mills_ratio(z + s);
    // R' = u R - 1, so the drop is the integral of 1 - u R over [z, z + s].
    return numerics::integrate(one_minus_u_mills, z, z + s, {1e-13, 1e-300, 200});
}

void check_bs_inputs(double x0, double K, double T, double sigma) {
    if (!(x0 > 0.0) || !(K > 0.0) || !(T > 0.0) || !(sigma >= 0.0) || !std::isfinite(sigma)) {
        std::ostringstream os;
        os << "Black-Scholes: invalid inputs x0=" << x0 << " K=" << K << " T=" << T << " sigma=" << sigma;
        throw DomainError(os.str());
    }
}

}  // namespace

double log_bs_call(double x0, double K, double T, double sigma) {
    check_bs_inputs(x0, K, T, sigma);
    const double s = sigma * std::sqrt(T);
    const double k = std::log(K / x0);
    if (s == 0.0) return std::log(std::max(x0 - K, 0.0));
    if (k < 0.0) return std::log(x0 - K + std::exp(log_bs_put(x0, K, T, sigma)));
    const double d1 = -k / s + 0.5 * s;
    return std::log(x0) + log_pdf(d1) + std::log(mills_drop(-d1, s));
}

double log_bs_put(double x0, double K, double T, double sigma) {
    check_bs_inputs(x0, K, T, sigma);
    const double s = sigma * std::sqrt(T);
    const double k = std::log(K / x0);
    if (s == 0.0) return std::log(std::max(K - x0, 0.0));
    if (k > 0.0) return std::log(K - x0 + std::exp(log_bs_call(x0, K, T, sigma)));
    const double d1 = -k / s + 0.5 * s;
    return std::log(x0) + log_pdf(d1) + std::log(mills_drop(d1 - s, s));
}

double bs_call(double x0, double K, double T, double sigma) { return std::exp(log_bs_call(x0, K, T, sigma)); }
double bs_put(double x0, double K, double T, double sigma) { return std::exp(log_bs_put(x0, K, T, sigma)); }

double bs_implied_vol_log_otm(double log_price, double x0, double K, double T) {
    check_bs_inputs(x0, K, T, 0.0);
    const bool call = K >= x0;
    const double cap = call ? std::log(x0) : std::log(K);
    if (!(log_price < cap) || std::isnan(log_price)) {
        std::ostringstream os;
        os << "implied vol: out-of-the-money " << (call ? "call" : "put") << " price exp(" << log_price
           << ") is not below " << (call ? "x0" : "K");
        throw NoArbitrageError(os.str());
    }
    if (log_price == -INFINITY) throw NoArbitrageError("implied vol: price equals intrinsic value");
    auto f = [&](double sig) {
        return (call ? log_bs_call(x0, K, T, sig) : log_bs_put(x0, K, T, sig)) - log_price;
    };
    double lo = 1e-8, hi = 10.0;
    for (int i = 0; i < 60 && f(hi) < 0.0; ++i) hi *= 2.0;
    for (int i = 0; i < 60 && f(lo) > 0.0; ++i) lo *= 0.1;
    if (f(hi) < 0.0 || f(lo) > 0.0) {
        std::ostringstream os;
        os << "implied vol: could not bracket log price " << log_price << " at K=" << K;
        throw BracketError(os.str());
    }
    return numerics::find_root(f, lo, hi, {1e-15, 1e-16, 500});
}

double bs_implied_vol(double price, double x0, double K, double T) {
    check_bs_inputs(x0, K, T, 0.0);
    const double intrinsic = std::max(x0 - K, 0.0);
    if (!(price > intrinsic && price < x0)) {
        std::ostringstream os;
        os << "implied vol: call price " << price << " outside (" << intrinsic << ", " << x0 << ")";
        throw NoArbitrageError(os.str());
    }
    const double otm = K >= x0 ? price : price - intrinsic;
    return bs_implied_vol_log_otm(std::log(otm), x0, K, T);
}

TailAsymptote normalised_tail(const TailAsymptote& tail, double x0) {
    if (!(x0 > 0.0)) throw DomainError("normalised_tail: x0 must be positive");
    TailAsymptote n = tail;
    const double e = tail.side == TailSide::AtInfinity ? 1.0 - tail.r3 : 1.0 + tail.r3;
    n.r1 = tail.r1 * std::pow(x0, e);
    return n;
}

TailAsymptote reflected_tail(const TailAsymptote& zero_tail, double x0) {
    if (zero_tail.side != TailSide::AtZero) throw DomainError("reflected_tail needs a tail at zero");
    TailAsymptote r = normalised_tail(zero_tail, x0);
    r.side = TailSide::AtInfinity;
    r.r3 = zero_tail.r3 + 3.0;
    return r;
}

double log_call_asymptote(const TailAsymptote& tail, double K, double x0, double T,
                          const AsymptoticPriceOptions& opt) {
    check_bs_inputs(x0, K, T, 0.0);
    if (tail.side != TailSide::AtInfinity) throw DomainError("call_asymptote needs a tail at infinity");
    if (!(tail.r3 > 2.0)) {
        std::ostringstream os;
        os << "call price is infinite: density exponent r3=" << tail.r3 << " <= 2";
        throw DivergenceError(os.str());
    }
    const double L = std::log(K / x0);
    if (!(L >= opt.min_log_moneyness)) {
        std::ostringstream os;
        os << "call_asymptote: log(K/x0)=" << L << " below the regime guard " << opt.min_log_moneyness;
        throw RegimeError(os.str());
    }
    const TailAsymptote n = normalised_tail(tail, x0);
    return std::log(x0) + std::log(n.r1) - std::log((n.r3 - 1.0) * (n.r3 - 2.0)) + n.r4 * std::log(L) +
           n.r2 * std::sqrt(L) + (2.0 - n.r3) * L;
}

double call_asymptote(const TailAsymptote& tail, double K, double x0, double T, const AsymptoticPriceOptions& opt) {
    return std::exp(log_call_asymptote(tail, K, x0, T, opt));
}

double log_put_asymptote(const TailAsymptote& zero_tail, double K, double x0, double T,
                         const AsymptoticPriceOptions& opt) {
    check_bs_inputs(x0, K, T, 0.0);
    const TailAsymptote g = reflected_tail(zero_tail, x0);
    // P(K) = x0 P^(k), P^(k) = k G(1/k), k = K/x0.
    return std::log(x0) + std::log(K / x0) + log_call_asymptote(g, x0 / K, 1.0, T, opt);
}

void SmileExpansion::validate() const {
    const double v[] = {c_lead, c_const, c_llog, c_inv, c_llog2};
    for (double c : v) {
        if (!std::isfinite(c)) throw DomainError("smile expansion: non-finite coefficient");
    }
    if (!(c_lead > 0.0)) throw DomainError("smile expansion: leading coefficient must be positive");
}

double SmileExpansion::log_moneyness(double K) const {
    if (!(K > 0.0)) throw DomainError("smile expansion: strike must be positive");
    const double L = wing == Wing::Large ? std::log(K / x0) : std::log(x0 / K);
    if (!(L > 0.0)) {
        std::ostringstream os;
        os << "strike " << K << " is not on the " << to_string(wing) << " wing of x0=" << x0;
        throw RegimeError(os.str());
    }
    return L;
}

SmileExpansion large_wing_expansion(double r1, double r2, double r3, double r4, double T, double x0,
                                    FourthTerm fourth) {
    if (!(r3 > 2.0)) throw DivergenceError("large-strike expansion needs r3 > 2");
    if (!(r1 > 0.0) || !(T > 0.0)) throw DomainError("large-strike expansion needs r1 > 0 and T > 0");
    const double a = std::sqrt(r3 - 1.0), b = std::sqrt(r3 - 2.0);
    const double s2T = std::sqrt(2.0 * T);
    const double D = 1.0 / b - 1.0 / a;
    const double E = 1.0 / (b * b * b) - 1.0 / (a * a * a);
    SmileExpansion e;
    e.wing = Wing::Large;
    e.c_lead = std::sqrt(2.0) / std::sqrt(T) * (a - b);
    e.c_const = r2 / s2T * D;
    e.c_llog = (2.0 * r4 + 1.0) / (2.0 * s2T) * D;
    const double c0 = std::log(a * b * (a - b) / (2.0 * std::sqrt(std::numbers::pi) * r1));
    e.c_inv = (fourth == FourthTerm::Derived ? -D * c0 : c0) / s2T + r2 * r2 / (4.0 * s2T) * E;
    e.c_llog2 = r2 * (2.0 * r4 + 1.0) / (4.0 * s2T) * E;
    e.x0 = x0;
    e.T = T;
    e.p1 = r1;
    e.p2 = r2;
    e.p3 = r3;
    e.p4 = r4;
    e.validate();
    return e;
}

SmileExpansion small_wing_expansion(double s1, double s2, double s3, double s4, double T, double x0,
                                    FourthTerm fourth) {
    if (!(s3 > 0.0)) throw DivergenceError("small-strike expansion needs s3 > 0");
    if (!(s1 > 0.0) || !(T > 0.0)) throw DomainError("small-strike expansion needs s1 > 0 and T > 0");
    const double up = std::sqrt(s3 + 1.0), dn = std::sqrt(s3);
    const double w = 1.0 / std::sqrt(2.0 * T);
    const double gap = 1.0 / dn - 1.0 / up;
    const double gap3 = std::pow(s3, -1.5) - std::pow(s3 + 1.0, -1.5);
    SmileExpansion e;
    e.wing = Wing::Small;
    e.c_lead = std::sqrt(2.0 / T) * (up - dn);
    e.c_const = s2 * w * gap;
    e.c_llog = (2.0 * s4 + 1.0) * w / 2.0 * gap;
    const double lg = std::log(up * dn * (up - dn) / (2.0 * std::sqrt(std::numbers::pi) * s1));
    e.c_inv = w * (fourth == FourthTerm::Derived ? -gap * lg : lg) + s2 * s2 * w / 4.0 * gap3;
    e.c_llog2 = s2 * (2.0 * s4 + 1.0) * w / 4.0 * gap3;
    e.x0 = x0;
    e.T = T;
    e.p1 = s1;
    e.p2 = s2;
    e.p3 = s3;
    e.p4 = s4;
    e.validate();
    return e;
}

namespace {

void require_martingale(const MixedModel& m) {
    const double mu = m.heston().mu;
    const double target = m.risk_neutral_drift();
    if (std::abs(mu - target) > 1e-12 * std::max(1.0, std::abs(target))) {
        std::ostringstream os;
        os << "smile: drift mu=" << mu << " is not the martingale drift " << target
           << "; install it with MixedModel::risk_neutral()";
        throw NoArbitrageError(os.str());
    }
}

}  // namespace

SmileExpansion smile_expansion(const MixedModel& m, Wing wing, double rel_tol, FourthTerm fourth) {
    require_martingale(m);
    const double x0 = m.heston().x0, T = m.t();
    const auto regime = classify_wing(m, wing, rel_tol);
    const TailAsymptote tail = normalised_tail(mixed_asymptote(m, wing, rel_tol), x0);
    SmileExpansion e = wing == Wing::Large
                           ? large_wing_expansion(tail.r1, tail.r2, tail.r3, tail.r4, T, x0, fourth)
                           : small_wing_expansion(tail.r1, tail.r2, tail.r3 + 1.0, tail.r4, T, x0, fourth);
    e.dominant = regime.dominant;
    e.extrapolated = tail.extrapolated;
    return e;
}

double implied_vol_approx(const SmileExpansion& e, double K, const SmileGuard& guard) {
    const double L = e.log_moneyness(K);
    if (!(L >= std::max(guard.min_log_moneyness, 1.0 + 1e-12))) {
        std::ostringstream os;
        os << "implied_vol_approx: L=" << L << " below the regime guard " << guard.min_log_moneyness;
        throw RegimeError(os.str());
    }
    const double sL = std::sqrt(L), lL = std::log(L);
    return e.c_lead * sL + e.c_const + e.c_llog * lL / sL + e.c_inv / sL + e.c_llog2 * lL / L;
}

double implied_vol_from_asymptotic_price(const MixedModel& m, Wing wing, double K, double rel_tol,
                                         const AsymptoticPriceOptions& opt) {
    require_martingale(m);
    const double x0 = m.heston().x0, T = m.t();
    if (wing == Wing::Large) {
        if (!(K > x0)) throw RegimeError("large-wing strike must exceed x0");
        return bs_implied_vol_log_otm(log_call_asymptote(mixed_tail_asymptote(m, rel_tol), K, x0, T, opt), x0, K, T);
    }
    if (!(K < x0)) throw RegimeError("small-wing strike must be below x0");
    return bs_implied_vol_log_otm(log_put_asymptote(mixed_zero_asymptote(m, rel_tol), K, x0, T, opt), x0, K, T);
}

}  // namespace mixedvol
