#include "mixedvol/numerics.hpp"

#include "mixedvol/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

namespace mixedvol {

void Tolerance::validate() const {
    if (!(rel > 0.0) || !(abs >= 0.0) || max_iter < 1) {
        std::ostringstream os;
        os << "invalid tolerance (rel=" << rel << ", abs=" << abs << ", max_iter=" << max_iter
           << "): need rel > 0, abs >= 0, max_iter >= 1";
        throw DomainError(os.str());
    }
}

namespace numerics {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// e^z K_1(z) by its Hankel expansion; only used for z > 30.
double bessel_k1_scaled_asymptotic(double z) {
    const double mu = 4.0;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 60; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = term * (mu - odd * odd) / (k * 8.0 * z);
        if (std::abs(next) > std::abs(term)) break;  // series starts to diverge
        term = next;
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return std::sqrt(kPi / (2.0 * z)) * sum;
}

double erfcx(double x) {
    if (x < 25.0) return std::exp(x * x) * std::erfc(x);
    // Continued fraction, evaluated backwards; converges fast for large x.
    double frac = 0.0;
    for (int k = 60; k >= 1; --k) frac = (0.5 * k) / (x + frac);
    return 1.0 / (std::sqrt(kPi) * (x + frac));
}

// QUADPACK 21-point Kronrod rule with embedded 10-point Gauss rule.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208067946310, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gauss_kronrod21(const RealFunction& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double resk = fc * kWgk[10];
    double resg = 0.0;
    double resabs = std::abs(resk);
    std::array<double, 10> fv1{}, fv2{};
    for (int j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += kWgk[j] * (f1 + f2);
        resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[10] * std::abs(fc - mean);
    for (int j = 0; j < 10; ++j) resasc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));

    const double value = resk * half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double uflow = std::numeric_limits<double>::min();
    if (resabs > uflow / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
    return {a, b, value, err};
}

QuadratureResult integrate_finite(const RealFunction& f, double a, double b, const Tolerance& tol) {
    std::priority_queue<Segment> heap;
    Segment first = gauss_kronrod21(f, a, b);
    if (!std::isfinite(first.value)) {
        throw ConvergenceError("integrand is not finite on the integration range", first.value,
                               std::numeric_limits<double>::infinity());
    }
    double total = first.value;
    double total_err = first.error;
    heap.push(first);
    int intervals = 1;
    while (total_err > std::max(tol.abs, tol.rel * std::abs(total))) {
        if (intervals >= tol.max_iter) {
            std::ostringstream os;
            os << "adaptive quadrature did not converge after " << intervals
               << " subintervals (estimate " << total << ", error " << total_err << ")";
            throw ConvergenceError(os.str(), total, total_err);
        }
        Segment worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b) ||
            std::abs(worst.b - worst.a) <= 4.0 * kEps * std::max(std::abs(worst.a), std::abs(worst.b))) {
            // Interval cannot be refined further in double precision.
            if (total_err <= 1e3 * kEps * std::abs(total) + tol.abs) break;
            std::ostringstream os;
            os << "adaptive quadrature hit the resolution limit (estimate " << total << ", error "
               << total_err << ")";
            throw ConvergenceError(os.str(), total, total_err);
        }
        heap.pop();
        const Segment left = gauss_kronrod21(f, worst.a, mid);
        const Segment right = gauss_kronrod21(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++intervals;
        if (!std::isfinite(total)) {
            throw ConvergenceError("integrand produced non-finite values", total, total_err);
        }
        // Resum occasionally to avoid drift from the running updates.
        if (intervals % 64 == 0) {
            auto copy = heap;
            double v = 0.0, e = 0.0;
            while (!copy.empty()) {
                v += copy.top().value;
                e += copy.top().error;
                copy.pop();
            }
            total = v;
            total_err = e;
        }
    }
    return {total, total_err, intervals};
}

}  // namespace

double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        std::ostringstream os;
        os << "log_gamma: argument must be positive and finite, got " << x;
        throw DomainError(os.str());
    }
    return std::lgamma(x);
}

BesselK1Value bessel_k1_checked(double z) {
    if (!(z > 0.0)) {
        std::ostringstream os;
        os << "bessel_k1: argument must be positive, got " << z;
        throw DomainError(os.str());
    }
    double scaled;
    if (z <= 30.0) {
        scaled = std::cyl_bessel_k(1.0, z) * std::exp(z);
    } else {
        scaled = bessel_k1_scaled_asymptotic(z);
    }
    const double log_value = std::log(scaled) - z;
    const bool underflow = log_value < std::log(std::numeric_limits<double>::min());
    return {underflow ? 0.0 : std::exp(log_value), scaled, underflow};
}

double bessel_k1(double z) { return bessel_k1_checked(z).value; }

double bessel_k1_scaled(double z) { return bessel_k1_checked(z).scaled; }

double log_bessel_k1(double z) { return std::log(bessel_k1_checked(z).scaled) - z; }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double mills_ratio(double z) {
    if (z >= 0.0) return std::sqrt(kPi / 2.0) * erfcx(z / std::sqrt(2.0));
    const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi);
    return normal_cdf(-z) / pdf;
}

double log_normal_cdf(double x) {
    if (x > -5.0) return std::log(normal_cdf(x));
    const double log_pdf = -0.5 * x * x - 0.5 * std::log(2.0 * kPi);
    return log_pdf + std::log(mills_ratio(-x));
}

QuadratureResult integrate_with_error(const RealFunction& f, double a, double b,
                                      const Tolerance& tol) {
    tol.validate();
    if (std::isnan(a) || std::isnan(b)) throw DomainError("integrate: NaN endpoint");
    if (a == b) return {0.0, 0.0, 0};
    if (a > b) {
        auto r = integrate_with_error(f, b, a, tol);
        r.value = -r.value;
        return r;
    }
    const bool a_inf = std::isinf(a);
    const bool b_inf = std::isinf(b);
    if (a_inf && b_inf) {
        auto left = integrate_with_error(f, a, 0.0, tol);
        auto right = integrate_with_error(f, 0.0, b, tol);
        return {left.value + right.value, left.error + right.error, left.intervals + right.intervals};
    }
    if (b_inf) {
        auto g = [&](double u) {
            if (u >= 1.0) return 0.0;
            const double om = 1.0 - u;
            const double v = f(a + u / om);
            return v == 0.0 ? 0.0 : v / (om * om);
        };
        return integrate_finite(g, 0.0, 1.0, tol);
    }
    if (a_inf) {
        auto g = [&](double u) {
            if (u >= 1.0) return 0.0;
            const double om = 1.0 - u;
            const double v = f(b - u / om);
            return v == 0.0 ? 0.0 : v / (om * om);
        };
        return integrate_finite(g, 0.0, 1.0, tol);
    }
    return integrate_finite(f, a, b, tol);
}

double integrate(const RealFunction& f, double a, double b, const Tolerance& tol) {
    return integrate_with_error(f, a, b, tol).value;
}

double find_root(const RealFunction& f, double lo, double hi, const Tolerance& tol) {
    tol.validate();
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    auto sign = [](double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); };
    if (std::isnan(fa) || std::isnan(fb)) throw BracketError("find_root: NaN at bracket endpoint");
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (sign(fa) == sign(fb)) {
        std::ostringstream os;
        os << "find_root: no sign change on [" << lo << ", " << hi << "] (f=" << fa << ", " << fb << ")";
        throw BracketError(os.str());
    }
    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int iter = 0; iter < std::max(tol.max_iter, 200); ++iter) {
        if (sign(fb) == sign(fc)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * kEps * std::abs(b) + 0.5 * tol.abs;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        const bool finite = std::isfinite(fa) && std::isfinite(fb) && std::isfinite(fc);
        if (finite && std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
        if (std::isnan(fb)) throw BracketError("find_root: function returned NaN inside bracket");
    }
    throw ConvergenceError("find_root: iteration cap exceeded", b, std::abs(c - b));
}

double minimize_scalar(const RealFunction& f, double lo, double hi, double xtol, int max_iter) {
    const double golden = 0.3819660112501051;
    double a = lo, b = hi;
    double x = a + golden * (b - a), w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;
    for (int iter = 0; iter < max_iter; ++iter) {
        const double xm = 0.5 * (a + b);
        const double tol1 = xtol * std::abs(x) + 1e-14;
        const double tol2 = 2.0 * tol1;
        if (std::abs(x - xm) <= tol2 - 0.5 * (b - a)) break;
        bool golden_step = true;
        if (std::abs(e) > tol1) {
            double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            const double etemp = e;
            e = d;
            if (!(std::abs(p) >= std::abs(0.5 * q * etemp) || p <= q * (a - x) || p >= q * (b - x))) {
                d = p / q;
                const double u = x + d;
                if (u - a < tol2 || b - u < tol2) d = (xm - x) >= 0 ? tol1 : -tol1;
                golden_step = false;
            }
        }
        if (golden_step) {
            e = (x >= xm) ? a - x : b - x;
            d = golden * e;
        }
        const double u = (std::abs(d) >= tol1) ? x + d : x + (d >= 0 ? tol1 : -tol1);
        const double fu = f(u);
        if (fu <= fx) {
            if (u >= x) a = x; else b = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    return x;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t index) : seed_(seed), index_(index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                      0x9E3779B9u};
    engine_.seed(seq);
}

RngStream RngStream::substream(std::uint64_t index) const { return RngStream(seed_, index); }

double RngStream::uniform() {
    // 53 random bits mapped into the open interval (0, 1).
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() { return normal_(engine_); }

double RngStream::exponential() { return -std::log(uniform()); }

unsigned long RngStream::poisson(double mean) {
    if (!(mean >= 0.0)) throw DomainError("poisson: mean must be non-negative");
    if (mean == 0.0) return 0;
    std::poisson_distribution<unsigned long> dist(mean);
    return dist(engine_);
}

}  // namespace numerics
}  // namespace mixedvol
