#include "mixedvol/kou.hpp"

#include "mixedvol/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace mixedvol {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double lfact(int n) {
    static const std::vector<double> table = [] {
        std::vector<double> v(8192);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::lgamma(static_cast<double>(i) + 1.0);
        return v;
    }();
    return n < static_cast<int>(table.size()) ? table[static_cast<std::size_t>(n)]
                                              : std::lgamma(static_cast<double>(n) + 1.0);
}
double lbinom(int n, int k) { return lfact(n) - lfact(k) - lfact(n - k); }

double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

// Shared body of P_{n,k} and Q_{n,k}: the two differ only by which rate and
// which probability go with the index i.
struct Weights {
    double log_th_same, log_th_other, log_same, log_other;
};

Weights upper_weights(const KouJumpParams& p) {
    const double s = p.eta1 + p.eta2;
    return {std::log(p.eta1 / s), std::log(p.eta2 / s), std::log(p.p), std::log(p.q)};
}

Weights lower_weights(const KouJumpParams& p) {
    const double s = p.eta1 + p.eta2;
    return {std::log(p.eta2 / s), std::log(p.eta1 / s), std::log(p.q), std::log(p.p)};
}

double log_weight(int n, int k, const Weights& w) {
    if (k < 1 || k > n) {
        std::ostringstream os;
        os << "convolution weight needs 1 <= k <= n (n=" << n << ", k=" << k << ")";
        throw DomainError(os.str());
    }
    if (k == n) return n * w.log_same;
    double acc = kNegInf;
    for (int i = k; i <= n - 1; ++i) {
        const double term = lbinom(n - k - 1, i - k) + lbinom(n, i) + (i - k) * w.log_th_same +
                            (n - i) * w.log_th_other + i * w.log_same + (n - i) * w.log_other;
        acc = log_add(acc, term);
    }
    return acc;
}

// log of (eta^{k+1}/k!) sum_{n >= k+1} pi_n W_{n,k+1}; returns the relative
// geometric tail bound through tail.
double log_coefficient(int k, double log_eta, double lt, const Weights& w, const Tolerance& tol,
                       double& tail) {
    const int K = k + 1;
    const double log_lt = std::log(lt);
    double sum = kNegInf;
    double prev = kNegInf;
    int decreasing = 0;
    for (int n = K; n < K + tol.max_iter; ++n) {
        const double term = -lt + n * log_lt - lfact(n) + log_weight(n, K, w);
        sum = log_add(sum, term);
        decreasing = term < prev ? decreasing + 1 : 0;
        const double rel = std::exp(term - sum);
        if (decreasing >= 3 && rel < tol.rel) {
            const double ratio = std::exp(term - prev);
            tail = ratio < 1.0 ? rel * ratio / (1.0 - ratio) : rel;
            return K * log_eta - lfact(k) + sum;
        }
        prev = term;
    }
    throw ConvergenceError("jump coefficient series did not converge", std::exp(sum), std::exp(prev - sum));
}

}  // namespace

void KouJumpParams::validate() const {
    std::ostringstream os;
    if (!(lambda > 0.0) || !std::isfinite(lambda)) os << "lambda must be positive; ";
    if (!(eta1 > 1.0) || !std::isfinite(eta1)) os << "eta1 must exceed 1; ";
    if (!(eta2 > 0.0) || !std::isfinite(eta2)) os << "eta2 must be positive; ";
    if (!(p > 0.0) || !(q > 0.0)) os << "p and q must be positive; ";
    if (std::abs(p + q - 1.0) > 1e-12) os << "p + q must equal 1; ";
    if (!(t > 0.0) || !std::isfinite(t)) os << "t must be positive; ";
    const std::string msg = os.str();
    if (!msg.empty()) throw DomainError("KouJumpParams: " + msg.substr(0, msg.size() - 2));
}

double log_pnk(int n, int k, const KouJumpParams& p) { return log_weight(n, k, upper_weights(p)); }
double log_qnk(int n, int k, const KouJumpParams& p) { return log_weight(n, k, lower_weights(p)); }
double pnk(int n, int k, const KouJumpParams& p) { return std::exp(log_pnk(n, k, p)); }
double qnk(int n, int k, const KouJumpParams& p) { return std::exp(log_qnk(n, k, p)); }

double kou_upper_factor(const KouJumpParams& p) {
    return std::exp(p.eta2 * p.lambda_t() * p.q / (p.eta1 + p.eta2) - p.lambda_t());
}

double kou_lower_factor(const KouJumpParams& p) {
    return std::exp(p.eta1 * p.lambda_t() * p.p / (p.eta1 + p.eta2) - p.lambda_t());
}

KouJumpLaw::KouJumpLaw(const KouJumpParams& params, int k_max, const Tolerance& tol) : p_(params), tol_(tol) {
    p_.validate();
    tol_.validate();
    if (k_max < 0) throw DomainError("KouJumpLaw: k_max must be non-negative");
    const double lt = p_.lambda_t();
    const Weights up = upper_weights(p_), down = lower_weights(p_);
    const double le1 = std::log(p_.eta1), le2 = std::log(p_.eta2);
    log_a_.reserve(k_max + 1);
    log_b_.reserve(k_max + 1);
    for (int k = 0; k <= k_max; ++k) {
        double ta = 0.0, tb = 0.0;
        log_a_.push_back(log_coefficient(k, le1, lt, up, tol_, ta));
        log_b_.push_back(log_coefficient(k, le2, lt, down, tol_, tb));
        tail_bound_ = std::max({tail_bound_, ta, tb});
    }
}

double KouJumpLaw::log_a(int k) const { return log_a_.at(static_cast<std::size_t>(k)); }
double KouJumpLaw::log_b(int k) const { return log_b_.at(static_cast<std::size_t>(k)); }
double KouJumpLaw::a(int k) const { return std::exp(log_a(k)); }
double KouJumpLaw::b(int k) const { return std::exp(log_b(k)); }

double KouJumpLaw::log_a_hat(int k) const {
    const double B = p_.eta1 * p_.lambda_t() * p_.p;
    return std::log(kou_upper_factor(p_)) + (k + 1) * std::log(B) - lfact(k) - lfact(k + 1);
}

double KouJumpLaw::log_b_hat(int k) const {
    const double B = p_.eta2 * p_.lambda_t() * p_.q;
    return std::log(kou_lower_factor(p_)) + (k + 1) * std::log(B) - lfact(k) - lfact(k + 1);
}

double KouJumpLaw::log_d(int k) const {
    const double B = p_.eta1 * p_.lambda_t() * p_.p;
    const double logC = std::log(B / (2.0 * std::numbers::pi)) + std::log(kou_upper_factor(p_));
    if (k == 0) return logC;
    return logC + k * std::log(B) + 2.0 * k - (2.0 * k + 2.0) * std::log(static_cast<double>(k));
}

double KouJumpLaw::log_l(int k) const {
    const double B = p_.eta2 * p_.lambda_t() * p_.q;
    const double logC = std::log(B / (2.0 * std::numbers::pi)) + std::log(kou_lower_factor(p_));
    if (k == 0) return logC;
    return logC + k * std::log(B) + 2.0 * k - (2.0 * k + 2.0) * std::log(static_cast<double>(k));
}

CoefficientTable KouJumpLaw::table(int n) const {
    if (n < 0 || n > k_max()) throw DomainError("KouJumpLaw::table: index beyond k_max");
    CoefficientTable t;
    for (int k = 0; k <= n; ++k) {
        t.a.push_back(a(k));
        t.b.push_back(b(k));
        t.a_hat.push_back(std::exp(log_a_hat(k)));
        t.b_hat.push_back(std::exp(log_b_hat(k)));
        t.d.push_back(std::exp(log_d(k)));
        t.l.push_back(std::exp(log_l(k)));
    }
    t.truncation_k = n;
    t.tail_bound = tail_bound_;
    return t;
}

double KouJumpLaw::atom_mass() const noexcept { return std::exp(-p_.lambda_t()); }

double KouJumpLaw::log_series(const std::vector<double>& lc, double u) const {
    if (!(u >= 0.0)) throw DomainError("jump series: argument must be non-negative");
    if (u == 0.0) return lc[0];
    const double lu = std::log(u);
    double sum = kNegInf, prev = kNegInf;
    int decreasing = 0;
    for (std::size_t k = 0; k < lc.size(); ++k) {
        const double term = lc[k] + static_cast<double>(k) * lu;
        sum = log_add(sum, term);
        decreasing = term < prev ? decreasing + 1 : 0;
        if (decreasing >= 3 && term - sum < std::log(tol_.rel) - 3.0) return sum;
        prev = term;
    }
    std::ostringstream os;
    os << "jump series at u=" << u << " needs more than " << lc.size() << " coefficients";
    throw ConvergenceError(os.str(), std::exp(sum), std::exp(prev - sum));
}

double KouJumpLaw::log_g1(double u) const { return log_series(log_a_, u); }
double KouJumpLaw::log_g2(double u) const { return log_series(log_b_, u); }
double KouJumpLaw::g1(double u) const { return std::exp(log_g1(u)); }
double KouJumpLaw::g2(double u) const { return std::exp(log_g2(u)); }

double KouJumpLaw::log_density(double y) const {
    if (y > 0.0) return log_g1(y) - p_.eta1 * y;
    if (y < 0.0) return log_g2(-y) + p_.eta2 * y;
    return log_a_[0];
}

double KouJumpLaw::log_h_density(double x) const {
    if (!(x > 0.0)) throw DomainError("h_density: x must be positive");
    const double y = std::log(x);
    return log_density(y) - y;
}

double KouJumpLaw::h_density(double x) const { return std::exp(log_h_density(x)); }

double log_frac_integral(double order, double s, double r, double u, const Tolerance& tol) {
    if (!(order < 0.0)) throw DomainError("frac_integral: order must be negative");
    if (!(s > 0.0) || !(r > 0.0)) throw DomainError("frac_integral: s and r must be positive");
    if (!(u >= 0.0)) throw DomainError("frac_integral: u must be non-negative");
    const double nu = -order - 1.0;
    const double w = r * std::sqrt(u);
    const double pre = std::log(s) - std::lgamma(-order);
    if (w < 1.0) {
        auto f = [&](double z) { return 2.0 * std::cosh(w * z) * z * std::pow(1.0 - z * z, nu); };
        return pre + std::log(numerics::integrate(f, 0.0, 1.0, tol));
    }
    // z = 1 - v^2 puts the peak of e^{w z} at v = 0 and removes the root singularity.
    auto g = [&](double v) {
        const double y = v * v;
        const double shape = (1.0 - y) * std::pow(y * (2.0 - y), nu) * 2.0 * v;
        return (std::exp(-w * y) + std::exp(-w * (2.0 - y))) * shape;
    };
    const double vb = std::min(1.0, 8.0 / std::sqrt(w));
    double J = numerics::integrate(g, 0.0, vb, tol);
    if (vb < 1.0) J += numerics::integrate(g, vb, 1.0, {tol.rel, 0.0, tol.max_iter});
    return pre + w + std::log(J);
}

double frac_integral(double order, double s, double r, double u, const Tolerance& tol) {
    return std::exp(log_frac_integral(order, s, r, u, tol));
}

CoshMatch cosh_match_upper(const KouJumpParams& p) {
    const double B = p.eta1 * p.lambda_t() * p.p;
    const double C = B / (2.0 * std::numbers::pi) * kou_upper_factor(p);
    return {2.0 * std::sqrt(std::numbers::pi) * C, 2.0 * std::sqrt(B)};
}

CoshMatch cosh_match_lower(const KouJumpParams& p) {
    const double B = p.eta2 * p.lambda_t() * p.q;
    const double C = B / (2.0 * std::numbers::pi) * kou_lower_factor(p);
    return {2.0 * std::sqrt(std::numbers::pi) * C, 2.0 * std::sqrt(B)};
}

namespace {

double h_leading(double B, double factor, double L) {
    return std::exp(0.25 * std::log(B) + std::log(factor) - std::log(2.0 * std::sqrt(std::numbers::pi)) -
                    0.75 * std::log(L) + 2.0 * std::sqrt(B * L));
}

}  // namespace

double h1_asymptote(const KouJumpParams& p, double x, double guard) {
    p.validate();
    const double L = std::log(x);
    if (!(L >= guard)) {
        std::ostringstream os;
        os << "h1_asymptote: log x = " << L << " below the regime guard " << guard;
        throw RegimeError(os.str());
    }
    return h_leading(p.eta1 * p.lambda_t() * p.p, kou_upper_factor(p), L);
}

double h2_asymptote(const KouJumpParams& p, double x, double guard) {
    p.validate();
    const double L = -std::log(x);
    if (!(L >= guard)) {
        std::ostringstream os;
        os << "h2_asymptote: log(1/x) = " << L << " below the regime guard " << guard;
        throw RegimeError(os.str());
    }
    return h_leading(p.eta2 * p.lambda_t() * p.q, kou_lower_factor(p), L);
}

TailAsymptote kou_tail_asymptote(const KouJumpParams& p) {
    p.validate();
    const double B = p.eta1 * p.lambda_t() * p.p;
    TailAsymptote a;
    a.r1 = std::pow(B, 0.25) * kou_upper_factor(p) / (2.0 * std::sqrt(std::numbers::pi));
    a.r2 = 2.0 * std::sqrt(B);
    a.r3 = p.eta1 + 1.0;
    a.r4 = -0.75;
    a.side = TailSide::AtInfinity;
    a.error_order = ErrorOrder::InvSqrtLog;
    return a;
}

TailAsymptote kou_zero_asymptote(const KouJumpParams& p) {
    p.validate();
    const double B = p.eta2 * p.lambda_t() * p.q;
    TailAsymptote a;
    a.r1 = std::pow(B, 0.25) * kou_lower_factor(p) / (2.0 * std::sqrt(std::numbers::pi));
    a.r2 = 2.0 * std::sqrt(B);
    a.r3 = p.eta2 - 1.0;
    a.r4 = -0.75;
    a.side = TailSide::AtZero;
    a.error_order = ErrorOrder::InvSqrtLog;
    return a;
}

double log_jump_mgf(const KouJumpParams& p, double s) {
    if (!(s < p.eta1) || !(s > -p.eta2)) {
        std::ostringstream os;
        os << "jump moment of order " << s << " is infinite (strip (" << -p.eta2 << ", " << p.eta1 << "))";
        throw MomentExplosionError(os.str());
    }
    return p.lambda_t() * (p.p * p.eta1 / (p.eta1 - s) + p.q * p.eta2 / (p.eta2 + s) - 1.0);
}

double jump_mgf(const KouJumpParams& p, double s) { return std::exp(log_jump_mgf(p, s)); }

double jump_density_moment(const KouJumpParams& p, double s) {
    return jump_mgf(p, s) - std::exp(-p.lambda_t());
}

std::complex<double> jump_log_cf(const KouJumpParams& p, std::complex<double> w) {
    const std::complex<double> iw(-w.imag(), w.real());
    return p.lambda_t() * (p.p * p.eta1 / (p.eta1 - iw) + p.q * p.eta2 / (p.eta2 + iw) - 1.0);
}

double risk_neutral_drift(const KouJumpParams& p) {
    if (!(p.eta1 > 1.0)) throw DomainError("risk_neutral_drift: eta1 must exceed 1");
    return p.lambda * (p.q / (p.eta2 + 1.0) - p.p / (p.eta1 - 1.0));
}

double sample_jump_factor(const KouJumpParams& p, numerics::RngStream& rng) {
    const unsigned long n = rng.poisson(p.lambda_t());
    double sum = 0.0;
    for (unsigned long i = 0; i < n; ++i) {
        const double e = rng.exponential();
        sum += rng.uniform() < p.p ? e / p.eta1 : -e / p.eta2;
    }
    return std::exp(sum);
}

}  // namespace mixedvol
