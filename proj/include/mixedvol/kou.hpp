#pragma once

#include "mixedvol/mellin.hpp"
#include "mixedvol/numerics.hpp"

#include <complex>
#include <vector>

namespace mixedvol {

// Compound Poisson log-jumps with intensity lambda; each jump is Exp(eta1) up
// with probability p and -Exp(eta2) down with probability q = 1 - p.
struct KouJumpParams {
    double lambda = 1.0;
    double eta1 = 3.0;
    double eta2 = 2.0;
    double p = 0.5;
    double q = 0.5;
    double t = 1.0;

    void validate() const;
    double lambda_t() const noexcept { return lambda * t; }
};

/// Probability weights of the n-fold convolution (1 <= k <= n).
double pnk(int n, int k, const KouJumpParams& p);
double qnk(int n, int k, const KouJumpParams& p);
double log_pnk(int n, int k, const KouJumpParams& p);
double log_qnk(int n, int k, const KouJumpParams& p);

struct CoefficientTable {
    std::vector<double> a, b;
    std::vector<double> a_hat, b_hat;
    std::vector<double> d, l;
    int truncation_k = 0;     // largest k stored
    double tail_bound = 0.0;  // worst relative tail of the n-series over all k
};

/// exp{eta2 lambda t q/(eta1+eta2) - lambda t}, the common factor of a_hat and C1.
double kou_upper_factor(const KouJumpParams& p);
double kou_lower_factor(const KouJumpParams& p);

// Exact law of exp(T_t): an atom e^{-lambda t} at 1 plus the density H.
// Coefficients are kept in log space up to k_max.
class KouJumpLaw {
public:
    explicit KouJumpLaw(const KouJumpParams& params, int k_max = 800, const Tolerance& tol = {1e-15, 0.0, 5000});

    const KouJumpParams& params() const noexcept { return p_; }
    int k_max() const noexcept { return static_cast<int>(log_a_.size()) - 1; }
    double tail_bound() const noexcept { return tail_bound_; }

    double log_a(int k) const;
    double log_b(int k) const;
    double a(int k) const;
    double b(int k) const;
    double log_a_hat(int k) const;
    double log_b_hat(int k) const;
    double log_d(int k) const;
    double log_l(int k) const;

    /// Table of the first n + 1 coefficients in linear scale.
    CoefficientTable table(int n) const;

    double atom_mass() const noexcept;

    /// G1(u) = sum a_k u^k and G2(-u) = sum b_k u^k for u >= 0.
    double g1(double u) const;
    double g2(double u) const;
    double log_g1(double u) const;
    double log_g2(double u) const;

    /// H(x) = G1(log x) x^{-eta1-1} for x > 1, G2(log x) x^{eta2-1} for x < 1;
    /// x = 1 returns the right limit a_0.
    double h_density(double x) const;
    double log_h_density(double x) const;

    /// Density of T_t = log X^(2) without the atom at 0.
    double log_density(double y) const;

private:
    double log_series(const std::vector<double>& lc, double u) const;

    KouJumpParams p_;
    Tolerance tol_;
    std::vector<double> log_a_, log_b_;
    double tail_bound_ = 0.0;
};

/// u^{order} D^{order} lambda_{s,r}(u) for lambda_{s,r}(u) = s cosh(r sqrt u),
/// order < 0, by quadrature of the exponential integrals.
double frac_integral(double order, double s, double r, double u, const Tolerance& tol = {1e-12, 0.0, 2000});
double log_frac_integral(double order, double s, double r, double u, const Tolerance& tol = {1e-12, 0.0, 2000});

/// Parameters (s, r) matching cosh to the d_k sequence on the upper side.
struct CoshMatch {
    double s, r;
};
CoshMatch cosh_match_upper(const KouJumpParams& p);
CoshMatch cosh_match_lower(const KouJumpParams& p);

/// Leading terms of H1(x) (x -> inf) and H2(x) (x -> 0); guard on |log x|.
double h1_asymptote(const KouJumpParams& p, double x, double guard = 4.0);
double h2_asymptote(const KouJumpParams& p, double x, double guard = 4.0);

/// Asymptotes of H itself, including the power factor.
TailAsymptote kou_tail_asymptote(const KouJumpParams& p);
TailAsymptote kou_zero_asymptote(const KouJumpParams& p);

/// E[exp(s T_t)] for -eta2 < s < eta1.
double jump_mgf(const KouJumpParams& p, double s);
double log_jump_mgf(const KouJumpParams& p, double s);
/// Mellin moment of the absolutely continuous part: jump_mgf(s) - e^{-lambda t}.
double jump_density_moment(const KouJumpParams& p, double s);
/// log E[exp(i w T_t)] for complex w with -Im w in (-eta2, eta1).
std::complex<double> jump_log_cf(const KouJumpParams& p, std::complex<double> w);

/// mu making the Heston x Kou price a martingale at zero rate.
double risk_neutral_drift(const KouJumpParams& p);

/// One draw of exp(T_t).
double sample_jump_factor(const KouJumpParams& p, numerics::RngStream& rng);

}  // namespace mixedvol
