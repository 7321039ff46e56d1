#pragma once

#include "mixedvol/mellin.hpp"
#include "mixedvol/mixed.hpp"

namespace mixedvol {

// Zero-rate Black-Scholes. Prices of out-of-the-money options are evaluated
// through the Mills ratio so that their logarithms stay accurate far into the
// wings, where the prices themselves underflow.
double bs_call(double x0, double K, double T, double sigma);
double bs_put(double x0, double K, double T, double sigma);
double log_bs_call(double x0, double K, double T, double sigma);
double log_bs_put(double x0, double K, double T, double sigma);

/// Inverse of bs_call; NoArbitrageError outside ((x0 - K)^+, x0).
double bs_implied_vol(double price, double x0, double K, double T);
/// Same, from the logarithm of a call price (K >= x0) or a put price (K < x0).
double bs_implied_vol_log_otm(double log_price, double x0, double K, double T);

struct AsymptoticPriceOptions {
    double min_log_moneyness = 4.0;  // regime guard on L
};

/// Leading term of the call price from a large-strike density tail:
/// x0 r1^ (r3-1)^{-1} (r3-2)^{-1} L^{r4} e^{r2 sqrt L} k^{2-r3}, k = K/x0, L = log k,
/// with r1^ = r1 x0^{1-r3} the constant of the normalised model.
double call_asymptote(const TailAsymptote& tail, double K, double x0, double T,
                      const AsymptoticPriceOptions& opt = {});
double log_call_asymptote(const TailAsymptote& tail, double K, double x0, double T,
                          const AsymptoticPriceOptions& opt = {});
/// Leading term of the put price from a small-strike density tail, through
/// G(k) = k P(1/k) whose density x^{-3} D(1/x) has a large-strike tail.
double log_put_asymptote(const TailAsymptote& zero_tail, double K, double x0, double T,
                         const AsymptoticPriceOptions& opt = {});

/// Large-strike tail of the normalised reflected density x^{-3} D^(1/x).
TailAsymptote reflected_tail(const TailAsymptote& zero_tail, double x0);
/// Tail of the normalised density D^(u) = x0 D(x0 u), same side.
TailAsymptote normalised_tail(const TailAsymptote& tail, double x0);

// Implied volatility at extreme strikes:
//   c_lead sqrt L + c_const + c_llog log L / sqrt L + c_inv / sqrt L + c_llog2 log L / L + O(1/L),
// L = log(K/x0) on the large wing and log(x0/K) on the small wing.
struct SmileExpansion {
    Wing wing = Wing::Large;
    double c_lead = 0.0;
    double c_const = 0.0;
    double c_llog = 0.0;
    double c_inv = 0.0;
    double c_llog2 = 0.0;
    ErrorOrder error_order = ErrorOrder::InvLog;  // always 1/L
    double x0 = 1.0;
    double T = 1.0;
    // Normalised tail parameters feeding the coefficients: r1..r4 on the large
    // wing, s1..s4 on the small wing.
    double p1 = 0.0, p2 = 0.0, p3 = 0.0, p4 = 0.0;
    Dominant dominant = Dominant::Diffusion;
    bool extrapolated = false;

    void validate() const;
    /// L for strike K; RegimeError on the wrong side of x0.
    double log_moneyness(double K) const;
};

// The 1/sqrt(L) coefficient carries c0 = log(a b (a - b) / (2 sqrt(pi) r1)),
// a = sqrt(r3 - 1), b = sqrt(r3 - 2). Expanding
// sqrt(2/T) [sqrt(a^2 L + M) - sqrt(b^2 L + M)] with M = -r2 sqrt L - (r4 + 1/2) log L + c0
// gives -(1/b - 1/a) c0 / sqrt(2T); Uncorrected uses c0 / sqrt(2T) instead and
// leaves an O(1/sqrt L) residual.
enum class FourthTerm { Derived, Uncorrected };

/// Coefficients from a large-strike tail (r1, r2, r3, r4), r3 > 2.
SmileExpansion large_wing_expansion(double r1, double r2, double r3, double r4, double T, double x0 = 1.0,
                                    FourthTerm fourth = FourthTerm::Derived);
/// Coefficients from small-strike parameters (s1, s2, s3, s4), s3 > 0.
SmileExpansion small_wing_expansion(double s1, double s2, double s3, double s4, double T, double x0 = 1.0,
                                    FourthTerm fourth = FourthTerm::Derived);

/// Both wings of a mixed model. The model must carry its martingale drift.
SmileExpansion smile_expansion(const MixedModel& m, Wing wing, double rel_tol = 1e-9,
                               FourthTerm fourth = FourthTerm::Derived);

struct SmileGuard {
    double min_log_moneyness = 4.0;
};

double implied_vol_approx(const SmileExpansion& e, double K, const SmileGuard& guard = {});

/// Black-Scholes implied volatility of the leading-term wing price.
double implied_vol_from_asymptotic_price(const MixedModel& m, Wing wing, double K, double rel_tol = 1e-9,
                                         const AsymptoticPriceOptions& opt = {});

}  // namespace mixedvol
