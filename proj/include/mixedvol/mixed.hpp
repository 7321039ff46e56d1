#pragma once

#include "mixedvol/fourier.hpp"
#include "mixedvol/heston.hpp"
#include "mixedvol/kou.hpp"
#include "mixedvol/mellin.hpp"
#include "mixedvol/nig.hpp"

#include <complex>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace mixedvol {

enum class JumpKind { None, Kou, NIG };
enum class Wing { Large, Small };
enum class Dominant { Jump, Diffusion };

const char* to_string(JumpKind k) noexcept;
const char* to_string(Wing w) noexcept;
const char* to_string(Dominant d) noexcept;

// Heston price X^(1) times an independent jump factor X^(2). Derived Heston
// constants are computed once at construction.
class MixedModel {
public:
    static MixedModel heston_only(const HestonParams& h);
    static MixedModel heston_kou(const HestonParams& h, const KouJumpParams& k);
    static MixedModel heston_nig(const HestonParams& h, const NIGParams& n);

    JumpKind kind() const noexcept { return kind_; }
    const HestonParams& heston() const noexcept { return heston_; }
    const KouJumpParams& kou() const;
    const NIGParams& nig() const;
    const CriticalMoments& moments() const noexcept { return moments_; }
    const HestonTailConstants& constants() const noexcept { return constants_; }
    double t() const noexcept { return heston_.t; }

    /// Same model with the Heston drift replaced.
    MixedModel with_drift(double mu) const;
    /// Same model with the martingale drift for its jump component installed.
    MixedModel risk_neutral() const;
    double risk_neutral_drift() const;

    /// Moment strip of log X_t: E[X_t^s] < inf for s in (lo, hi).
    std::pair<double, double> moment_strip() const;
    /// log E[X_t^s] (Heston part times jump part).
    double log_moment(double s) const;
    /// log E[exp(i w log X_t)].
    std::complex<double> log_cf(std::complex<double> w) const;
    /// Jump factor only: log E[exp(i w log X^(2))] and log E[(X^(2))^s].
    std::complex<double> jump_log_cf(std::complex<double> w) const;
    double jump_log_moment(double s) const;
    std::pair<double, double> jump_moment_strip() const;

    /// Tabulated Kou law (built at construction, shared between copies).
    const KouJumpLaw& kou_law() const;

private:
    MixedModel() = default;
    void finish();

    JumpKind kind_ = JumpKind::None;
    HestonParams heston_;
    std::variant<std::monostate, KouJumpParams, NIGParams> jumps_;
    CriticalMoments moments_{};
    HestonTailConstants constants_{};
    std::shared_ptr<const KouJumpLaw> law_;
};

struct WingRegime {
    Wing wing;
    Dominant dominant;
    double margin;  // |difference of the competing exponents|
};

/// Regime per wing; equal exponents (relative tolerance rel_tol) throw DegenerateError.
std::pair<WingRegime, WingRegime> classify(const MixedModel& m, double rel_tol = 1e-9);
WingRegime classify_wing(const MixedModel& m, Wing wing, double rel_tol = 1e-9);

/// Leading term of the density of X_t as x -> inf / x -> 0.
TailAsymptote mixed_tail_asymptote(const MixedModel& m, double rel_tol = 1e-9);
TailAsymptote mixed_zero_asymptote(const MixedModel& m, double rel_tol = 1e-9);
TailAsymptote mixed_asymptote(const MixedModel& m, Wing wing, double rel_tol = 1e-9);

/// Kernels for the Mellin-route construction: the Heston density (Fourier
/// oracle) with closed-form transform z -> E[X^(1)^{-z-1}], and the jump law
/// with z -> E[X^(2)^{-z-1}] (atom included in the transform).
MellinKernel heston_kernel(const MixedModel& m);
MellinKernel jump_kernel(const MixedModel& m);
/// Same asymptote assembled by convolve_asymptote_infinity / _zero.
TailAsymptote mixed_asymptote_via_mellin(const MixedModel& m, Wing wing, double rel_tol = 1e-9);

// Exact density of X_t by quadrature: atom-weighted Heston density plus the
// convolution of the Heston density with the jump density, in log price.
// The Heston log-price density is tabulated once (Fourier inversion on a
// 0.01 grid, cubic interpolation of its logarithm) and inverted directly
// outside the table.
class MixedDensity {
public:
    explicit MixedDensity(const MixedModel& m, const Tolerance& tol = {1e-10, 0.0, 2000}, double half_width = 30.0,
                          double step = 0.01);

    /// Density of log X_t at y, and its logarithm.
    double log_density_log_price(double y) const;
    /// Density of X_t at x.
    double density(double x) const;
    double log_density(double x) const;
    /// log of the Heston log-price density.
    double log_heston(double y) const;

private:
    double log_jump(double z) const;

    MixedModel model_;
    Tolerance tol_;
    std::shared_ptr<const TiltedFourierInverter> inverter_;
    double y_lo_, step_;
    std::vector<double> table_;
};

double mixed_density(const MixedModel& m, double x, const Tolerance& tol = {1e-10, 0.0, 2000});
double log_mixed_density(const MixedModel& m, double x, const Tolerance& tol = {1e-10, 0.0, 2000});

}  // namespace mixedvol
