#include "mixedvol/mixed.hpp"

#include "mixedvol/errors.hpp"
#include "mixedvol/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mixedvol {

const char* to_string(JumpKind k) noexcept {
    switch (k) {
        case JumpKind::None: return "heston";
        case JumpKind::Kou: return "heston+kou";
        case JumpKind::NIG: return "heston+nig";
    }
    return "?";
}

const char* to_string(Wing w) noexcept { return w == Wing::Large ? "large" : "small"; }
const char* to_string(Dominant d) noexcept { return d == Dominant::Jump ? "jump" : "diffusion"; }

MixedModel MixedModel::heston_only(const HestonParams& h) {
    MixedModel m;
    m.heston_ = h;
    m.finish();
    return m;
}

MixedModel MixedModel::heston_kou(const HestonParams& h, const KouJumpParams& k) {
    MixedModel m;
    m.kind_ = JumpKind::Kou;
    m.heston_ = h;
    m.jumps_ = k;
    m.finish();
    return m;
}

MixedModel MixedModel::heston_nig(const HestonParams& h, const NIGParams& n) {
    MixedModel m;
    m.kind_ = JumpKind::NIG;
    m.heston_ = h;
    m.jumps_ = n;
    m.finish();
    return m;
}

void MixedModel::finish() {
    heston_.validate();
    double tj = heston_.t;
    if (kind_ == JumpKind::Kou) {
        std::get<KouJumpParams>(jumps_).validate();
        tj = std::get<KouJumpParams>(jumps_).t;
    } else if (kind_ == JumpKind::NIG) {
        std::get<NIGParams>(jumps_).validate();
        tj = std::get<NIGParams>(jumps_).t;
    }
    if (std::abs(tj - heston_.t) > 1e-12 * std::max(1.0, heston_.t)) {
        std::ostringstream os;
        os << "MixedModel: jump horizon " << tj << " differs from the Heston horizon " << heston_.t;
        throw DomainError(os.str());
    }
    moments_ = critical_moments(heston_);
    constants_ = tail_constants(heston_, moments_);
    if (kind_ == JumpKind::Kou && !law_) law_ = std::make_shared<KouJumpLaw>(kou());
}

const KouJumpParams& MixedModel::kou() const {
    if (kind_ != JumpKind::Kou) throw DomainError("MixedModel: no Kou component");
    return std::get<KouJumpParams>(jumps_);
}

const NIGParams& MixedModel::nig() const {
    if (kind_ != JumpKind::NIG) throw DomainError("MixedModel: no NIG component");
    return std::get<NIGParams>(jumps_);
}

const KouJumpLaw& MixedModel::kou_law() const {
    (void)kou();
    return *law_;
}

MixedModel MixedModel::with_drift(double mu) const {
    MixedModel m = *this;
    m.heston_.mu = mu;
    m.constants_ = tail_constants(m.heston_, m.moments_);
    return m;
}

double MixedModel::risk_neutral_drift() const {
    switch (kind_) {
        case JumpKind::None: return 0.0;
        case JumpKind::Kou: return mixedvol::risk_neutral_drift(kou());
        case JumpKind::NIG: return nig_no_arb_drift(nig());
    }
    return 0.0;
}

MixedModel MixedModel::risk_neutral() const { return with_drift(risk_neutral_drift()); }

std::pair<double, double> MixedModel::jump_moment_strip() const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (kind_) {
        case JumpKind::None: return {-inf, inf};
        case JumpKind::Kou: return {-kou().eta2, kou().eta1};
        case JumpKind::NIG: return {-nig().alpha, nig().alpha};
    }
    return {-inf, inf};
}

std::pair<double, double> MixedModel::moment_strip() const {
    const auto [jl, jh] = jump_moment_strip();
    return {std::max(moments_.s_minus, jl), std::min(moments_.s_plus, jh)};
}

double MixedModel::jump_log_moment(double s) const {
    switch (kind_) {
        case JumpKind::None: return 0.0;
        case JumpKind::Kou: return log_jump_mgf(kou(), s);
        case JumpKind::NIG: return log_nig_mgf(nig(), s);
    }
    return 0.0;
}

double MixedModel::log_moment(double s) const { return mixedvol::log_mgf(heston_, s) + jump_log_moment(s); }

std::complex<double> MixedModel::jump_log_cf(std::complex<double> w) const {
    switch (kind_) {
        case JumpKind::None: return 0.0;
        case JumpKind::Kou: return mixedvol::jump_log_cf(kou(), w);
        case JumpKind::NIG: return nig_log_cf(nig(), w);
    }
    return 0.0;
}

std::complex<double> MixedModel::log_cf(std::complex<double> w) const {
    return mixedvol::log_cf(heston_, w) + jump_log_cf(w);
}

namespace {

struct Exponents {
    double heston, jump;
    const char* what;
};

Exponents competing(const MixedModel& m, Wing wing) {
    const auto& k = m.constants();
    if (wing == Wing::Large) {
        if (m.kind() == JumpKind::Kou) return {k.A3, m.kou().eta1 + 1.0, "A3 = 1 + eta1"};
        return {k.A3, m.nig().alpha + 1.0, "A3 = alpha + 1"};
    }
    if (m.kind() == JumpKind::Kou) return {k.A3t, m.kou().eta2 - 1.0, "A3~ = eta2 - 1"};
    return {k.A3t, m.nig().alpha - 1.0, "A3~ = alpha - 1"};
}

}  // namespace

WingRegime classify_wing(const MixedModel& m, Wing wing, double rel_tol) {
    if (m.kind() == JumpKind::None) return {wing, Dominant::Diffusion, std::numeric_limits<double>::infinity()};
    const auto e = competing(m, wing);
    const double margin = std::abs(e.heston - e.jump);
    if (margin <= rel_tol * std::max(1.0, std::abs(e.heston))) {
        std::ostringstream os;
        os << "degenerate " << to_string(wing) << " wing: " << e.what << " (" << e.heston << " vs " << e.jump
           << "); the dominance dichotomy gives no asymptote when the competing exponents coincide";
        throw DegenerateError(os.str());
    }
    return {wing, e.jump < e.heston ? Dominant::Jump : Dominant::Diffusion, margin};
}

std::pair<WingRegime, WingRegime> classify(const MixedModel& m, double rel_tol) {
    return {classify_wing(m, Wing::Large, rel_tol), classify_wing(m, Wing::Small, rel_tol)};
}

TailAsymptote mixed_asymptote(const MixedModel& m, Wing wing, double rel_tol) {
    const auto& h = m.heston();
    const auto& k = m.constants();
    const bool large = wing == Wing::Large;
    const auto regime = classify_wing(m, wing, rel_tol);
    if (regime.dominant == Dominant::Diffusion) {
        TailAsymptote a = large ? heston_tail_asymptote(h, k) : heston_zero_asymptote(h, k);
        // Index -A3~-1 on the small side: the jump law's Mellin transform at A3~.
        const double order = large ? k.A3 - 1.0 : -k.A3t - 1.0;
        a.r1 *= std::exp(m.jump_log_moment(order));
        return a;
    }
    TailAsymptote a;
    double order;
    if (m.kind() == JumpKind::Kou) {
        a = large ? kou_tail_asymptote(m.kou()) : kou_zero_asymptote(m.kou());
        order = large ? m.kou().eta1 : -m.kou().eta2;
    } else {
        a = large ? nig_tail_asymptote(m.nig()) : nig_zero_asymptote(m.nig());
        order = large ? m.nig().alpha : -m.nig().alpha;
    }
    a.r1 *= mgf(h, order);
    return a;
}

TailAsymptote mixed_tail_asymptote(const MixedModel& m, double rel_tol) {
    return mixed_asymptote(m, Wing::Large, rel_tol);
}

TailAsymptote mixed_zero_asymptote(const MixedModel& m, double rel_tol) {
    return mixed_asymptote(m, Wing::Small, rel_tol);
}

MellinKernel heston_kernel(const MixedModel& m) {
    const HestonParams h = m.heston();
    const auto& k = m.constants();
    auto inv = std::make_shared<TiltedFourierInverter>(oracles::heston_inverter(h));
    MellinKernel U;
    U.density = [inv](double x) {
        if (!(x > 0.0) || !std::isfinite(x)) return 0.0;
        const double y = std::log(x);
        return std::exp(inv->density(y).log_value - y);
    };
    U.strip = {-k.A3, k.A3t};
    U.transform = [h](double z) { return mgf(h, -z - 1.0); };
    U.name = "heston";
    return U;
}

MellinKernel jump_kernel(const MixedModel& m) {
    MellinKernel U;
    const MixedModel copy = m;
    if (m.kind() == JumpKind::Kou) {
        const auto& law = m.kou_law();
        auto shared = std::make_shared<KouJumpLaw>(law);
        U.density = [shared](double x) { return x > 0.0 ? shared->h_density(x) : 0.0; };
        U.strip = {-m.kou().eta1 - 1.0, m.kou().eta2 - 1.0};
        U.name = "kou";
    } else if (m.kind() == JumpKind::NIG) {
        const NIGParams n = m.nig();
        U.density = [n](double x) { return x > 0.0 ? nig_price_density(n, x) : 0.0; };
        U.strip = {-n.alpha - 1.0, n.alpha - 1.0};
        U.name = "nig";
    } else {
        throw DomainError("jump_kernel: model has no jump component");
    }
    U.transform = [copy](double z) { return std::exp(copy.jump_log_moment(-z - 1.0)); };
    return U;
}

TailAsymptote mixed_asymptote_via_mellin(const MixedModel& m, Wing wing, double rel_tol) {
    const auto regime = classify_wing(m, wing, rel_tol);
    const Tolerance tol{1e-12, 0.0, 2000};
    const bool large = wing == Wing::Large;
    if (m.kind() == JumpKind::None) {
        return large ? heston_tail_asymptote(m.heston(), m.constants()) : heston_zero_asymptote(m.heston(), m.constants());
    }
    if (regime.dominant == Dominant::Jump) {
        MellinKernel U = heston_kernel(m);
        TailAsymptote f;
        if (m.kind() == JumpKind::Kou) f = large ? kou_tail_asymptote(m.kou()) : kou_zero_asymptote(m.kou());
        else f = large ? nig_tail_asymptote(m.nig()) : nig_zero_asymptote(m.nig());
        return large ? convolve_asymptote_infinity(U, f, tol) : convolve_asymptote_zero(U, f, tol);
    }
    MellinKernel U = jump_kernel(m);
    const auto& k = m.constants();
    const TailAsymptote f = large ? heston_tail_asymptote(m.heston(), k) : heston_zero_asymptote(m.heston(), k);
    return large ? convolve_asymptote_infinity(U, f, tol) : convolve_asymptote_zero(U, f, tol);
}

}  // namespace mixedvol

namespace mixedvol {

namespace {

double log_add(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

}  // namespace

MixedDensity::MixedDensity(const MixedModel& m, const Tolerance& tol, double half_width, double step)
    : model_(m), tol_(tol), step_(step) {
    if (!(half_width > 0.0) || !(step > 0.0)) throw DomainError("MixedDensity: invalid table geometry");
    inverter_ = std::make_shared<const TiltedFourierInverter>(oracles::heston_inverter(m.heston()));
    const auto& h = m.heston();
    const double centre = std::log(h.x0) + h.mu * h.t;
    y_lo_ = centre - half_width;
    const auto n = static_cast<std::size_t>(std::ceil(2.0 * half_width / step)) + 1;
    table_.resize(n);
    for (std::size_t i = 0; i < n; ++i) table_[i] = inverter_->density(y_lo_ + step * static_cast<double>(i)).log_value;
    if (m.kind() == JumpKind::Kou) (void)m.kou_law();
}

double MixedDensity::log_heston(double y) const {
    const double u = (y - y_lo_) / step_;
    const auto n = static_cast<double>(table_.size());
    if (u >= 1.0 && u <= n - 3.0) {
        const auto i = static_cast<std::size_t>(std::floor(u));
        const double s = u - static_cast<double>(i);
        const double f0 = table_[i - 1], f1 = table_[i], f2 = table_[i + 1], f3 = table_[i + 2];
        // Four-point Lagrange through nodes -1, 0, 1, 2.
        return f0 * (-s * (s - 1.0) * (s - 2.0) / 6.0) + f1 * ((s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0) +
               f2 * (-(s + 1.0) * s * (s - 2.0) / 2.0) + f3 * ((s + 1.0) * s * (s - 1.0) / 6.0);
    }
    return inverter_->density(y).log_value;
}

double MixedDensity::log_jump(double z) const {
    if (model_.kind() == JumpKind::Kou) return model_.kou_law().log_density(z);
    return nig_log_density_checked(model_.nig(), z).log_value;
}

double MixedDensity::log_density_log_price(double y) const {
    if (model_.kind() == JumpKind::None) return log_heston(y);
    const double table_hi = y_lo_ + step_ * static_cast<double>(table_.size() - 3);
    const double table_lo = y_lo_ + step_;
    // z ranges over jump sizes that keep y - z inside the table.
    const double z_lo = y - table_hi, z_hi = y - table_lo;
    auto f = [&](double z) { return log_heston(y - z) + log_jump(z); };
    const double dz = 0.25;
    double S = -std::numeric_limits<double>::infinity(), arg = 0.0;
    std::vector<double> zs, fs;
    for (double z = z_lo; z <= z_hi; z += dz) {
        const double v = f(z);
        zs.push_back(z);
        fs.push_back(v);
        if (v > S) {
            S = v;
            arg = z;
        }
    }
    double zl = zs.front(), zr = zs.back();
    for (std::size_t i = 0; i < zs.size(); ++i) {
        if (fs[i] > S - 60.0) {
            zl = zs[i > 0 ? i - 1 : 0];
            break;
        }
    }
    for (std::size_t i = zs.size(); i-- > 0;) {
        if (fs[i] > S - 60.0) {
            zr = zs[std::min(i + 1, zs.size() - 1)];
            break;
        }
    }
    std::vector<double> cuts{zl, zr, arg};
    if (zl < 0.0 && 0.0 < zr) cuts.push_back(0.0);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    auto g = [&](double z) { return std::exp(f(z) - S); };
    double I = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] > cuts[i]) I += numerics::integrate(g, cuts[i], cuts[i + 1], tol_);
    }
    double result = S + std::log(I);
    if (model_.kind() == JumpKind::Kou) result = log_add(result, -model_.kou().lambda_t() + log_heston(y));
    return result;
}

double MixedDensity::log_density(double x) const {
    if (!(x > 0.0)) throw DomainError("mixed density: x must be positive");
    const double y = std::log(x);
    return log_density_log_price(y) - y;
}

double MixedDensity::density(double x) const { return std::exp(log_density(x)); }

double log_mixed_density(const MixedModel& m, double x, const Tolerance& tol) {
    return MixedDensity(m, tol).log_density(x);
}

double mixed_density(const MixedModel& m, double x, const Tolerance& tol) {
    return std::exp(log_mixed_density(m, x, tol));
}

}  // namespace mixedvol
