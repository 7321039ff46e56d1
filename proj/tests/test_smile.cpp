#include "mixedvol/errors.hpp"
#include "mixedvol/oracles.hpp"
#include "mixedvol/smile.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace mixedvol;

namespace {

struct Variant {
    const char* name;
    MixedModel model;
};

std::vector<Variant> variants() {
    HestonParams h;
    return {{"kou-jump", MixedModel::heston_kou(h, KouJumpParams{1.0, 2.0, 1.0, 0.5, 0.5, 1.0}).risk_neutral()},
            {"kou-diffusion", MixedModel::heston_kou(h, KouJumpParams{1.0, 20.0, 10.0, 0.5, 0.5, 1.0}).risk_neutral()},
            {"nig-jump", MixedModel::heston_nig(h, NIGParams{4.0, 0.5, 1.0}).risk_neutral()},
            {"nig-diffusion", MixedModel::heston_nig(h, NIGParams{16.0, 0.5, 1.0}).risk_neutral()}};
}

double strike(Wing w, double L, double x0 = 1.0) { return w == Wing::Large ? x0 * std::exp(L) : x0 * std::exp(-L); }

std::vector<double> residual_times_L(const MixedModel& m, Wing w, FourthTerm fourth, const std::vector<double>& Ls) {
    const auto e = smile_expansion(m, w, 1e-9, fourth);
    std::vector<double> out;
    for (double L : Ls) {
        const double K = strike(w, L, m.heston().x0);
        out.push_back((implied_vol_approx(e, K) - implied_vol_from_asymptotic_price(m, w, K)) * L);
    }
    return out;
}

}  // namespace

TEST(BlackScholes, KnownValues) {
    EXPECT_NEAR(bs_call(1.0, 1.0, 1.0, 0.2), 2.0 * numerics::normal_cdf(0.1) - 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(bs_call(1.0, 0.7, 1.0, 0.0), 0.3);
    EXPECT_NEAR(bs_call(1.0, 0.7, 1.0, 1e-6), 0.3, 1e-15);
    EXPECT_NEAR(bs_call(1.0, 1.3, 1.0, 1e-6), 0.0, 1e-300);
    // Textbook closed form at moderate inputs.
    for (double K : {0.6, 1.0, 1.7}) {
        for (double sig : {0.1, 0.4, 1.2}) {
            const double d1 = (std::log(1.5 / K) + 0.5 * sig * sig * 2.0) / (sig * std::sqrt(2.0));
            const double d2 = d1 - sig * std::sqrt(2.0);
            const double ref = 1.5 * numerics::normal_cdf(d1) - K * numerics::normal_cdf(d2);
            EXPECT_NEAR(bs_call(1.5, K, 2.0, sig), ref, 1e-13) << K << " " << sig;
            EXPECT_NEAR(bs_call(1.5, K, 2.0, sig) - bs_put(1.5, K, 2.0, sig), 1.5 - K, 1e-13);
        }
    }
}

TEST(BlackScholes, LogPricesFarOutOfTheMoney) {
    // log C ~ -k^2/(2 s^2) for large k: the price underflows, its logarithm must not.
    const double lc = log_bs_call(1.0, std::exp(60.0), 1.0, 0.5);
    EXPECT_TRUE(std::isfinite(lc));
    EXPECT_LT(lc, -7000.0);
    const double lp = log_bs_put(1.0, std::exp(-60.0), 1.0, 0.5);
    EXPECT_TRUE(std::isfinite(lp));
    // Monotone in sigma.
    EXPECT_LT(log_bs_call(1.0, std::exp(60.0), 1.0, 0.5), log_bs_call(1.0, std::exp(60.0), 1.0, 0.6));
}

TEST(BlackScholes, RoundTrip) {
    for (double sig : {0.05, 0.1, 0.2, 0.3, 0.5, 0.75, 1.0, 1.5, 2.0}) {
        for (double k : {0.5, 0.75, 1.0, 1.25, 1.5, 2.0}) {
            const double K = 1.0 * k;
            // Out-of-the-money side carries full relative precision.
            const double lp = K >= 1.0 ? log_bs_call(1.0, K, 1.0, sig) : log_bs_put(1.0, K, 1.0, sig);
            EXPECT_NEAR(bs_implied_vol_log_otm(lp, 1.0, K, 1.0), sig, 1e-10) << sig << " " << K;
            if (K >= 0.75) EXPECT_NEAR(bs_implied_vol(bs_call(1.0, K, 1.0, sig), 1.0, K, 1.0), sig, 1e-10);
        }
    }
    for (double L : {10.0, 50.0, 200.0}) {
        const double K = std::exp(L);
        EXPECT_NEAR(bs_implied_vol_log_otm(log_bs_call(1.0, K, 1.0, 3.0), 1.0, K, 1.0), 3.0, 1e-10) << L;
        EXPECT_NEAR(bs_implied_vol_log_otm(log_bs_put(1.0, 1.0 / K, 1.0, 3.0), 1.0, 1.0 / K, 1.0), 3.0, 1e-10);
    }
}

TEST(BlackScholes, InversionRejectsArbitrage) {
    EXPECT_THROW(bs_implied_vol(0.2, 1.0, 0.7, 1.0), NoArbitrageError);
    EXPECT_THROW(bs_implied_vol(1.0, 1.0, 0.7, 1.0), NoArbitrageError);
    EXPECT_THROW(bs_implied_vol(-0.1, 1.0, 1.2, 1.0), NoArbitrageError);
    EXPECT_THROW(bs_implied_vol_log_otm(0.0, 1.0, 1.2, 1.0), NoArbitrageError);
    EXPECT_THROW(bs_call(1.0, -1.0, 1.0, 0.2), DomainError);
}

TEST(CallAsymptote, ScalingAndSubstitution) {
    TailAsymptote t;
    t.r1 = 1.0;
    t.r3 = 3.0;
    for (double L : {5.0, 20.0}) {
        const double K = std::exp(L);
        EXPECT_NEAR(call_asymptote(t, K, 1.0, 1.0) * K, 0.5, 1e-13);
    }
    TailAsymptote t2 = t;
    t2.r1 = 7.5;
    t2.r2 = 1.3;
    t2.r4 = -0.75;
    TailAsymptote t3 = t2;
    t3.r1 *= 3.0;
    EXPECT_NEAR(call_asymptote(t3, 1e4, 1.0, 1.0) / call_asymptote(t2, 1e4, 1.0, 1.0), 3.0, 1e-13);
    EXPECT_THROW(call_asymptote(t, 10.0, 1.0, 1.0), RegimeError);
    t.r3 = 2.0;
    EXPECT_THROW(call_asymptote(t, 1e4, 1.0, 1.0), DivergenceError);
}

TEST(CallAsymptote, DoubleIntegralOfTail) {
    // C(K) = int_K^inf (x - K) D(x) dx with D the tail profile. After factoring out
    // r1 L^{r4} e^{r2 sqrt L} K^{2-r3} the integral tends to 1/((r3-1)(r3-2)) at rate L^{-1/2}.
    TailAsymptote t;
    t.r1 = 2.0;
    t.r2 = 1.4;
    t.r3 = 4.5;
    t.r4 = -0.75;
    double prev = 0.0;
    for (double L : {10.0, 40.0, 160.0, 640.0}) {
        auto f = [&](double v) {
            return std::expm1(v) * std::exp((1.0 - t.r3) * v + t.r4 * std::log1p(v / L) +
                                            t.r2 * (std::sqrt(L + v) - std::sqrt(L)));
        };
        const double I = numerics::integrate(f, 0.0, 2.0, {1e-12, 0.0, 500}) +
                         numerics::integrate(f, 2.0, 60.0, {1e-12, 0.0, 500});
        const double log_exact = std::log(t.r1) + t.r4 * std::log(L) + t.r2 * std::sqrt(L) + (2.0 - t.r3) * L +
                                 std::log(I);
        const double gap = std::abs(std::expm1(log_exact - log_call_asymptote(t, std::exp(L), 1.0, 1.0)));
        EXPECT_LT(gap * std::sqrt(L), 2.0) << L;
        if (prev > 0.0) EXPECT_LT(gap, prev);
        prev = gap;
    }
}

TEST(CallAsymptote, StrikeNormalisation) {
    // Same model scaled by x0: prices scale by x0 at K x0.
    TailAsymptote t;
    t.r1 = 1.7;
    t.r2 = 0.8;
    t.r3 = 5.0;
    t.r4 = -0.75;
    const double x0 = 2.5;
    TailAsymptote scaled = t;
    scaled.r1 = t.r1 * std::pow(x0, t.r3 - 1.0);  // density of x0 X
    const double K = std::exp(12.0);
    EXPECT_NEAR(log_call_asymptote(scaled, K * x0, x0, 1.0), std::log(x0) + log_call_asymptote(t, K, 1.0, 1.0), 1e-12);
}

TEST(SmileExpansion, LeeBoundGrid) {
    double prev = INFINITY;
    for (double r3 = 2.05; r3 < 400.0; r3 *= 1.3) {
        for (double T : {0.25, 1.0, 4.0}) {
            const auto e = large_wing_expansion(1.0, 0.5, r3, -0.75, T);
            const double scaled = e.c_lead * std::sqrt(T) / std::sqrt(2.0);
            EXPECT_NEAR(scaled, std::sqrt(r3 - 1.0) - std::sqrt(r3 - 2.0), 1e-14);
            EXPECT_GT(scaled, 0.0);
            EXPECT_LT(scaled, 1.0);
        }
        const double c = large_wing_expansion(1.0, 0.5, r3, -0.75, 1.0).c_lead;
        EXPECT_LT(c, prev);
        prev = c;
    }
    EXPECT_LT(prev, 0.05);
    EXPECT_NEAR(large_wing_expansion(1.0, 0.0, 3.0, 0.0, 1.0).c_lead, std::sqrt(2.0) * (std::sqrt(2.0) - 1.0), 1e-15);
    EXPECT_THROW(large_wing_expansion(1.0, 0.0, 2.0, 0.0, 1.0), DivergenceError);
    EXPECT_THROW(small_wing_expansion(1.0, 0.0, 0.0, 0.0, 1.0), DivergenceError);
}

TEST(SmileExpansion, NigJumpHasNoSqrtTerms) {
    const auto m = variants()[2].model;
    const auto e = smile_expansion(m, Wing::Large);
    EXPECT_EQ(e.dominant, Dominant::Jump);
    EXPECT_EQ(e.c_const, 0.0);
    EXPECT_EQ(e.c_llog2, 0.0);
    EXPECT_NEAR(e.p4, -1.5, 1e-15);
}

TEST(SmileExpansion, KouRegimeParameters) {
    const auto vs = variants();
    const auto jl = smile_expansion(vs[0].model, Wing::Large);
    EXPECT_EQ(jl.dominant, Dominant::Jump);
    EXPECT_NEAR(jl.p3, 3.0, 1e-12);
    EXPECT_NEAR(jl.p2, 2.0 * std::sqrt(2.0 * 1.0 * 1.0 * 0.5), 1e-12);
    EXPECT_NEAR(jl.p4, -0.75, 1e-12);
    const auto js = smile_expansion(vs[0].model, Wing::Small);
    EXPECT_NEAR(js.p3, 1.0, 1e-12);
    EXPECT_NEAR(js.p2, 2.0 * std::sqrt(1.0 * 1.0 * 1.0 * 0.5), 1e-12);
    const auto dl = smile_expansion(vs[1].model, Wing::Large);
    EXPECT_EQ(dl.dominant, Dominant::Diffusion);
    const auto cm = critical_moments(vs[1].model.heston());
    const auto k = tail_constants(vs[1].model.heston(), cm);
    EXPECT_NEAR(dl.p3, k.A3, 1e-10);
    EXPECT_NEAR(dl.p4, -0.75 + 1.0 / 0.25, 1e-12);
    const auto ds = smile_expansion(vs[1].model, Wing::Small);
    EXPECT_NEAR(ds.p3, k.A3t + 1.0, 1e-10);
}

TEST(SmileExpansion, SmallWingMatchesReflectedPipeline) {
    for (const auto& v : variants()) {
        const auto& m = v.model;
        for (FourthTerm f : {FourthTerm::Derived, FourthTerm::Uncorrected}) {
            const auto direct = smile_expansion(m, Wing::Small, 1e-9, f);
            const auto g = reflected_tail(mixed_zero_asymptote(m), m.heston().x0);
            const auto refl = large_wing_expansion(g.r1, g.r2, g.r3, g.r4, m.t(), m.heston().x0, f);
            EXPECT_NEAR(direct.c_lead, refl.c_lead, 1e-12) << v.name;
            EXPECT_NEAR(direct.c_const, refl.c_const, 1e-12) << v.name;
            EXPECT_NEAR(direct.c_llog, refl.c_llog, 1e-12) << v.name;
            EXPECT_NEAR(direct.c_inv, refl.c_inv, 1e-12) << v.name;
            EXPECT_NEAR(direct.c_llog2, refl.c_llog2, 1e-12) << v.name;
        }
    }
}

TEST(SmileExpansion, PutAsymptoteIsReflectedCall) {
    // P(K) = K G(1/K) with G the call on the reflected density, x0 = 1.
    const auto m = variants()[0].model;
    const auto zero = mixed_zero_asymptote(m);
    const auto g = reflected_tail(zero, 1.0);
    for (double L : {6.0, 30.0}) {
        const double K = std::exp(-L);
        EXPECT_NEAR(log_put_asymptote(zero, K, 1.0, 1.0), -L + log_call_asymptote(g, std::exp(L), 1.0, 1.0), 1e-12);
    }
}

TEST(SmileExpansion, ResidualTimesLogMoneynessBounded) {
    const std::vector<double> Ls{10, 15, 20, 25, 30, 40, 50, 60, 70, 80, 90, 100};
    for (const auto& v : variants()) {
        for (Wing w : {Wing::Large, Wing::Small}) {
            const auto r = residual_times_L(v.model, w, FourthTerm::Derived, Ls);
            double head = 0.0, tail = 0.0;
            for (std::size_t i = 0; i < Ls.size(); ++i) {
                EXPECT_LT(std::abs(r[i]), 1.0) << v.name << " " << to_string(w) << " L=" << Ls[i];
                (Ls[i] <= 30 ? head : tail) = std::max(Ls[i] <= 30 ? head : tail, std::abs(r[i]));
            }
            EXPECT_LE(tail, 1.5 * head) << v.name << " " << to_string(w);
        }
    }
}

TEST(SmileExpansion, UncorrectedFourthTermLeavesSqrtResidual) {
    // With c0/sqrt(2T) in place of -(1/b - 1/a) c0/sqrt(2T) the residual is O(1/sqrt L),
    // so residual * L grows roughly like sqrt L.
    const auto m = variants()[0].model;
    const auto r = residual_times_L(m, Wing::Large, FourthTerm::Uncorrected, {10.0, 100.0});
    EXPECT_GT(r[1] / r[0], 2.0);
    const auto d = residual_times_L(m, Wing::Large, FourthTerm::Derived, {10.0, 100.0});
    EXPECT_LT(std::abs(d[1]), std::abs(d[0]));
}

TEST(SmileExpansion, ExactPricesAtModerateStrikes) {
    for (const auto& v : variants()) {
        for (Wing w : {Wing::Large, Wing::Small}) {
            const auto e = smile_expansion(v.model, w);
            double prev = 1.0;
            for (double L : {4.0, 6.0, 8.0}) {
                const double K = strike(w, L);
                const double p = w == Wing::Large ? oracles::call_fourier(v.model, K, {.saddle = true})
                                                  : oracles::put_fourier(v.model, K, {.saddle = true});
                const double exact = bs_implied_vol_log_otm(std::log(p), 1.0, K, 1.0);
                const double rel = std::abs(implied_vol_approx(e, K) / exact - 1.0);
                EXPECT_LT(rel, 0.1) << v.name << " " << to_string(w) << " L=" << L;
                EXPECT_LT(rel, prev) << v.name << " " << to_string(w) << " L=" << L;
                prev = rel;
            }
        }
    }
}

TEST(SmileExpansion, StrikeNormalisation) {
    // X = x0 X^: the smile depends on K / x0 only.
    HestonParams h;
    const auto base = MixedModel::heston_kou(h, KouJumpParams{1.0, 3.0, 2.0, 0.4, 0.6, 1.0}).risk_neutral();
    h.x0 = 2.0;
    const auto moved = MixedModel::heston_kou(h, KouJumpParams{1.0, 3.0, 2.0, 0.4, 0.6, 1.0}).risk_neutral();
    for (Wing w : {Wing::Large, Wing::Small}) {
        const auto a = smile_expansion(base, w);
        const auto b = smile_expansion(moved, w);
        EXPECT_NEAR(a.c_inv, b.c_inv, 1e-9);
        EXPECT_NEAR(implied_vol_approx(a, strike(w, 20.0)), implied_vol_approx(b, strike(w, 20.0, 2.0)), 1e-9);
        EXPECT_NEAR(implied_vol_from_asymptotic_price(base, w, strike(w, 20.0)),
                    implied_vol_from_asymptotic_price(moved, w, strike(w, 20.0, 2.0)), 1e-9);
    }
}

TEST(SmileExpansion, Guards) {
    HestonParams h;
    const auto raw = MixedModel::heston_kou(h, KouJumpParams{1.0, 2.0, 1.0, 0.5, 0.5, 1.0});
    EXPECT_THROW(smile_expansion(raw, Wing::Large), NoArbitrageError);
    const auto e = smile_expansion(raw.risk_neutral(), Wing::Large);
    EXPECT_THROW(implied_vol_approx(e, 0.5), RegimeError);
    EXPECT_THROW(implied_vol_approx(e, std::exp(2.0)), RegimeError);
    EXPECT_NO_THROW(implied_vol_approx(e, std::exp(2.0), SmileGuard{1.5}));
    // Monotone leading behaviour.
    double prev = 0.0;
    for (double L = 4.0; L < 400.0; L *= 1.5) {
        const double iv = implied_vol_approx(e, std::exp(L));
        EXPECT_GT(iv, prev);
        prev = iv;
    }
}
