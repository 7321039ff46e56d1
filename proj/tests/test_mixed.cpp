#include "mixedvol/errors.hpp"
#include "mixedvol/mixed.hpp"
#include "mixedvol/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace mixedvol;

namespace {

HestonParams ref() { return HestonParams{}; }
KouJumpParams kou(double eta1, double eta2) { return KouJumpParams{1.0, eta1, eta2, 0.5, 0.5, 1.0}; }
NIGParams nig(double alpha) { return NIGParams{alpha, 0.5, 1.0}; }

double rel(double a, double b) { return std::abs(a / b - 1.0); }

}  // namespace

TEST(Classify, KouAgainstReferenceExponents) {
    const auto k = tail_constants(ref());
    auto m = MixedModel::heston_kou(ref(), kou(2.0, 1.0));
    auto [up, down] = classify(m);
    EXPECT_EQ(up.dominant, Dominant::Jump);
    EXPECT_EQ(down.dominant, Dominant::Jump);
    EXPECT_NEAR(up.margin, k.A3 - 3.0, 1e-12);
    EXPECT_NEAR(down.margin, k.A3t - 0.0, 1e-12);

    m = MixedModel::heston_kou(ref(), kou(20.0, 10.0));
    std::tie(up, down) = classify(m);
    EXPECT_EQ(up.dominant, Dominant::Diffusion);
    EXPECT_EQ(down.dominant, Dominant::Diffusion);
    EXPECT_EQ(up.wing, Wing::Large);
    EXPECT_EQ(down.wing, Wing::Small);
}

TEST(Classify, NigAgainstReferenceExponents) {
    EXPECT_EQ(classify_wing(MixedModel::heston_nig(ref(), nig(4.0)), Wing::Large).dominant, Dominant::Jump);
    EXPECT_EQ(classify_wing(MixedModel::heston_nig(ref(), nig(4.0)), Wing::Small).dominant, Dominant::Jump);
    EXPECT_EQ(classify_wing(MixedModel::heston_nig(ref(), nig(16.0)), Wing::Large).dominant, Dominant::Diffusion);
    EXPECT_EQ(classify_wing(MixedModel::heston_nig(ref(), nig(8.0)), Wing::Small).dominant, Dominant::Diffusion);
    EXPECT_EQ(classify_wing(MixedModel::heston_nig(ref(), nig(8.0)), Wing::Large).dominant, Dominant::Jump);
}

TEST(Classify, DegenerateExponentsRefused) {
    const auto k = tail_constants(ref());
    const auto up = MixedModel::heston_kou(ref(), kou(k.A3 - 1.0, 2.0));
    EXPECT_THROW(classify_wing(up, Wing::Large), DegenerateError);
    EXPECT_THROW(mixed_tail_asymptote(up), DegenerateError);
    EXPECT_NO_THROW(mixed_zero_asymptote(up));
    const auto down = MixedModel::heston_kou(ref(), kou(3.0, k.A3t + 1.0));
    EXPECT_THROW(mixed_zero_asymptote(down), DegenerateError);
    EXPECT_THROW(mixed_asymptote_via_mellin(down, Wing::Small), DegenerateError);
    EXPECT_THROW(classify_wing(MixedModel::heston_nig(ref(), nig(k.A3 - 1.0)), Wing::Large), DegenerateError);
    EXPECT_THROW(classify_wing(MixedModel::heston_nig(ref(), nig(k.A3t + 1.0)), Wing::Small), DegenerateError);
    // Just outside the tolerance band the dichotomy applies again.
    const auto near = MixedModel::heston_kou(ref(), kou(k.A3 - 1.0 + 1e-6, 2.0));
    EXPECT_EQ(classify_wing(near, Wing::Large).dominant, Dominant::Diffusion);
    EXPECT_THROW(classify_wing(near, Wing::Large, 1e-6), DegenerateError);
}

TEST(Classify, SwapFlipsTagNotErrorClass) {
    const auto k = tail_constants(ref());
    for (double d : {0.5, 2.0}) {
        const auto a = MixedModel::heston_kou(ref(), kou(k.A3 - 1.0 - d, k.A3t + 1.0 - d));
        const auto b = MixedModel::heston_kou(ref(), kou(k.A3 - 1.0 + d, k.A3t + 1.0 + d));
        for (Wing w : {Wing::Large, Wing::Small}) {
            EXPECT_EQ(classify_wing(a, w).dominant, Dominant::Jump);
            EXPECT_EQ(classify_wing(b, w).dominant, Dominant::Diffusion);
            EXPECT_NEAR(classify_wing(a, w).margin, classify_wing(b, w).margin, 1e-12);
            EXPECT_EQ(mixed_asymptote(a, w).error_order, mixed_asymptote(b, w).error_order);
        }
    }
}

TEST(MixedModelTest, HorizonsMustAgree) {
    auto j = kou(2.0, 1.0);
    j.t = 2.0;
    EXPECT_THROW(MixedModel::heston_kou(ref(), j), DomainError);
    EXPECT_THROW(MixedModel::heston_only(ref()).kou(), DomainError);
    EXPECT_THROW(MixedModel::heston_only(ref()).nig(), DomainError);
}

TEST(MixedModelTest, StripAndMoments) {
    const auto m = MixedModel::heston_kou(ref(), kou(3.0, 2.0));
    const auto [lo, hi] = m.moment_strip();
    EXPECT_DOUBLE_EQ(hi, 3.0);
    EXPECT_DOUBLE_EQ(lo, -2.0);
    EXPECT_NEAR(m.log_moment(1.5), log_mgf(ref(), 1.5) + log_jump_mgf(m.kou(), 1.5), 1e-15);
    EXPECT_THROW(m.log_moment(3.5), MomentExplosionError);
    const auto rn = m.risk_neutral();
    EXPECT_NEAR(rn.log_moment(1.0), 0.0, 1e-13);
    EXPECT_NEAR(MixedModel::heston_nig(ref(), nig(4.0)).risk_neutral().log_moment(1.0), 0.0, 1e-13);
}

TEST(MixedAsymptote, JumpDominantExponentsIgnoreHeston) {
    for (double c : {0.3, 0.5, 0.8}) {
        HestonParams h;
        h.c = c;
        const auto m = MixedModel::heston_kou(h, kou(2.0, 1.0));
        const auto a = mixed_tail_asymptote(m);
        EXPECT_DOUBLE_EQ(a.r3, 3.0);
        EXPECT_DOUBLE_EQ(a.r4, -0.75);
        EXPECT_NEAR(a.r2, 2.0 * std::sqrt(2.0 * 0.5), 1e-14);
        const auto z = mixed_zero_asymptote(m);
        EXPECT_DOUBLE_EQ(z.r3, 0.0);
        EXPECT_NEAR(z.r2, 2.0 * std::sqrt(1.0 * 0.5), 1e-14);
    }
}

TEST(MixedAsymptote, JumpDominantPrefactor) {
    const auto m = MixedModel::heston_kou(ref(), kou(2.0, 1.0));
    const auto a = mixed_tail_asymptote(m);
    const double B = 2.0 * 0.5;
    const double expected = std::pow(B, 0.25) / (2.0 * std::sqrt(M_PI)) * mgf(ref(), 2.0) *
                            std::exp(1.0 * 1.0 * 0.5 / 3.0 - 1.0);
    EXPECT_NEAR(a.r1 / expected, 1.0, 1e-13);
}

TEST(MixedAsymptote, VanishingIntensityGivesHeston) {
    const auto k = tail_constants(ref());
    auto j = kou(20.0, 10.0);
    j.lambda = 1e-10;
    const auto m = MixedModel::heston_kou(ref(), j);
    const auto a = mixed_tail_asymptote(m);
    const auto z = mixed_zero_asymptote(m);
    EXPECT_NEAR(a.r1 / k.B1, 1.0, 1e-8);
    EXPECT_NEAR(z.r1 / k.B1t, 1.0, 1e-8);
    EXPECT_DOUBLE_EQ(a.r3, k.A3);
    EXPECT_DOUBLE_EQ(z.r3, k.A3t);
}

TEST(MixedAsymptote, NigSmallWingFlagged) {
    EXPECT_TRUE(mixed_zero_asymptote(MixedModel::heston_nig(ref(), nig(4.0))).extrapolated);
    EXPECT_FALSE(mixed_tail_asymptote(MixedModel::heston_nig(ref(), nig(4.0))).extrapolated);
    const auto n = mixed_tail_asymptote(MixedModel::heston_nig(ref(), nig(4.0)));
    EXPECT_EQ(n.r2, 0.0);
    EXPECT_EQ(n.r4, -1.5);
    EXPECT_EQ(n.error_order, ErrorOrder::InvLog);
}

TEST(MixedAsymptote, MellinRouteIdentity) {
    const std::vector<MixedModel> ms{
        MixedModel::heston_kou(ref(), kou(2.0, 1.0)), MixedModel::heston_kou(ref(), kou(20.0, 10.0)),
        MixedModel::heston_nig(ref(), nig(4.0)), MixedModel::heston_nig(ref(), nig(16.0))};
    for (const auto& m : ms) {
        for (Wing w : {Wing::Large, Wing::Small}) {
            const auto a = mixed_asymptote(m, w);
            const auto b = mixed_asymptote_via_mellin(m, w);
            EXPECT_NEAR(b.r1 / a.r1, 1.0, 1e-12) << to_string(m.kind()) << " " << to_string(w);
            EXPECT_NEAR(b.r2, a.r2, 1e-12);
            EXPECT_NEAR(b.r3, a.r3, 1e-12);
            EXPECT_NEAR(b.r4, a.r4, 1e-12);
            EXPECT_EQ(a.side, b.side);
            EXPECT_EQ(a.error_order, b.error_order);
        }
    }
}

TEST(MixedAsymptote, MomentTransferByQuadrature) {
    // MU(eta) = m_{-eta-1}(U) with MU computed from the Fourier-inverted density.
    const auto m = MixedModel::heston_kou(ref(), kou(2.0, 1.0));
    MellinKernel U = heston_kernel(m);
    for (double z : {-3.0, -1.0, 2.0, -6.0}) {
        const double q = mellin_transform(U.density, z, {1e-11, 0.0, 4000});
        EXPECT_NEAR(q / U.transform(z), 1.0, 1e-8) << z;
    }
    // Jump factor: atom plus H, with m_{A3-1}(H) obtained by atom subtraction.
    const auto d = MixedModel::heston_kou(ref(), kou(20.0, 10.0));
    const auto k = d.constants();
    const auto law = d.kou_law();
    for (double s : {k.A3 - 1.0, -k.A3t - 1.0}) {
        auto f = [&](double y) { return std::exp(s * y + law.log_density(y)); };
        const double q = numerics::integrate(f, -60.0, 0.0, {1e-12, 0.0, 4000}) +
                         numerics::integrate(f, 0.0, 60.0, {1e-12, 0.0, 4000});
        EXPECT_NEAR(q / (std::exp(d.jump_log_moment(s)) - std::exp(-1.0)), 1.0, 1e-8) << s;
    }
}

TEST(MixedAsymptote, MomentIndexAgainstDensityRatio) {
    // D(x) / D1(x) tends to E[X2^{A3-1}] at infinity and E[X2^{-A3~-1}] at zero.
    const auto m = MixedModel::heston_kou(ref(), kou(20.0, 10.0));
    const auto k = m.constants();
    FourierOptions far;
    far.boundary_gap = 1e-4;
    const auto inv = oracles::mixed_inverter(m, far);
    const auto inv1 = oracles::heston_inverter(m.heston(), far);
    auto ratio = [&](double y) { return std::exp(inv.density(y).log_value - inv1.density(y).log_value); };
    const double at_zero = ratio(-1600.0), at_inf = ratio(1600.0);
    const double right_index = std::exp(m.jump_log_moment(-k.A3t - 1.0));
    const double other_index = std::exp(m.jump_log_moment(k.A3 - 1.0));
    EXPECT_LT(rel(at_zero, right_index), 0.05);
    EXPECT_LT(rel(at_zero, right_index), rel(at_zero, other_index));
    EXPECT_LT(rel(at_inf, other_index), 0.05);
}

TEST(MixedDensityTest, MatchesFourierRoute) {
    const std::vector<MixedModel> ms{MixedModel::heston_kou(ref(), kou(3.0, 2.0)),
                                     MixedModel::heston_nig(ref(), nig(4.0))};
    for (const auto& m : ms) {
        const MixedDensity d(m);
        for (double y : {-8.0, -2.0, 0.0, 1.0, 8.0}) {
            const double x = std::exp(y);
            EXPECT_NEAR(d.density(x) / oracles::density_fourier(m, x), 1.0, 1e-6) << to_string(m.kind()) << y;
        }
    }
}

TEST(MixedDensityTest, NormalisationAndLimit) {
    const auto m = MixedModel::heston_kou(ref(), kou(3.0, 2.0));
    const MixedDensity d(m);
    auto f = [&](double y) { return std::exp(d.log_density_log_price(y)); };
    double mass = 0.0;
    for (double a = -20.0; a < 20.0; a += 2.0) mass += numerics::integrate(f, a, a + 2.0, {1e-10, 0.0, 2000});
    EXPECT_NEAR(mass, 1.0, 1e-6);

    auto j = kou(3.0, 2.0);
    j.lambda = 1e-9;
    const MixedDensity thin(MixedModel::heston_kou(ref(), j));
    for (double x : {0.5, 1.0, 2.0}) {
        EXPECT_NEAR(thin.density(x) / oracles::heston_density_fourier(ref(), x), 1.0, 1e-7);
    }
    EXPECT_THROW(d.density(0.0), DomainError);
}

TEST(MixedDensityTest, ChiSquareAgainstSimulation) {
    const auto m = MixedModel::heston_kou(ref(), kou(3.0, 2.0));
    const MixedDensity d(m);
    const auto xs = oracles::simulate_paths(m, 100000, 31337, {200});
    // Bins in log price with model probabilities by quadrature.
    std::vector<double> edges{-INFINITY};
    for (double e = -2.0; e <= 2.0 + 1e-9; e += 0.2) edges.push_back(e);
    edges.push_back(INFINITY);
    auto f = [&](double y) { return std::exp(d.log_density_log_price(y)); };
    std::vector<double> obs(edges.size() - 1, 0.0);
    for (double x : xs) {
        const double y = std::log(x);
        std::size_t i = 0;
        while (y >= edges[i + 1]) ++i;
        obs[i] += 1.0;
    }
    double chi2 = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double a = std::isfinite(edges[i]) ? edges[i] : -30.0;
        const double b = std::isfinite(edges[i + 1]) ? edges[i + 1] : 30.0;
        const double p = numerics::integrate(f, a, b, {1e-10, 0.0, 2000});
        const double e = p * static_cast<double>(xs.size());
        chi2 += (obs[i] - e) * (obs[i] - e) / e;
    }
    // 21 degrees of freedom; the 0.999 quantile is 46.8.
    EXPECT_LT(chi2, 46.8);
}
