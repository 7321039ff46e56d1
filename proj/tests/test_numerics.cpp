#include "mixedvol/errors.hpp"
#include "mixedvol/numerics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace mixedvol;
using namespace mixedvol::numerics;

namespace {
const double kPi = 3.14159265358979323846;

double k1_by_quadrature(double z) {
    Tolerance tol{1e-13, 0.0, 4000};
    // K_1(z) = 1/2 int_0^inf exp(-z/2 (u + 1/u)) du, split at u = 1 so that
    // both halves are smooth after the infinite-range substitution.
    auto f = [z](double u) { return u <= 0.0 ? 0.0 : 0.5 * std::exp(-0.5 * z * (u + 1.0 / u)); };
    return integrate(f, 0.0, 1.0, tol) + integrate(f, 1.0, INFINITY, tol);
}
}  // namespace

TEST(LogGamma, KnownValues) {
    EXPECT_NEAR(log_gamma(1.0), 0.0, 1e-15);
    EXPECT_NEAR(log_gamma(5.0), std::log(24.0), 1e-13);
    EXPECT_NEAR(log_gamma(2.5), std::log(3.0 * std::sqrt(kPi) / 4.0), 1e-13);
    EXPECT_THROW(log_gamma(0.0), DomainError);
    EXPECT_THROW(log_gamma(-1.5), DomainError);
}

TEST(LogGamma, Recursion) {
    for (double x = 0.5; x <= 100.0; x += 0.37) {
        EXPECT_NEAR(log_gamma(x + 1.0) - log_gamma(x), std::log(x), 1e-12) << x;
    }
}

TEST(BesselK1, LargeArgumentAsymptote) {
    const double z = 30.0;
    const double approx = std::sqrt(kPi / 60.0) * std::exp(-30.0);
    EXPECT_NEAR(bessel_k1(z) / approx, 1.0, 0.05);
}

TEST(BesselK1, MatchesIntegralDefinition) {
    EXPECT_NEAR(bessel_k1(1.0) / k1_by_quadrature(1.0), 1.0, 1e-10);
    for (double z : {0.1, 0.5, 2.0, 7.5, 20.0, 29.9, 30.1, 40.0, 50.0}) {
        EXPECT_NEAR(bessel_k1(z) / k1_by_quadrature(z), 1.0, 1e-8) << z;
    }
}

TEST(BesselK1, SmallArgumentPole) {
    const double z = 1e-4;
    EXPECT_NEAR(bessel_k1(z) * z, 1.0, 1e-3);
}

TEST(BesselK1, RegimeSwitchIsContinuous) {
    const double below = bessel_k1_scaled(30.0);
    const double above = bessel_k1_scaled(std::nextafter(30.0, 31.0));
    EXPECT_NEAR(above / below, 1.0, 1e-13);
}

TEST(BesselK1, UnderflowFlag) {
    auto v = bessel_k1_checked(800.0);
    EXPECT_TRUE(v.underflow);
    EXPECT_EQ(v.value, 0.0);
    EXPECT_GT(v.scaled, 0.0);
    EXPECT_NEAR(log_bessel_k1(800.0), std::log(v.scaled) - 800.0, 1e-12);
    EXPECT_THROW(bessel_k1(0.0), DomainError);
}

TEST(Integrate, ElementaryIntegrals) {
    Tolerance tol{1e-12, 0.0, 2000};
    EXPECT_NEAR(integrate([](double) { return 1.0; }, 0.0, 1.0, tol), 1.0, 1e-14);
    EXPECT_NEAR(integrate([](double t) { return std::exp(-t); }, 0.0, INFINITY, tol), 1.0, 1e-11);
    EXPECT_NEAR(integrate([](double y) { return y > 0 ? 1.0 / std::sqrt(y) : 0.0; }, 0.0, 1.0, tol), 2.0,
                1e-10);
    EXPECT_NEAR(integrate([](double y) { return std::exp(-y * y); }, -INFINITY, INFINITY, tol),
                std::sqrt(kPi), 1e-11);
}

TEST(Integrate, ReversedLimitsAndLinearity) {
    Tolerance tol{1e-12, 0.0, 2000};
    auto f = [](double x) { return std::sin(x) * std::exp(-x / 3.0); };
    auto g = [](double x) { return 1.0 / (1.0 + x * x); };
    const double a = 2.5, b = -0.75;
    const double lhs = integrate([&](double x) { return a * f(x) + b * g(x); }, 0.0, 10.0, tol);
    const double rhs = a * integrate(f, 0.0, 10.0, tol) + b * integrate(g, 0.0, 10.0, tol);
    EXPECT_NEAR(lhs, rhs, 1e-11);
    EXPECT_NEAR(integrate(f, 10.0, 0.0, tol), -integrate(f, 0.0, 10.0, tol), 1e-14);
}

TEST(Integrate, ConvergenceErrorCarriesEstimate) {
    Tolerance tol{1e-14, 0.0, 5};
    try {
        integrate([](double x) { return std::sin(200.0 * x); }, 0.0, 10.0, tol);
        FAIL() << "expected ConvergenceError";
    } catch (const ConvergenceError& e) {
        EXPECT_TRUE(std::isfinite(e.best_estimate()));
        EXPECT_GT(e.error_estimate(), 0.0);
    }
}

TEST(FindRoot, SimpleRoots) {
    Tolerance tol{1e-12, 1e-15, 200};
    EXPECT_NEAR(find_root([](double x) { return x - 2.0; }, 0.0, 5.0, tol), 2.0, 1e-14);
    EXPECT_NEAR(find_root([](double x) { return x * x - 2.0; }, 1.0, 2.0, tol), std::sqrt(2.0), 1e-14);
    EXPECT_THROW(find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0, tol), BracketError);
}

TEST(FindRoot, ToleratesInfiniteValues) {
    Tolerance tol{1e-12, 1e-15, 200};
    auto f = [](double x) { return x < 0.5 ? -INFINITY : (x > 0.9 ? INFINITY : x - 0.7); };
    EXPECT_NEAR(find_root(f, 0.0, 1.0, tol), 0.7, 1e-13);
}

TEST(Minimize, Parabola) {
    EXPECT_NEAR(minimize_scalar([](double x) { return (x - 1.3) * (x - 1.3); }, -5.0, 5.0), 1.3, 1e-8);
}

TEST(RngStream, Deterministic) {
    RngStream a(42), b(42);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.uniform(), b.uniform());
    RngStream c(42, 7), d = RngStream(42).substream(7);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(c.normal(), d.normal());
}

TEST(RngStream, MeanAndSubstreamCorrelation) {
    const int n = 1000000;
    RngStream s0 = RngStream(2024).substream(0);
    RngStream s1 = RngStream(2024).substream(1);
    double m0 = 0, m1 = 0, c01 = 0, v0 = 0, v1 = 0;
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
        x[i] = s0.uniform();
        y[i] = s1.uniform();
        m0 += x[i];
        m1 += y[i];
    }
    m0 /= n;
    m1 /= n;
    for (int i = 0; i < n; ++i) {
        c01 += (x[i] - m0) * (y[i] - m1);
        v0 += (x[i] - m0) * (x[i] - m0);
        v1 += (y[i] - m1) * (y[i] - m1);
    }
    const double r = c01 / std::sqrt(v0 * v1);
    EXPECT_NEAR(m0, 0.5, 3.0 * (1.0 / std::sqrt(12.0)) / 1e3);
    EXPECT_LT(std::abs(r), 3.0 / std::sqrt(double(n)));
}

TEST(NormalCdf, TailAccuracy) {
    EXPECT_NEAR(normal_cdf(0.0), 0.5, 1e-16);
    // log Phi(-40) from the asymptotic series of the Mills ratio.
    const double x = 40.0;
    const double series = 1.0 / x * (1.0 - 1.0 / (x * x) + 3.0 / std::pow(x, 4) - 15.0 / std::pow(x, 6) +
                                       105.0 / std::pow(x, 8) - 945.0 / std::pow(x, 10));
    const double expected = -0.5 * x * x - 0.5 * std::log(2.0 * kPi) + std::log(series);
    EXPECT_NEAR(log_normal_cdf(-x), expected, 1e-12);
    EXPECT_NEAR(mills_ratio(x), series, 1e-14);
    EXPECT_NEAR(mills_ratio(24.9) / mills_ratio(25.1), 25.1 / 24.9, 1e-3);
}
