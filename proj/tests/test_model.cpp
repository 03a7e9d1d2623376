#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ptising/model.hpp"

using namespace ptising;
using std::numbers::pi;

TEST(Model, FieldPointRejectsNonPositiveCoupling) {
    EXPECT_THROW(FieldPoint(0.1, 0.2, 0.0), InvalidArgument);
    EXPECT_THROW(FieldPoint(0.1, 0.2, -1.0), InvalidArgument);
    EXPECT_NO_THROW(FieldPoint(0.1, 0.2, 2.0));
}

TEST(Model, Polar) {
    auto a = to_polar({1.0, 0.0});
    EXPECT_EQ(a.r, 1.0);
    EXPECT_EQ(a.phi, 0.0);
    auto o = to_polar({0.0, 0.0});
    EXPECT_EQ(o.r, 0.0);
    EXPECT_EQ(o.phi, 0.0);
    auto c = to_polar({0.6, 0.8});
    EXPECT_NEAR(c.r, 1.0, 1e-15);
    EXPECT_NEAR(c.phi, std::atan2(0.8, 0.6), 1e-15);
    EXPECT_NEAR(c.phi, 0.927295, 1e-6);
    auto d = to_polar({-0.3, -0.4});
    EXPECT_GE(d.phi, 0.0);
    EXPECT_LT(d.phi, 2 * pi);
    EXPECT_NEAR(d.r * std::cos(d.phi), -0.3, 1e-15);
    EXPECT_NEAR(d.r * std::sin(d.phi), -0.4, 1e-15);
}

TEST(Model, EvenGridSmallChains) {
    auto g8 = momentum_grid(8, Sector::Even);
    ASSERT_EQ(g8.momenta.size(), 2u);
    EXPECT_NEAR(g8.momenta[0], pi / 4, 1e-15);
    EXPECT_NEAR(g8.momenta[1], 3 * pi / 4, 1e-15);
    EXPECT_EQ(g8.weights[0], 2.0);
    auto g4 = momentum_grid(4, Sector::Even);
    ASSERT_EQ(g4.momenta.size(), 1u);
    EXPECT_NEAR(g4.momenta[0], pi / 2, 1e-15);
}

TEST(Model, EvenGridAtSixHundred) {
    auto g = momentum_grid(600, Sector::Even);
    ASSERT_EQ(g.momenta.size(), 150u);
    EXPECT_NEAR(g.momenta.back(), 2 * pi * 149.5 / 300, 1e-13);
    EXPECT_LT(g.momenta.back(), pi);
    for (std::size_t i = 1; i < g.momenta.size(); ++i) EXPECT_LT(g.momenta[i - 1], g.momenta[i]);
    double w = 0;
    for (double x : g.weights) w += x;
    EXPECT_EQ(w, 300.0);
}

TEST(Model, OddCellCountPutsPiOnTheGridOnce) {
    // N = 3: k = pi/3 (twice, +-k) and k = pi (once)
    auto g = momentum_grid(6, Sector::Even);
    ASSERT_EQ(g.momenta.size(), 2u);
    EXPECT_NEAR(g.momenta[1], pi, 1e-15);
    EXPECT_EQ(g.weights[0], 2.0);
    EXPECT_EQ(g.weights[1], 1.0);
}

TEST(Model, OddSectorGrid) {
    auto g = momentum_grid(8, Sector::Odd);
    ASSERT_EQ(g.momenta.size(), 3u);
    EXPECT_EQ(g.momenta[0], 0.0);
    EXPECT_EQ(g.weights[0], 1.0);
    EXPECT_NEAR(g.momenta[2], pi, 1e-15);
}

TEST(Model, GridRejectsBadSizes) {
    EXPECT_THROW(momentum_grid(2), InvalidArgument);
    EXPECT_THROW(momentum_grid(7), InvalidArgument);
    EXPECT_THROW(momentum_grid(-4), InvalidArgument);
}

TEST(Model, InnerRadical) {
    EXPECT_EQ(inner_radical(0.7, 0.0), 1.0);
    EXPECT_EQ(inner_radical(0.0, 1.0), 0.0);
    EXPECT_NEAR(inner_radical(pi / 2, 1.0), std::sqrt(2.0), 1e-15);
}

TEST(Model, InnerRadicalLowerBound) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> kd(-pi, pi), rd(0.0, 3.0);
    for (int i = 0; i < 1000000; ++i) {
        const double k = kd(rng), r = rd(rng);
        ASSERT_GE(inner_radical(k, r), std::abs(r * r - 1.0) * (1 - 1e-15));
    }
}

TEST(Model, DispersionValues) {
    EXPECT_NEAR(dispersion(1, 0.3, {0.0, 0.0}).real(), 2.0, 1e-15);
    EXPECT_NEAR(dispersion(1, pi, {1.0, 0.0}).real(), std::sqrt(8.0), 1e-14);
    EXPECT_NEAR(dispersion(1, 0.0, {0.6, 0.8}).real(), 1.2, 1e-14);
    EXPECT_EQ(dispersion(5, 0.3, {0.4, 0.2}), cplx{});
    EXPECT_EQ(dispersion(6, 0.3, {0.4, 0.2}), cplx{});
    EXPECT_THROW(dispersion(0, 0.3, {}), InvalidArgument);
    EXPECT_THROW(dispersion(7, 0.3, {}), InvalidArgument);
}

TEST(Model, DispersionCouplingScale) {
    const FieldPoint a{0.7, 0.3, 1.0}, b{0.7, 0.3, 2.5};
    EXPECT_NEAR(std::abs(dispersion(1, 1.1, b) - 2.5 * dispersion(1, 1.1, a)), 0.0, 1e-14);
}

TEST(Model, DispersionSymmetries) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> kd(0, pi), fd(-2, 2);
    for (int i = 0; i < 2000; ++i) {
        const double k = kd(rng), e = fd(rng), x = fd(rng);
        for (int n = 1; n <= 6; ++n) {
            const cplx v = dispersion(n, k, {e, x});
            EXPECT_EQ(v, dispersion(n, k, {-e, x}));
            EXPECT_EQ(v, dispersion(n, k, {e, -x}));
        }
        EXPECT_EQ(dispersion(1, k, {e, x}) + dispersion(2, k, {e, x}), cplx{});
        EXPECT_EQ(dispersion(3, k, {e, x}) + dispersion(4, k, {e, x}), cplx{});
        const cplx e1 = dispersion(1, k, {e, x});
        EXPECT_GE(e1.real(), 0.0);
        EXPECT_EQ(e1.imag(), 0.0);
        EXPECT_EQ(e1.real(), eps1(k, {e, x}));
        const cplx e3 = dispersion(3, k, {e, x});
        EXPECT_GE(e3.real(), 0.0);
        EXPECT_GE(e3.imag(), 0.0);
    }
}

TEST(Model, RealWhenXiVanishes) {
    for (double k : {0.1, 1.0, 2.0, 3.0})
        for (double e : {0.2, 0.9, 1.7}) {
            EXPECT_EQ(dispersion(1, k, {e, 0.0}).imag(), 0.0);
            EXPECT_EQ(dispersion(3, k, {e, 0.0}).imag(), 0.0);
        }
}

TEST(Model, NormalizationFactor) {
    EXPECT_NEAR(std::abs(normalization_factor_squared(1, 1e-9, {0.0, 0.0}) - 4.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(normalization_factor(1, 1e-9, {0.0, 0.0}) - 2.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(normalization_factor_squared(1, pi, {0.0, 0.0}) - 4.0), 0.0, 1e-12);
    // eps_1 = 2 eta at k = 0 for eta > 1, xi = 0
    EXPECT_THROW(normalization_factor(1, 0.0, {1.5, 0.0}), DegenerateDenominator);
    // eps_3 = 2i xi at k = pi
    EXPECT_THROW(normalization_factor(3, pi, {0.4, 0.3}), DegenerateDenominator);
    EXPECT_THROW(normalization_factor(6, 0.3, {0.4, 0.3}), InvalidArgument);
}
