#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ptising/response.hpp"

using namespace ptising;
using std::numbers::pi;

namespace {

const Mode thermo = ThermodynamicLimit{};

double rel(cplx a, cplx b, double floor = 1.0) { return std::abs(a - b) / std::max(std::abs(a), floor); }

// uniform-field Ising ring: eps_g = -(1/pi) int_0^pi sqrt(1 + eta^2 - 2 eta cos q) dq
double tfim_energy(double eta) {
    const int n = 20000;
    double s = 0;
    for (int i = 0; i <= n; ++i) {
        const double q = pi * i / n;
        const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
        s += w * std::sqrt(1 + eta * eta - 2 * eta * std::cos(q));
    }
    return -(s * pi / (3.0 * n)) / pi;
}

} // namespace

TEST(Response, GradientVanishesAtOrigin) {
    auto [de, dx] = gradient_eps_g({0.0, 0.0}, thermo);
    EXPECT_NEAR(std::abs(de), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(dx), 0.0, 1e-15);
}

TEST(Response, LargeFieldGradient) {
    auto [de, dx] = gradient_eps_g({2.0, 0.0}, thermo);
    auto [fe, fx] = gradient_fd({2.0, 0.0}, 1e-5, thermo);
    EXPECT_NEAR(de.real(), -1.0, 0.1);
    EXPECT_LT(rel(de, fe), 1e-6);
    EXPECT_NEAR(dx.real(), 0.0, 1e-14);
}

TEST(Response, AgainstMpmathDerivatives) {
    // tests/oracles/frozen_values.py
    auto d = energy_derivatives({0.3, 0.4}, thermo);
    EXPECT_NEAR(d.d_eta.real(), -0.166909961398181407, 1e-11);
    EXPECT_NEAR(d.d_xi.real(), 0.184262456819816818, 1e-11);
    EXPECT_NEAR(d.d2_eta.real(), -0.566643365256007267, 1e-10);
    EXPECT_NEAR(d.d2_xi.real(), 0.437349243745066775, 1e-10);
    EXPECT_NEAR(d.d2_mixed.real(), -0.0791071802884139996, 1e-10);
    auto e = energy_derivatives({1.5, 0.2}, thermo);
    EXPECT_NEAR(e.d_eta.real(), -0.878346934800895014, 1e-11);
    EXPECT_NEAR(e.d_xi.real(), 0.00301215667320706869, 1e-11);
    EXPECT_NEAR(e.d2_eta.real(), -0.179030626517433251, 1e-10);
    EXPECT_NEAR(e.d2_xi.real(), 0.013962233831858777, 1e-10);
    EXPECT_NEAR(e.d2_mixed.real(), -0.00992089091960335971, 1e-10);
}

TEST(Response, LaplacianReflectionSymmetry) {
    EXPECT_NEAR(std::abs(laplacian_eps_g({0.3, 0.4}, thermo) - laplacian_eps_g({-0.3, 0.4}, thermo)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(laplacian_eps_g({0.3, 0.4}, thermo) - laplacian_eps_g({0.3, -0.4}, thermo)), 0.0, 1e-12);
}

TEST(Response, LaplacianIsSumOfPartials) {
    auto r = response({0.7, 0.2}, thermo);
    EXPECT_EQ(r.laplacian, r.d2_eta + r.d2_xi);
    EXPECT_NEAR(r.boundary_distance, boundary_distance({0.7, 0.2}), 0.0);
}

TEST(Response, UniformFieldReduction) {
    for (double eta : {0.3, 0.5, 0.8, 1.5, 2.5}) {
        const double h = 1e-3;
        const double fd = (-tfim_energy(eta + 2 * h) + 16 * tfim_energy(eta + h) - 30 * tfim_energy(eta) +
                           16 * tfim_energy(eta - h) - tfim_energy(eta - 2 * h)) /
                          (12 * h * h);
        auto d = energy_derivatives({eta, 0.0}, thermo);
        EXPECT_NEAR(d.d2_eta.real(), fd, 1e-6) << eta;
        EXPECT_NEAR(d.eps_g.real(), tfim_energy(eta), 1e-12) << eta;
    }
}

TEST(Response, FiniteDifferenceLaplacian) {
    for (auto p : {FieldPoint{0.0, 0.0}, FieldPoint{1.5, 0.2}}) {
        const cplx a = laplacian_eps_g(p, thermo);
        const cplx f = laplacian_fd(p, 1e-3, thermo);
        EXPECT_LT(rel(a, f, 1.0), 1e-6) << p.eta << "," << p.xi;
    }
}

TEST(Response, FiniteDifferenceConvergesOnHalving) {
    const FieldPoint p{1.5, 0.2};
    const cplx a = laplacian_eps_g(p, thermo);
    const double e1 = std::abs(laplacian_fd(p, 0.08, thermo) - a);
    const double e2 = std::abs(laplacian_fd(p, 0.04, thermo) - a);
    EXPECT_GT(e1 / e2, 4.0);
}

TEST(Response, FiniteDifferenceRejectsBadStep) {
    EXPECT_THROW(laplacian_fd({0.1, 0.1}, 0.0, thermo), InvalidArgument);
    EXPECT_THROW(gradient_fd({0.1, 0.1}, -1.0, thermo), InvalidArgument);
}

TEST(Response, AnalyticMatchesFiniteDifferencesOnGrid) {
    int checked = 0;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
            const FieldPoint p{-2.0 + 4.0 * i / 9, -2.0 + 4.0 * j / 9};
            if (boundary_distance(p) < 0.05) continue;
            ++checked;
            const auto d = energy_derivatives(p, thermo);
            const double h = default_fd_step(p);
            const auto [ge, gx] = gradient_fd(p, h, thermo);
            EXPECT_LT(rel(d.d_eta, ge), 1e-6);
            EXPECT_LT(rel(d.d_xi, gx), 1e-6);
            EXPECT_LT(rel(d.laplacian(), laplacian_fd(p, h, thermo)), 1e-6) << p.eta << "," << p.xi;
        }
    EXPECT_GT(checked, 80);
}

TEST(Response, MagnetizationLimits) {
    auto [ma0, mb0] = magnetizations({0.0, 0.0}, thermo);
    EXPECT_NEAR(std::abs(ma0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(mb0), 0.0, 1e-15);
    auto [ma, mb] = magnetizations({100.0, 0.0}, thermo);
    EXPECT_NEAR(std::abs(ma), 2.0, 1e-3);
    EXPECT_NEAR(ma.real(), -2.0, 1e-3);
    auto [a, b] = magnetizations({0.4, 0.7}, thermo);
    EXPECT_NEAR(std::abs(b - std::conj(a)), 0.0, 1e-15);
}

TEST(Response, MagnetizationIdentity) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    int n = 0;
    while (n < 100) {
        const FieldPoint p{u(rng), u(rng)};
        if (boundary_distance(p) < 0.05) continue;
        ++n;
        const double h = 1e-3;
        auto m = [&](double e, double x) { return magnetizations({e, x}, thermo); };
        auto d5 = [&](auto&& f) { return (-f(2 * h) + 8.0 * f(h) - 8.0 * f(-h) + f(-2 * h)) / (12 * h); };
        const cplx ds = d5([&](double t) { auto [a, b] = m(p.eta + t, p.xi); return a + b; });
        const cplx dd = d5([&](double t) { auto [a, b] = m(p.eta, p.xi + t); return a - b; });
        const cplx rhs = 0.25 * (ds - cplx{0, 1} * dd);
        EXPECT_LT(std::abs(laplacian_eps_g(p, thermo) - rhs), 1e-8) << p.eta << "," << p.xi;
    }
}

TEST(Response, GaplessPointRejected) {
    // eta = 0, |xi| > 1: the gap closes at k = 0
    EXPECT_THROW(energy_derivatives({0.0, 1.5}, thermo), GaplessError);
    EXPECT_NO_THROW(energy_derivatives({0.0, 1.5}, FiniteChain{600}));
}

TEST(Response, CriticalIntegrand) {
    EXPECT_NEAR(integrand_F(pi / 2, {1.0, 0.0}), 0.0609059599002770403, 1e-15);
    EXPECT_EQ(integrand_F(0.0, {0.5, 0.0}), 0.0);
    EXPECT_THROW(integrand_F(0.0, {0.6, 0.8}), SingularInput);
}

TEST(Response, AsymptoticForms) {
    EXPECT_NEAR(asymptotic_laplacian_circle(1.001, 0.0), 3.1095823928, 1e-9);
    EXPECT_NEAR(asymptotic_laplacian_circle(0.999, 0.0), asymptotic_laplacian_circle(1.001, 0.0), 1e-9);
    EXPECT_NEAR(asymptotic_laplacian_circle(1.001, pi / 3), 2 * asymptotic_laplacian_circle(1.001, 0.0), 1e-9);
    EXPECT_THROW(asymptotic_laplacian_circle(1.001, pi / 2), SingularInput);
    EXPECT_THROW(asymptotic_laplacian_circle(1.0, 0.0), InvalidArgument);
    EXPECT_THROW(asymptotic_laplacian_circle(1.2, 0.0), InvalidArgument);
    EXPECT_NEAR(asymptotic_laplacian_axis(1e-3), 3.1095823928, 1e-9);
    EXPECT_EQ(asymptotic_laplacian_axis(-1e-3), asymptotic_laplacian_axis(1e-3));
    EXPECT_THROW(asymptotic_laplacian_axis(0.0), InvalidArgument);
}
