#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <random>

#include "ptising/eigen_qr.hpp"

using namespace ptising;

namespace {

DenseComplexMatrix random_matrix(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    DenseComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = {g(rng), g(rng)};
    return m;
}

std::vector<cplx> reference(const DenseComplexMatrix& m) {
    const auto n = static_cast<Eigen::Index>(m.dim());
    Eigen::MatrixXcd e(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) e(i, j) = m(i, j);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> s(e, false);
    std::vector<cplx> v(s.eigenvalues().begin(), s.eigenvalues().end());
    return v;
}

// greedy matching distance between two eigenvalue multisets
double match(std::vector<cplx> a, std::vector<cplx> b) {
    double worst = 0;
    for (const cplx& x : a) {
        auto it = std::min_element(b.begin(), b.end(), [&](cplx p, cplx q) { return std::abs(p - x) < std::abs(q - x); });
        worst = std::max(worst, std::abs(*it - x));
        b.erase(it);
    }
    return worst;
}

} // namespace

TEST(Eigen, Diagonal) {
    DenseComplexMatrix m(4);
    m(0, 0) = 3.0;
    m(1, 1) = cplx{-1.0, 2.0};
    m(2, 2) = 0.5;
    m(3, 3) = -7.0;
    auto r = eigenvalues_dense(m);
    ASSERT_EQ(r.values.size(), 4u);
    EXPECT_EQ(r.values[0], cplx(-7.0));
    EXPECT_EQ(r.values[1], cplx(-1.0, 2.0));
    EXPECT_EQ(r.values[2], cplx(0.5));
    EXPECT_EQ(r.values[3], cplx(3.0));
    EXPECT_TRUE(r.all_certified());
}

TEST(Eigen, PauliX) {
    DenseComplexMatrix m(2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    auto r = eigenvalues_dense(m);
    EXPECT_NEAR(std::abs(r.values[0] + 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(r.values[1] - 1.0), 0.0, 1e-15);
}

TEST(Eigen, TraceIdentity) {
    for (unsigned seed = 1; seed <= 10; ++seed) {
        auto m = random_matrix(16, seed);
        auto r = eigenvalues_dense(m);
        cplx s{};
        for (auto v : r.values) s += v;
        EXPECT_LT(std::abs(s - m.trace()), 1e-9 * std::max(1.0, std::abs(m.trace())));
        EXPECT_TRUE(r.all_certified());
    }
}

TEST(Eigen, MatchesEigenLibrary) {
    for (std::size_t n : {3u, 7u, 32u, 100u}) {
        auto m = random_matrix(n, 100 + static_cast<unsigned>(n));
        auto r = eigenvalues_dense(m);
        EXPECT_LT(match(r.values, reference(m)), 1e-10 * m.frobenius()) << n;
    }
}

TEST(Eigen, BadlyScaledNonNormal) {
    // graded upper-triangular part plus a small lower perturbation
    const std::size_t n = 20;
    auto m = random_matrix(n, 77);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) *= j >= i ? std::pow(10.0, (double(j) - double(i)) / 2.0) : 1e-3;
    auto r = eigenvalues_dense(m);
    EXPECT_TRUE(r.all_certified());
    EXPECT_LT(match(r.values, reference(m)), 1e-8 * m.frobenius());
}

TEST(Eigen, SortedByRealThenImaginary) {
    auto r = eigenvalues_dense(random_matrix(30, 4));
    for (std::size_t i = 1; i < r.values.size(); ++i)
        EXPECT_TRUE(r.values[i - 1].real() < r.values[i].real() ||
                    (r.values[i - 1].real() == r.values[i].real() && r.values[i - 1].imag() <= r.values[i].imag()));
}

TEST(Eigen, ZeroAndEmpty) {
    auto r = eigenvalues_dense(DenseComplexMatrix(5));
    for (auto v : r.values) EXPECT_EQ(v, cplx{});
    EXPECT_TRUE(eigenvalues_dense(DenseComplexMatrix(0)).values.empty());
}

TEST(Eigen, SizeCap) {
    EXPECT_THROW(eigenvalues_dense(DenseComplexMatrix(4097)), InvalidArgument);
}

TEST(Eigen, InverseIteration) {
    auto m = random_matrix(12, 21);
    auto r = eigenvalues_dense(m);
    for (auto lambda : r.values) {
        auto v = inverse_iteration(m, lambda, 1e-10);
        auto mv = m.apply(v);
        double res = 0;
        for (std::size_t i = 0; i < v.size(); ++i) res += std::norm(mv[i] - lambda * v[i]);
        EXPECT_LT(std::sqrt(res), 1e-10 * m.frobenius());
    }
}
