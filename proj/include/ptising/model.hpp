#pragma once

// Parameters, momentum grids and the closed-form quasiparticle dispersion of
// the Ising ring in a staggered complex transverse field
//
//     H = -J sum_j (sz_j sz_{j+1} + g_j sx_j),   g_j = eta + i (-1)^j xi,
//
// so even sites (sublattice a) see eta + i xi and odd sites (b) see eta - i xi.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "errors.hpp"
#include "numeric.hpp"

namespace ptising {

/// A point of the complex-field plane, fields in units of J.
struct FieldPoint {
    double eta = 0.0;
    double xi = 0.0;
    double J = 1.0;

    FieldPoint() = default;
    FieldPoint(double eta_, double xi_, double J_ = 1.0) : eta(eta_), xi(xi_), J(J_) {
        if (!(J > 0.0) || !std::isfinite(J)) throw InvalidArgument("FieldPoint: J must be positive");
    }

    FieldPoint with_eta(double e) const { return {e, xi, J}; }
    FieldPoint with_xi(double x) const { return {eta, x, J}; }
    double radius_sq() const { return eta * eta + xi * xi; }
};

struct Polar {
    double r;
    double phi; ///< in [0, 2 pi)
};

inline Polar to_polar(const FieldPoint& p) {
    const double r = std::hypot(p.eta, p.xi);
    if (r == 0.0) return {0.0, 0.0};
    double phi = std::atan2(p.xi, p.eta);
    if (phi < 0.0) phi += 2.0 * std::numbers::pi;
    if (phi >= 2.0 * std::numbers::pi) phi = 0.0;
    return {r, phi};
}

/// Euclidean distance to the analytic phase boundary {r = 1} U {eta = 0, |xi| >= 1}.
inline double boundary_distance(const FieldPoint& p) {
    const double to_circle = std::abs(std::hypot(p.eta, p.xi) - 1.0);
    const double ax = std::abs(p.xi);
    const double to_rays = ax >= 1.0 ? std::abs(p.eta) : std::hypot(p.eta, ax - 1.0);
    return std::min(to_circle, to_rays);
}

enum class Sector { Even, Odd };

/// Momenta of one parity sector folded onto [0, pi]. `weights[i]` is the
/// multiplicity of `momenta[i]` in the full-zone sum (2 inside (0, pi),
/// 1 at k = 0 or k = pi), so sum_full f(k) == sum_i weights[i] f(momenta[i]).
struct MomentumGrid {
    int two_n = 0;
    Sector sector = Sector::Even;
    std::vector<double> momenta;
    std::vector<double> weights;

    int cells() const { return two_n / 2; }
};

inline MomentumGrid momentum_grid(int two_n, Sector sector = Sector::Even) {
    if (two_n < 4 || two_n % 2 != 0)
        throw InvalidArgument("momentum_grid: two_n must be even and >= 4, got " + std::to_string(two_n));
    const int n = two_n / 2;
    MomentumGrid grid;
    grid.two_n = two_n;
    grid.sector = sector;
    const double tol = 1e-12;
    for (int m = 0; m < n; ++m) {
        const double k = sector == Sector::Even ? 2.0 * std::numbers::pi * (m + 0.5) / n
                                                : 2.0 * std::numbers::pi * m / n;
        if (k > std::numbers::pi + tol) break;
        const bool edge = k < tol || std::abs(k - std::numbers::pi) < tol;
        grid.momenta.push_back(edge && k >= tol ? std::numbers::pi : k);
        grid.weights.push_back(edge ? 1.0 : 2.0);
    }
    return grid;
}

/// sqrt(r^4 - 2 r^2 cos k + 1), written as sqrt((r^2 - cos k)^2 + sin^2 k).
inline double inner_radical(double k, double r) {
    const double s = r * r;
    const double a = s - std::cos(k);
    const double b = std::sin(k);
    return std::hypot(a, b);
}

namespace detail {

// eps_{1,3}^2 / J^2 = A +- 2B with A = 2(eta^2 - xi^2) + 2.
inline double dispersion_base(const FieldPoint& p) {
    return 2.0 * (p.eta * p.eta - p.xi * p.xi) + 2.0;
}

// Principal root; negative real arguments land on +i sqrt(|x|).
inline cplx principal_sqrt(double x) {
    return x >= 0.0 ? cplx{std::sqrt(x), 0.0} : cplx{0.0, std::sqrt(-x)};
}

} // namespace detail

/// Lower branch eps_1^k in units of energy. A + 2B >= 0 everywhere, so this
/// branch is real; the clamp only absorbs rounding at the gap closing point.
inline double eps1(double k, const FieldPoint& p) {
    const double b = inner_radical(k, std::sqrt(p.radius_sq()));
    const double arg = detail::dispersion_base(p) + 2.0 * b;
    return p.J * std::sqrt(arg > 0.0 ? arg : 0.0);
}

/// eps_n^k for branch n in 1..6.
inline cplx dispersion(int n, double k, const FieldPoint& p) {
    const double b = inner_radical(k, std::sqrt(p.radius_sq()));
    const double a = detail::dispersion_base(p);
    switch (n) {
        case 1: return p.J * detail::principal_sqrt(a + 2.0 * b);
        case 2: return -p.J * detail::principal_sqrt(a + 2.0 * b);
        case 3: return p.J * detail::principal_sqrt(a - 2.0 * b);
        case 4: return -p.J * detail::principal_sqrt(a - 2.0 * b);
        case 5:
        case 6: return {0.0, 0.0};
        default: throw InvalidArgument("dispersion: branch must be in 1..6, got " + std::to_string(n));
    }
}

/// (Omega_n^k)^2 of the composite operators, branch n in 1..5 (branch 5 uses
/// eps = 0; branch 6 has the fixed norm sqrt(2)). Energies enter in units of J.
inline cplx normalization_factor_squared(int n, double k, const FieldPoint& p, double tol = 1e-12) {
    if (n < 1 || n > 5) throw InvalidArgument("normalization_factor: branch must be in 1..5");
    const cplx e = dispersion(n, k, p) / p.J;
    const cplx d[4] = {e + cplx{0.0, 2.0 * p.xi}, e - cplx{0.0, 2.0 * p.xi}, e + 2.0 * p.eta, e - 2.0 * p.eta};
    for (const cplx& x : d)
        if (std::abs(x) < tol)
            throw DegenerateDenominator("normalization_factor: resonance denominator vanishes at branch " +
                                        std::to_string(n));
    const double c2 = std::pow(std::cos(0.5 * k), 2);
    const double s2 = std::pow(std::sin(0.5 * k), 2);
    return 2.0 + 4.0 * c2 / (d[0] * d[0]) + 4.0 * c2 / (d[1] * d[1]) + 4.0 * s2 / (d[2] * d[2]) +
           4.0 * s2 / (d[3] * d[3]);
}

inline cplx normalization_factor(int n, double k, const FieldPoint& p, double tol = 1e-12) {
    return std::sqrt(normalization_factor_squared(n, k, p, tol));
}

} // namespace ptising
