#pragma once

// First and second field derivatives of the ground-state energy density.
//
// Per momentum, with s = r^2, c = cos k, B = sqrt((s - c)^2 + sin^2 k),
// u = (s - c) / B and w = sin^2 k / B^3, the square Q = eps_1^2 / J^2 obeys
//     Q_eta = 4 eta (1 + u),           Q_xi = 4 xi (u - 1),
//     Q_eta,eta = 4 + 4u + 8 eta^2 w,  Q_xi,xi = -4 + 4u + 8 xi^2 w,
//     Q_eta,xi = 8 eta xi w,
// and eps_xy = J (Q_xy / 2 - e_x e_y) / e for e = sqrt(Q). The log divergence
// at criticality comes entirely from the w terms near k = 0.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>

#include "model.hpp"
#include "spectrum.hpp"

namespace ptising {

/// eps_1^k and its first and second field derivatives at one momentum.
struct ModeDerivatives {
    double e = 0.0;
    double d_eta = 0.0;
    double d_xi = 0.0;
    double d2_eta = 0.0;
    double d2_xi = 0.0;
    double d2_mixed = 0.0;
};

inline ModeDerivatives eps1_derivatives(double k, const FieldPoint& p) {
    const double eta = p.eta, xi = p.xi;
    const double s = p.radius_sq();
    const double c = std::cos(k), sn = std::sin(k);
    const double b = std::hypot(s - c, sn);
    const double q = detail::dispersion_base(p) + 2.0 * b;
    const double e = std::sqrt(q > 0.0 ? q : 0.0);
    const double u = (s - c) / b;
    const double w = sn * sn / (b * b * b);
    const double ex = 2.0 * eta * (1.0 + u) / e;
    const double ey = 2.0 * xi * (u - 1.0) / e;
    const double qxx = 4.0 + 4.0 * u + 8.0 * eta * eta * w;
    const double qyy = -4.0 + 4.0 * u + 8.0 * xi * xi * w;
    const double qxy = 8.0 * eta * xi * w;
    ModeDerivatives d;
    d.e = p.J * e;
    d.d_eta = p.J * ex;
    d.d_xi = p.J * ey;
    d.d2_eta = p.J * (0.5 * qxx - ex * ex) / e;
    d.d2_xi = p.J * (0.5 * qyy - ey * ey) / e;
    d.d2_mixed = p.J * (0.5 * qxy - ex * ey) / e;
    return d;
}

/// eps_g together with all first and second partials.
struct EnergyDerivatives {
    cplx eps_g;
    cplx d_eta;
    cplx d_xi;
    cplx d2_eta;
    cplx d2_xi;
    cplx d2_mixed;
    double min_gap = 0.0; ///< min over samples of eps_1^k

    cplx laplacian() const { return d2_eta + d2_xi; }
};

inline EnergyDerivatives energy_derivatives(const FieldPoint& p, std::span<const KSample> ks,
                                            double gap_tol = 1e-9) {
    CompensatedSum<double> e, dx, dy, dxx, dyy, dxy;
    double min_gap = std::numeric_limits<double>::infinity();
    for (const auto& s : ks) {
        const double e1 = eps1(s.k, p);
        min_gap = std::min(min_gap, e1);
        if (e1 < gap_tol * p.J) continue;
        const ModeDerivatives d = eps1_derivatives(s.k, p);
        e.add(-s.weight * d.e);
        dx.add(-s.weight * d.d_eta);
        dy.add(-s.weight * d.d_xi);
        dxx.add(-s.weight * d.d2_eta);
        dyy.add(-s.weight * d.d2_xi);
        dxy.add(-s.weight * d.d2_mixed);
    }
    if (min_gap < gap_tol * p.J)
        throw GaplessError("gap closes on the sampled momenta (min eps_1 = " + std::to_string(min_gap) +
                           "); field derivatives diverge");
    return {e.value(), dx.value(), dy.value(), dxx.value(), dyy.value(), dxy.value(), min_gap};
}

inline EnergyDerivatives energy_derivatives(const FieldPoint& p, const Mode& mode) {
    const auto ks = samples(mode);
    return energy_derivatives(p, ks);
}

inline std::pair<cplx, cplx> gradient_eps_g(const FieldPoint& p, const Mode& mode) {
    const auto d = energy_derivatives(p, mode);
    return {d.d_eta, d.d_xi};
}

inline cplx laplacian_eps_g(const FieldPoint& p, const Mode& mode) {
    return energy_derivatives(p, mode).laplacian();
}

/// Magnetizations from the gradient, with the printed sign convention
/// m_a = 2 d_eta + 2i d_xi, m_b = 2 d_eta - 2i d_xi. The biorthogonal
/// sublattice expectation computed in the oracle equals -m_b / 2.
inline std::pair<cplx, cplx> magnetizations(const EnergyDerivatives& d) {
    const cplx i{0.0, 1.0};
    return {2.0 * d.d_eta + 2.0 * i * d.d_xi, 2.0 * d.d_eta - 2.0 * i * d.d_xi};
}

inline std::pair<cplx, cplx> magnetizations(const FieldPoint& p, const Mode& mode) {
    return magnetizations(energy_derivatives(p, mode));
}

/// Default finite-difference step: 1e-3 scaled by max(1, |eta|, |xi|).
inline double default_fd_step(const FieldPoint& p) {
    return 1e-3 * std::max({1.0, std::abs(p.eta), std::abs(p.xi)});
}

/// Gradient by 5-point central differences of eps_g.
inline std::pair<cplx, cplx> gradient_fd(const FieldPoint& p, double h, const Mode& mode) {
    if (!(h > 0.0)) throw InvalidArgument("gradient_fd: step must be positive");
    const auto ks = samples(mode);
    auto f = [&](double eta, double xi) {
        CompensatedSum<double> acc;
        const FieldPoint q{eta, xi, p.J};
        for (const auto& s : ks) acc.add(-s.weight * eps1(s.k, q));
        return acc.value();
    };
    auto d1 = [&](auto&& g) { return (-g(2.0 * h) + 8.0 * g(h) - 8.0 * g(-h) + g(-2.0 * h)) / (12.0 * h); };
    const double gx = d1([&](double t) { return f(p.eta + t, p.xi); });
    const double gy = d1([&](double t) { return f(p.eta, p.xi + t); });
    return {cplx{gx, 0.0}, cplx{gy, 0.0}};
}

/// Laplacian by 5-point central second differences along eta and along xi.
inline cplx laplacian_fd(const FieldPoint& p, double h, const Mode& mode) {
    if (!(h > 0.0)) throw InvalidArgument("laplacian_fd: step must be positive");
    const auto ks = samples(mode);
    auto f = [&](double eta, double xi) {
        CompensatedSum<double> acc;
        const FieldPoint q{eta, xi, p.J};
        for (const auto& s : ks) acc.add(-s.weight * eps1(s.k, q));
        return acc.value();
    };
    const double f0 = f(p.eta, p.xi);
    auto d2 = [&](auto&& g) { return (-g(2.0 * h) + 16.0 * g(h) - 30.0 * f0 + 16.0 * g(-h) - g(-2.0 * h)) / (12.0 * h * h); };
    const double gxx = d2([&](double t) { return f(p.eta + t, p.xi); });
    const double gyy = d2([&](double t) { return f(p.eta, p.xi + t); });
    return {gxx + gyy, 0.0};
}

/// Critical integrand sqrt(2) r sin^2 k / (pi eps_1^k B^3), energies in units of J.
inline double integrand_F(double k, const FieldPoint& p) {
    const double r = std::sqrt(p.radius_sq());
    const double b = inner_radical(k, r);
    const double e = eps1(k, p) / p.J;
    if (b == 0.0 || e == 0.0) throw SingularInput("integrand_F: singular at r = 1, k = 0");
    const double sn = std::sin(k);
    return std::numbers::sqrt2 * r * sn * sn / (std::numbers::pi * e * b * b * b);
}

/// Log-divergence prediction near the circle: -(sqrt 2 / (pi |cos phi|)) ln|r - 1|.
inline double asymptotic_laplacian_circle(double r, double phi) {
    const double d = std::abs(r - 1.0);
    if (!(d > 0.0) || !(d < 0.1)) throw InvalidArgument("asymptotic_laplacian_circle: need 0 < |r - 1| < 0.1");
    const double c = std::abs(std::cos(phi));
    if (c < 1e-12) throw SingularInput("asymptotic_laplacian_circle: cos(phi) = 0");
    return -(std::numbers::sqrt2 / (std::numbers::pi * c)) * std::log(d);
}

/// Log-divergence prediction on the imaginary axis: -(sqrt 2 / pi) ln|eta|.
inline double asymptotic_laplacian_axis(double eta) {
    const double a = std::abs(eta);
    if (!(a > 0.0) || !(a < 0.1)) throw InvalidArgument("asymptotic_laplacian_axis: need 0 < |eta| < 0.1");
    return -(std::numbers::sqrt2 / std::numbers::pi) * std::log(a);
}

/// One scan-grid evaluation.
struct ResponseRecord {
    FieldPoint point;
    cplx eps_g;
    cplx d_eta;
    cplx d_xi;
    cplx d2_eta;
    cplx d2_xi;
    cplx d2_mixed;
    cplx laplacian;
    cplx m_a;
    cplx m_b;
    double boundary_distance = 0.0;
};

inline ResponseRecord make_response_record(const FieldPoint& p, const EnergyDerivatives& d) {
    const auto [ma, mb] = magnetizations(d);
    return {p, d.eps_g, d.d_eta, d.d_xi, d.d2_eta, d.d2_xi, d.d2_mixed, d.laplacian(), ma, mb, boundary_distance(p)};
}

inline ResponseRecord response(const FieldPoint& p, const Mode& mode) {
    return make_response_record(p, energy_derivatives(p, mode));
}

} // namespace ptising
