#pragma once

// Berry curvature density of the rotated family H(theta_a, theta_b), taken
// through the magnetization identity
//     C = (i/2) sum_{nu = a, b} (dth_nu/deta d/dxi - dth_nu/dxi d/deta) m_nu
// with m_a = 2 d_eta + 2i d_xi and m_b = 2 d_eta - 2i d_xi, so only second
// partials of eps_g are needed.

#include <cmath>
#include <complex>
#include <functional>

#include "response.hpp"

namespace ptising {

/// The four partials of theta_a(eta, xi) and theta_b(eta, xi).
struct ThetaMap {
    using Partial = std::function<double(const FieldPoint&)>;
    Partial d_theta_a_d_eta;
    Partial d_theta_a_d_xi;
    Partial d_theta_b_d_eta;
    Partial d_theta_b_d_xi;

    static ThetaMap constant(double a_eta, double a_xi, double b_eta, double b_xi) {
        auto c = [](double v) { return [v](const FieldPoint&) { return v; }; };
        return {c(a_eta), c(a_xi), c(b_eta), c(b_xi)};
    }
    /// theta_a = theta_b = eta + xi
    static ThetaMap sum() { return constant(1.0, 1.0, 1.0, 1.0); }
    /// theta_a = -theta_b = eta + xi
    static ThetaMap diff() { return constant(1.0, 1.0, -1.0, -1.0); }
    static ThetaMap zero() { return constant(0.0, 0.0, 0.0, 0.0); }
};

inline cplx curvature_density(const FieldPoint& p, const ThetaMap& theta, const EnergyDerivatives& d) {
    const cplx i{0.0, 1.0};
    // dm/dxi and dm/deta for both sublattices
    const cplx dma_dxi = 2.0 * d.d2_mixed + 2.0 * i * d.d2_xi;
    const cplx dma_deta = 2.0 * d.d2_eta + 2.0 * i * d.d2_mixed;
    const cplx dmb_dxi = 2.0 * d.d2_mixed - 2.0 * i * d.d2_xi;
    const cplx dmb_deta = 2.0 * d.d2_eta - 2.0 * i * d.d2_mixed;
    const cplx a = theta.d_theta_a_d_eta(p) * dma_dxi - theta.d_theta_a_d_xi(p) * dma_deta;
    const cplx b = theta.d_theta_b_d_eta(p) * dmb_dxi - theta.d_theta_b_d_xi(p) * dmb_deta;
    return 0.5 * i * (a + b);
}

inline cplx curvature_density(const FieldPoint& p, const ThetaMap& theta, const Mode& mode) {
    return curvature_density(p, theta, energy_derivatives(p, mode));
}

/// C = 2i (d2_mixed - d2_eta)
inline cplx curvature_preset_sum(const EnergyDerivatives& d) {
    return cplx{0.0, 2.0} * (d.d2_mixed - d.d2_eta);
}

/// C = 2 (d2_mixed - d2_xi)
inline cplx curvature_preset_diff(const EnergyDerivatives& d) {
    return 2.0 * (d.d2_mixed - d.d2_xi);
}

inline cplx curvature_preset_sum(const FieldPoint& p, const Mode& mode) {
    return curvature_preset_sum(energy_derivatives(p, mode));
}

inline cplx curvature_preset_diff(const FieldPoint& p, const Mode& mode) {
    return curvature_preset_diff(energy_derivatives(p, mode));
}

/// chi(phi) = sin 2phi - 2 cos^2 phi
inline double chi_prefactor(double phi) {
    const double c = std::cos(phi);
    return std::sin(2.0 * phi) - 2.0 * c * c;
}

} // namespace ptising
