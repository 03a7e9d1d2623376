#pragma once

// Ground-state energy and energy density, finite chain or thermodynamic limit.
//
// Both modes reduce to a weighted momentum sample set {(k_i, w_i)} with
//     eps_g = -sum_i w_i eps_1(k_i),
// w_i = multiplicity / 2N on a finite chain and w_i = (Gauss weight) / 2 pi in
// the limit, so every derivative shares the same summation path.

#include <cmath>
#include <numbers>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "model.hpp"
#include "numeric.hpp"

namespace ptising {

/// Composite Gauss-Legendre rule on (0, pi): dyadic panels
/// [pi 2^-(j+1), pi 2^-j], j < dyadic_levels, plus [0, pi 2^-dyadic_levels],
/// each carrying `order` nodes. Resolves the k -> 0 structure that sharpens
/// near the phase boundary.
struct QuadratureOptions {
    int order = 32;
    int dyadic_levels = 48;

    int total_nodes() const { return order * (dyadic_levels + 1); }
};

struct FiniteChain {
    int two_n;
};

struct ThermodynamicLimit {
    QuadratureOptions quadrature{};
};

using Mode = std::variant<FiniteChain, ThermodynamicLimit>;

inline std::string describe(const Mode& mode) {
    if (auto f = std::get_if<FiniteChain>(&mode)) return "finite(two_n=" + std::to_string(f->two_n) + ")";
    return "thermodynamic";
}

struct KSample {
    double k;
    double weight;
};

inline std::vector<KSample> thermodynamic_samples(const QuadratureOptions& q) {
    if (q.order < 8) throw InvalidArgument("quadrature order must be >= 8");
    if (q.dyadic_levels < 0 || q.dyadic_levels > 60) throw InvalidArgument("dyadic_levels must be in [0, 60]");
    const auto unit = gauss_legendre(q.order, 0.0, 1.0);
    std::vector<KSample> out;
    out.reserve(static_cast<std::size_t>(q.total_nodes()));
    const double inv2pi = 0.5 / std::numbers::pi;
    auto push_panel = [&](double a, double b) {
        for (const auto& node : unit) out.push_back({a + (b - a) * node.x, (b - a) * node.w * inv2pi});
    };
    // ascending k
    push_panel(0.0, std::ldexp(std::numbers::pi, -q.dyadic_levels));
    for (int j = q.dyadic_levels - 1; j >= 0; --j)
        push_panel(std::ldexp(std::numbers::pi, -(j + 1)), std::ldexp(std::numbers::pi, -j));
    return out;
}

inline std::vector<KSample> finite_samples(int two_n) {
    const auto grid = momentum_grid(two_n, Sector::Even);
    std::vector<KSample> out;
    out.reserve(grid.momenta.size());
    for (std::size_t i = 0; i < grid.momenta.size(); ++i)
        out.push_back({grid.momenta[i], grid.weights[i] / two_n});
    return out;
}

inline std::vector<KSample> samples(const Mode& mode) {
    return std::visit(
        [](const auto& m) -> std::vector<KSample> {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, FiniteChain>)
                return finite_samples(m.two_n);
            else
                return thermodynamic_samples(m.quadrature);
        },
        mode);
}

struct EnergyResult {
    cplx e_total;  ///< E_g of the finite ring
    cplx eps_g;    ///< E_g / 2N
    Mode mode;
};

inline cplx energy_density(const FieldPoint& p, const Mode& mode) {
    CompensatedSum<double> acc;
    for (const auto& s : samples(mode)) acc.add(-s.weight * eps1(s.k, p));
    return {acc.value(), 0.0};
}

/// E_g = -sum over the full antiperiodic zone of eps_1^k on a 2N-site ring.
inline EnergyResult ground_energy(int two_n, const FieldPoint& p) {
    const cplx eps_g = energy_density(p, FiniteChain{two_n});
    return {eps_g * static_cast<double>(two_n), eps_g, FiniteChain{two_n}};
}

inline cplx energy_density_limit(const FieldPoint& p, const QuadratureOptions& q = {}) {
    return energy_density(p, ThermodynamicLimit{q});
}

/// eps_1 at k = 0 in closed form; kinks at r = 1 and, for r > 1, at eta = 0.
inline double eps1_at_zero(const FieldPoint& p) {
    const double s = p.radius_sq();
    const double arg = 2.0 * (p.eta * p.eta - p.xi * p.xi) + 2.0 * std::abs(s - 1.0) + 2.0;
    return p.J * std::sqrt(arg > 0.0 ? arg : 0.0);
}

} // namespace ptising
