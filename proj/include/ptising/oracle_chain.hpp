#pragma once

// Exact diagonalization of the spin ring. Site j (1-based) is bit j-1 of the
// basis index; bit 0 is spin up (sz = +1) and sx flips the bit.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "dense_matrix.hpp"
#include "eigen_qr.hpp"
#include "model.hpp"
#include "spectrum.hpp"

namespace ptising {

struct ChainOptions {
    // true swaps the sublattices: odd sites get eta + i xi
    bool flip_sublattices = false;
};

namespace detail {

inline void check_chain_size(int two_n) {
    if (two_n < 4 || two_n > 12 || two_n % 2 != 0)
        throw InvalidArgument("chain oracle: two_n must be even in [4, 12], got " + std::to_string(two_n));
}

inline cplx site_field(int site, const FieldPoint& p, const ChainOptions& opt) {
    const bool even = site % 2 == 0;
    const double sign = (even != opt.flip_sublattices) ? 1.0 : -1.0;
    return {p.eta, sign * p.xi};
}

// -J sum_j sz_j sz_{j+1} on a basis state
inline double zz_energy(std::uint32_t s, int two_n, double J) {
    double e = 0.0;
    for (int j = 0; j < two_n; ++j) {
        const int a = (s >> j) & 1, b = (s >> ((j + 1) % two_n)) & 1;
        e += a == b ? -J : J;
    }
    return e;
}

} // namespace detail

/// 2^two_n dimensional matrix of the ring with periodic boundary.
inline DenseComplexMatrix build_chain_hamiltonian(int two_n, const FieldPoint& p, const ChainOptions& opt = {}) {
    detail::check_chain_size(two_n);
    const std::size_t dim = std::size_t{1} << two_n;
    DenseComplexMatrix h(dim);
    for (std::uint32_t s = 0; s < dim; ++s) {
        h(s, s) = detail::zz_energy(s, two_n, p.J);
        for (int j = 0; j < two_n; ++j) h(s ^ (1u << j), s) += -p.J * detail::site_field(j + 1, p, opt);
    }
    return h;
}

struct ParityOperators {
    DenseComplexMatrix parity; ///< prod_l sx_l
    DenseComplexMatrix plus;   ///< (1 + parity) / 2
    DenseComplexMatrix minus;  ///< (1 - parity) / 2
};

inline ParityOperators parity_and_projectors(int two_n) {
    detail::check_chain_size(two_n);
    const std::size_t dim = std::size_t{1} << two_n;
    const std::uint32_t all = static_cast<std::uint32_t>(dim - 1);
    ParityOperators out{DenseComplexMatrix(dim), DenseComplexMatrix(dim), DenseComplexMatrix(dim)};
    for (std::uint32_t s = 0; s < dim; ++s) {
        out.parity(s ^ all, s) = 1.0;
        out.plus(s, s) += 0.5;
        out.plus(s ^ all, s) += 0.5;
        out.minus(s, s) += 0.5;
        out.minus(s ^ all, s) -= 0.5;
    }
    return out;
}

/// Site reflection j -> 2N + 1 - j as a permutation matrix.
inline DenseComplexMatrix reflection_operator(int two_n) {
    detail::check_chain_size(two_n);
    const std::size_t dim = std::size_t{1} << two_n;
    DenseComplexMatrix m(dim);
    for (std::uint32_t s = 0; s < dim; ++s) {
        std::uint32_t t = 0;
        for (int j = 0; j < two_n; ++j)
            if ((s >> j) & 1) t |= 1u << (two_n - 1 - j);
        m(t, s) = 1.0;
    }
    return m;
}

struct PtReport {
    double pt_defect = 0.0; ///< ||P conj(H) P^-1 - H||_max
    double p_defect = 0.0;  ///< ||P H P^-1 - H||_max
    double t_defect = 0.0;  ///< ||conj(H) - H||_max
};

inline PtReport pt_check(int two_n, const FieldPoint& p, const ChainOptions& opt = {}) {
    const auto h = build_chain_hamiltonian(two_n, p, opt);
    const auto refl = reflection_operator(two_n);
    const auto rt = refl.adjoint();
    const auto hc = h.conjugate();
    return {(refl * hc * rt - h).max_abs(), (refl * h * rt - h).max_abs(), (hc - h).max_abs()};
}

/// H restricted to one parity sector, in the basis (|s> +- |~s>)/sqrt 2 with
/// the top bit of s clear. Even fermion parity is parity eigenvalue +1.
inline DenseComplexMatrix sector_hamiltonian(int two_n, const FieldPoint& p, Sector sector,
                                             const ChainOptions& opt = {}) {
    detail::check_chain_size(two_n);
    const std::uint32_t half = 1u << (two_n - 1);
    const std::uint32_t all = (1u << two_n) - 1;
    const double sign = sector == Sector::Even ? 1.0 : -1.0;
    DenseComplexMatrix m(half);
    // column b: H|b> = sum of diagonal and single flips; fold each image onto its representative
    for (std::uint32_t b = 0; b < half; ++b) {
        m(b, b) += detail::zz_energy(b, two_n, p.J);
        for (int j = 0; j < two_n; ++j) {
            const cplx amp = -p.J * detail::site_field(j + 1, p, opt);
            const std::uint32_t t = b ^ (1u << j);
            if (t < half)
                m(t, b) += amp;
            else
                m(t ^ all, b) += sign * amp;
        }
    }
    return m;
}

struct SectorMinimum {
    cplx value;
    bool certified = false;
};

inline SectorMinimum lowest_real_eigenvalue(const DenseComplexMatrix& m) {
    const auto r = eigenvalues_dense(m);
    return {r.values.front(), r.certified.front()};
}

struct SectorCompareReport {
    int two_n = 0;
    FieldPoint point;
    SectorMinimum even;
    SectorMinimum odd;
    cplx free_fermion;   ///< E_g from the closed form
    double abs_error = 0.0; ///< |even - free_fermion|
    bool even_is_lowest = false;
};

inline SectorCompareReport sector_ground_compare(int two_n, const FieldPoint& p, const ChainOptions& opt = {}) {
    SectorCompareReport rep;
    rep.two_n = two_n;
    rep.point = p;
    rep.even = lowest_real_eigenvalue(sector_hamiltonian(two_n, p, Sector::Even, opt));
    rep.odd = lowest_real_eigenvalue(sector_hamiltonian(two_n, p, Sector::Odd, opt));
    rep.free_fermion = ground_energy(two_n, p).e_total;
    rep.abs_error = std::abs(rep.even.value - rep.free_fermion);
    rep.even_is_lowest = rep.even.value.real() <= rep.odd.value.real();
    return rep;
}

} // namespace ptising
