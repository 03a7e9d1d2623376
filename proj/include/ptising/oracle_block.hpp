#pragma once

// The 16-dimensional momentum block h_k = H_k + H_{-k} and its composite
// pair states.
//
// Modes are ordered 0: alpha_k, 1: alpha_{-k}, 2: beta_k, 3: beta_{-k}. The
// annihilator of mode j is Z^{(x) j} (x) a (x) I..., mode 0 the most
// significant bit of the 4-bit basis index. Creation strings are applied right
// to left, last mode first.
//
// The even-parity pair subspace is spanned, in this order, by
//     |0>, a+_k b+_{-k}|0>, b+_k a+_{-k}|0>, a+_k a+_{-k}|0>,
//     b+_k b+_{-k}|0>, a+_k b+_k a+_{-k} b+_{-k}|0>,
// and h_k is closed on it.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dense_matrix.hpp"
#include "eigen_qr.hpp"
#include "model.hpp"
#include "response.hpp"

namespace ptising {

namespace detail {

inline DenseComplexMatrix kron4(const std::array<std::array<cplx, 4>, 4>& f) {
    // f[m] is the 2x2 factor of mode m stored as {m00, m01, m10, m11}
    DenseComplexMatrix out(16);
    for (std::size_t r = 0; r < 16; ++r)
        for (std::size_t c = 0; c < 16; ++c) {
            cplx v{1.0, 0.0};
            for (int m = 0; m < 4; ++m) {
                const int rb = (r >> (3 - m)) & 1, cb = (c >> (3 - m)) & 1;
                v *= f[m][rb * 2 + cb];
                if (v == cplx{}) break;
            }
            out(r, c) = v;
        }
    return out;
}

inline DenseComplexMatrix annihilator(int mode) {
    const std::array<cplx, 4> z{1.0, 0.0, 0.0, -1.0}, id{1.0, 0.0, 0.0, 1.0}, a{0.0, 1.0, 0.0, 0.0};
    std::array<std::array<cplx, 4>, 4> f{};
    for (int m = 0; m < 4; ++m) f[m] = m < mode ? z : (m == mode ? a : id);
    return kron4(f);
}

struct FockOps {
    std::array<DenseComplexMatrix, 4> c;  ///< annihilators
    std::array<DenseComplexMatrix, 4> cd; ///< creators
    CVector vacuum;
};

inline const FockOps& fock_ops() {
    static const FockOps ops = [] {
        FockOps o;
        for (int m = 0; m < 4; ++m) {
            o.c[m] = annihilator(m);
            o.cd[m] = o.c[m].adjoint();
        }
        o.vacuum.assign(16, cplx{});
        o.vacuum[0] = 1.0;
        return o;
    }();
    return ops;
}

// H_k with alpha_k, beta_k, beta_{-k} on modes a, b, bm
inline DenseComplexMatrix half_block(double k, const FieldPoint& p, int a, int b, int bm) {
    const auto& o = fock_ops();
    const cplx eik = std::exp(cplx{0.0, k});
    DenseComplexMatrix t = (eik + 1.0) * (o.cd[a] * o.c[b]) + (eik - 1.0) * (o.cd[a] * o.cd[bm]);
    DenseComplexMatrix h = t + t.adjoint();
    h = h + cplx{2.0 * p.eta, 0.0} * DenseComplexMatrix::identity(16);
    h = h - cplx{2.0 * p.eta, 2.0 * p.xi} * (o.cd[a] * o.c[a]);
    h = h - cplx{2.0 * p.eta, -2.0 * p.xi} * (o.cd[b] * o.c[b]);
    return h;
}

} // namespace detail

/// h_k = H_k + H_{-k}, dimensionless (the chain is -J sum_{0<k<pi} h_k).
inline DenseComplexMatrix build_hk_block(double k, const FieldPoint& p) {
    return detail::half_block(k, p, 0, 2, 3) + detail::half_block(-k, p, 1, 3, 2);
}

/// Columns are the six pair-subspace basis vectors in Fock space.
inline std::array<CVector, 6> pair_basis() {
    const auto& o = detail::fock_ops();
    auto create = [&](std::initializer_list<int> modes) {
        CVector v = o.vacuum;
        std::vector<int> ms(modes);
        for (auto it = ms.rbegin(); it != ms.rend(); ++it) v = o.cd[*it].apply(v);
        return v;
    };
    return {o.vacuum, create({0, 3}), create({2, 1}), create({0, 1}), create({2, 3}), create({0, 2, 1, 3})};
}

inline DenseComplexMatrix restrict_to_pairs(const DenseComplexMatrix& h) {
    const auto b = pair_basis();
    DenseComplexMatrix out(6);
    for (std::size_t j = 0; j < 6; ++j) {
        const CVector hb = h.apply(b[j]);
        for (std::size_t i = 0; i < 6; ++i) {
            cplx s{};
            for (std::size_t l = 0; l < 16; ++l) s += std::conj(b[i][l]) * hb[l];
            out(i, j) = s;
        }
    }
    return out;
}

inline CVector embed_pairs(std::span<const cplx> v6) {
    const auto b = pair_basis();
    CVector out(16);
    for (std::size_t j = 0; j < 6; ++j)
        for (std::size_t l = 0; l < 16; ++l) out[l] += v6[j] * b[j][l];
    return out;
}

/// Block eigenvalue 2 eps_n / J of branch n.
inline cplx block_eigenvalue(int n, double k, const FieldPoint& p) {
    return 2.0 * dispersion(n, k, p) / p.J;
}

/// Unnormalized pair-subspace vector of branch n in closed form, for
/// n = 1..5 with E = eps_n / J (0 for n = 5):
///     [-2i s/(E - 2eta), e^{ik/2}, e^{-ik/2}, 2c/(E + 2i xi), 2c/(E - 2i xi), 2i s/(E + 2eta)]
/// with c = cos(k/2), s = sin(k/2); n = 6 is e^{ik/2}|ab> - e^{-ik/2}|ba>.
inline std::array<cplx, 6> composite_pair_closed_form(int n, double k, const FieldPoint& p, double tol = 1e-12) {
    const cplx i{0.0, 1.0};
    const cplx ph = std::exp(cplx{0.0, 0.5 * k});
    if (n == 6) return {0.0, ph, -std::conj(ph), 0.0, 0.0, 0.0};
    if (n < 1 || n > 5) throw InvalidArgument("composite state: branch must be in 1..6");
    const cplx e = dispersion(n, k, p) / p.J;
    const cplx d[4] = {e - 2.0 * p.eta, e + 2.0 * i * p.xi, e - 2.0 * i * p.xi, e + 2.0 * p.eta};
    for (const cplx& x : d)
        if (std::abs(x) < tol)
            throw DegenerateDenominator("composite state: resonance denominator vanishes at branch " + std::to_string(n));
    const double c = std::cos(0.5 * k), s = std::sin(0.5 * k);
    return {-2.0 * i * s / d[0], ph, std::conj(ph), 2.0 * c / d[1], 2.0 * c / d[2], 2.0 * i * s / d[3]};
}

inline CVector composite_state_closed_form(int n, double k, const FieldPoint& p) {
    return embed_pairs(composite_pair_closed_form(n, k, p));
}

/// Right vector of branch n in Fock space with the a+_k b+_{-k} coefficient
/// pinned to e^{ik/2}. Branches 1..4 come from inverse iteration on the pair
/// block at 2 eps_n; 5 and 6 share eigenvalue 0 and use the closed forms.
inline CVector composite_state(int n, double k, const FieldPoint& p) {
    if (n == 5 || n == 6) return composite_state_closed_form(n, k, p);
    if (n < 1 || n > 6) throw InvalidArgument("composite state: branch must be in 1..6");
    const auto h6 = restrict_to_pairs(build_hk_block(k, p));
    CVector v = inverse_iteration(h6, block_eigenvalue(n, k, p), 1e-9);
    if (std::abs(v[1]) < 1e-12) throw DegenerateDenominator("composite state: gauge component vanishes");
    const cplx g = std::exp(cplx{0.0, 0.5 * k}) / v[1];
    for (cplx& z : v) z *= g;
    return embed_pairs(v);
}

/// Bra components of the left partner by the conjugation rule: the complex
/// conjugate of the right vector built at xi -> -xi. Pairing with the right
/// vector gives Omega^2.
inline CVector left_state_conjugation(int n, double k, const FieldPoint& p) {
    CVector v = composite_state(n, k, p.with_xi(-p.xi));
    for (cplx& z : v) z = std::conj(z);
    return v;
}

/// Bra components l with l h = 2 eps_n l, from inverse iteration on h^T.
inline CVector left_eigenvector(int n, double k, const FieldPoint& p) {
    if (n == 5 || n == 6) return left_state_conjugation(n, k, p);
    if (n < 1 || n > 6) throw InvalidArgument("left state: branch must be in 1..6");
    const auto h6 = restrict_to_pairs(build_hk_block(k, p));
    DenseComplexMatrix ht(6);
    for (std::size_t r = 0; r < 6; ++r)
        for (std::size_t c = 0; c < 6; ++c) ht(r, c) = h6(c, r);
    const CVector l6 = inverse_iteration(ht, block_eigenvalue(n, k, p), 1e-9);
    // bra in Fock space: l_F = sum_j l6_j conj(basis_j)
    const auto b = pair_basis();
    CVector out(16);
    for (std::size_t j = 0; j < 6; ++j)
        for (std::size_t l = 0; l < 16; ++l) out[l] += l6[j] * std::conj(b[j][l]);
    return out;
}

enum class LeftRule { Conjugation, Numeric };

struct BiorthogonalPair {
    CVector left;  ///< bra components
    CVector right;
};

/// Right and left vectors of branch n scaled so that <L|R> = 1, split evenly
/// between the two. Throws when the pairing vanishes.
inline BiorthogonalPair biorthogonal_pair(int n, double k, const FieldPoint& p, LeftRule rule = LeftRule::Conjugation) {
    BiorthogonalPair out{rule == LeftRule::Conjugation ? left_state_conjugation(n, k, p) : left_eigenvector(n, k, p),
                         composite_state(n, k, p)};
    const cplx norm = pair(out.left, out.right);
    const double scale = norm2(out.left) * norm2(out.right);
    if (std::abs(norm) < 1e-10 * scale)
        throw SingularInput("biorthogonal pair: left and right vectors are orthogonal for branch " + std::to_string(n));
    const cplx s = std::sqrt(norm);
    for (cplx& z : out.left) z /= s;
    for (cplx& z : out.right) z /= s;
    return out;
}

/// M[m][n] = <0|Lambda_m Lambdabar_n|0> for m, n in 1..6.
inline std::array<std::array<cplx, 6>, 6> biorthogonality_matrix(double k, const FieldPoint& p,
                                                                 LeftRule rule = LeftRule::Conjugation) {
    std::array<BiorthogonalPair, 6> v;
    for (int n = 1; n <= 6; ++n) v[n - 1] = biorthogonal_pair(n, k, p, rule);
    std::array<std::array<cplx, 6>, 6> m{};
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) m[a][b] = pair(v[a].left, v[b].right);
    return m;
}

/// |<d_xi L|d_eta R> - <d_eta L|d_xi R>| for the branch-1 pair by central
/// differences, gauge: a+_k b+_{-k} coefficient of the bare right vector real
/// positive, L the conjugation partner, R rescaled so <L|R> = 1.
inline double block_ground_overlap_check(double k, const FieldPoint& p, double h) {
    if (!(h > 0.0)) throw InvalidArgument("overlap check: step must be positive");
    struct LR {
        CVector l, r;
    };
    auto at = [&](double eta, double xi) {
        const FieldPoint q{eta, xi, p.J};
        const cplx unphase = std::exp(cplx{0.0, -0.5 * k});
        CVector r = composite_state(1, k, q), l = left_state_conjugation(1, k, q);
        for (cplx& z : r) z *= unphase;
        for (cplx& z : l) z *= std::conj(unphase);
        const cplx norm = pair(l, r);
        if (std::abs(norm) < 1e-12) throw SingularInput("overlap check: biorthogonal norm vanishes");
        for (cplx& z : r) z /= norm;
        return LR{l, r};
    };
    auto diff = [&](const LR& a, const LR& b, LR& out) {
        out.l.resize(16);
        out.r.resize(16);
        for (std::size_t i = 0; i < 16; ++i) {
            out.l[i] = (a.l[i] - b.l[i]) / (2.0 * h);
            out.r[i] = (a.r[i] - b.r[i]) / (2.0 * h);
        }
    };
    LR de, dx;
    diff(at(p.eta + h, p.xi), at(p.eta - h, p.xi), de);
    diff(at(p.eta, p.xi + h), at(p.eta, p.xi - h), dx);
    return std::abs(pair(dx.l, de.r) - pair(de.l, dx.r));
}

/// Unitary part U of the block PT operator (PT = U K), from the mode map
///     a+_k -> b+_{-k}, b+_k -> e^{-ik} a+_{-k}, a+_{-k} -> b+_k, b+_{-k} -> e^{ik} a+_k.
inline DenseComplexMatrix pt_block_operator(double k) {
    const auto& o = detail::fock_ops();
    const cplx em = std::exp(cplx{0.0, -k}), ep = std::exp(cplx{0.0, k});
    const std::array<DenseComplexMatrix, 4> img{o.cd[3], o.cd[2], em * o.cd[1], ep * o.cd[0]};
    DenseComplexMatrix u(16);
    for (std::size_t idx = 0; idx < 16; ++idx) {
        CVector v = o.vacuum, w = o.vacuum;
        for (int m = 3; m >= 0; --m)
            if ((idx >> (3 - m)) & 1) {
                v = o.cd[m].apply(v);
                w = img[m].apply(w);
            }
        for (std::size_t r = 0; r < 16; ++r)
            for (std::size_t c = 0; c < 16; ++c) u(r, c) += w[r] * std::conj(v[c]);
    }
    return u;
}

/// ||U conj(h) U^dagger - h||_F
inline double block_pt_defect(double k, const FieldPoint& p) {
    const auto h = build_hk_block(k, p);
    const auto u = pt_block_operator(k);
    return (u * h.conjugate() * u.adjoint() - h).frobenius();
}

/// |<L_1| PT |R_1>| with <L_1|R_1> = 1.
inline double ground_pt_overlap(double k, const FieldPoint& p) {
    const auto bp = biorthogonal_pair(1, k, p);
    const auto u = pt_block_operator(k);
    CVector rc = bp.right;
    for (cplx& z : rc) z = std::conj(z);
    return std::abs(pair(bp.left, u.apply(rc)));
}

/// Sublattice magnetizations (1/N) <G~| sum_{j in a,b} sx_j |G> of the finite
/// ring from the block ground vectors, using sx = 1 - 2 n. Needs N = two_n/2 even.
inline std::pair<cplx, cplx> block_magnetizations(int two_n, const FieldPoint& p) {
    const auto grid = momentum_grid(two_n, Sector::Even);
    if ((two_n / 2) % 2 != 0) throw InvalidArgument("block magnetizations: N = two_n/2 must be even");
    const auto& o = detail::fock_ops();
    const DenseComplexMatrix na = o.cd[0] * o.c[0] + o.cd[1] * o.c[1];
    const DenseComplexMatrix nb = o.cd[2] * o.c[2] + o.cd[3] * o.c[3];
    CompensatedSum<cplx> sa, sb;
    for (double k : grid.momenta) {
        const auto bp = biorthogonal_pair(1, k, p);
        sa.add(2.0 - 2.0 * pair(bp.left, na.apply(bp.right)));
        sb.add(2.0 - 2.0 * pair(bp.left, nb.apply(bp.right)));
    }
    const double n = two_n / 2;
    return {sa.value() / n, sb.value() / n};
}

/// Even-sector spectrum of the ring rebuilt from the blocks: each block holds
/// quasiparticle energies (eps_1 +- eps_3)/2, each twice, and an eigenvalue is
/// -J sum_i s_i q_i over all blocks with an even number of s_i = -1.
inline std::vector<cplx> free_fermion_sector_spectrum(int two_n, const FieldPoint& p) {
    const auto grid = momentum_grid(two_n, Sector::Even);
    if ((two_n / 2) % 2 != 0) throw InvalidArgument("free-fermion spectrum: N = two_n/2 must be even");
    if (two_n > 16) throw InvalidArgument("free-fermion spectrum: two_n above 16");
    std::vector<cplx> q;
    for (double k : grid.momenta) {
        const cplx e1 = dispersion(1, k, p), e3 = dispersion(3, k, p);
        for (int rep = 0; rep < 2; ++rep) {
            q.push_back(0.5 * (e1 + e3));
            q.push_back(0.5 * (e1 - e3));
        }
    }
    const std::size_t m = q.size();
    std::vector<cplx> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        if (std::popcount(mask) % 2 != 0) continue;
        cplx s{};
        for (std::size_t i = 0; i < m; ++i) s += ((mask >> i) & 1) ? -q[i] : q[i];
        out.push_back(-s);
    }
    std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    });
    return out;
}

} // namespace ptising
