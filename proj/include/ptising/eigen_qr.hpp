#pragma once

// Eigenvalues of a general dense complex matrix:
// balancing -> Householder Hessenberg reduction -> single-shift complex QR
// with Wilkinson shifts and deflation. Eigenvectors are not formed; each
// eigenvalue is certified afterwards by one inverse-iteration step on the
// Hessenberg matrix, which bounds the backward error.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "dense_matrix.hpp"

namespace ptising {

struct EigenOptions {
    int max_iterations_per_eigenvalue = 60;
    bool certify = true;
    double certificate_tol = 1e-8;
};

struct EigenResult {
    std::vector<cplx> values;     ///< sorted by (Re, Im) ascending
    std::vector<double> residual; ///< backward-error proxy per value, relative to ||H||_F
    std::vector<bool> certified;

    bool all_certified() const {
        return std::all_of(certified.begin(), certified.end(), [](bool b) { return b; });
    }
};

namespace detail {

// Diagonal similarity scaling by powers of two (no permutations).
inline void balance(DenseComplexMatrix& a) {
    const std::size_t n = a.dim();
    const double radix = 2.0;
    bool converged = false;
    while (!converged) {
        converged = true;
        for (std::size_t i = 0; i < n; ++i) {
            double c = 0.0, r = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / radix, f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= radix;
                c *= radix * radix;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= radix * radix;
            }
            if ((c + r) / f < 0.95 * s) {
                converged = false;
                for (std::size_t j = 0; j < n; ++j) a(i, j) /= f;
                for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
            }
        }
    }
}

inline void hessenberg(DenseComplexMatrix& a) {
    const std::size_t n = a.dim();
    if (n < 3) return;
    CVector v(n);
    for (std::size_t col = 0; col + 2 < n; ++col) {
        double alpha_norm = 0.0;
        for (std::size_t i = col + 1; i < n; ++i) alpha_norm += std::norm(a(i, col));
        alpha_norm = std::sqrt(alpha_norm);
        if (alpha_norm == 0.0) continue;
        const cplx x0 = a(col + 1, col);
        const cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx{1.0, 0.0};
        // v = x + phase * ||x|| e_1, reflector H = I - 2 v v^H / (v^H v)
        std::fill(v.begin(), v.end(), cplx{});
        for (std::size_t i = col + 1; i < n; ++i) v[i] = a(i, col);
        v[col + 1] += phase * alpha_norm;
        double vnorm2 = 0.0;
        for (std::size_t i = col + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
        if (vnorm2 == 0.0) continue;
        const double beta = 2.0 / vnorm2;
        // left: A <- H A on rows col+1..n-1
        for (std::size_t j = col; j < n; ++j) {
            cplx s{};
            for (std::size_t i = col + 1; i < n; ++i) s += std::conj(v[i]) * a(i, j);
            s *= beta;
            for (std::size_t i = col + 1; i < n; ++i) a(i, j) -= v[i] * s;
        }
        // right: A <- A H on columns col+1..n-1
        for (std::size_t i = 0; i < n; ++i) {
            cplx s{};
            for (std::size_t j = col + 1; j < n; ++j) s += a(i, j) * v[j];
            s *= beta;
            for (std::size_t j = col + 1; j < n; ++j) a(i, j) -= s * std::conj(v[j]);
        }
        for (std::size_t i = col + 2; i < n; ++i) a(i, col) = cplx{};
    }
}

struct Givens {
    double c;
    cplx s;
};

// G = [[c, s], [-conj(s), c]] maps (a, b) to (r, 0).
inline Givens make_givens(cplx a, cplx b) {
    if (b == cplx{}) return {1.0, cplx{}};
    if (a == cplx{}) return {0.0, std::conj(b) / std::abs(b)};
    const double na = std::abs(a);
    const double nrm = std::hypot(na, std::abs(b));
    return {na / nrm, (a / na) * std::conj(b) / nrm};
}

// Eigenvalue of [[a, b], [c, d]] closer to d.
inline cplx wilkinson_shift(cplx a, cplx b, cplx c, cplx d) {
    const cplx tr_half = 0.5 * (a + d);
    const cplx disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
    const cplx l1 = tr_half + disc, l2 = tr_half - disc;
    return std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
}

// In-place QR iteration on an upper Hessenberg matrix; only the active block
// is updated since eigenvectors are not accumulated.
inline std::vector<cplx> hessenberg_qr(DenseComplexMatrix h, const EigenOptions& opt) {
    const std::size_t n = h.dim();
    std::vector<cplx> eig(n);
    if (n == 0) return eig;
    const double eps = std::numeric_limits<double>::epsilon();
    const double hnorm = std::max(h.frobenius(), std::numeric_limits<double>::min());
    std::vector<Givens> rot(n);
    std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(n) - 1;
    int iter = 0;
    while (hi >= 0) {
        std::ptrdiff_t lo = hi;
        while (lo > 0) {
            const double sub = std::abs(h(lo, lo - 1));
            double ref = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
            if (ref == 0.0) ref = hnorm;
            if (sub <= eps * ref || sub <= eps * eps * hnorm) {
                h(lo, lo - 1) = cplx{};
                break;
            }
            --lo;
        }
        if (lo == hi) {
            eig[hi] = h(hi, hi);
            --hi;
            iter = 0;
            continue;
        }
        if (++iter > opt.max_iterations_per_eigenvalue)
            throw ConvergenceError("hessenberg_qr: no convergence, " + std::to_string(hi + 1) +
                                   " eigenvalues uncertified");
        cplx mu;
        if (iter % 11 == 0) {
            // exceptional shift breaks rare cycles
            mu = h(hi, hi) + cplx{std::abs(h(hi, hi - 1).real()) + (hi >= 2 ? std::abs(h(hi - 1, hi - 2).real()) : 0.0),
                                  0.0};
        } else {
            mu = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
        }
        for (std::ptrdiff_t i = lo; i <= hi; ++i) h(i, i) -= mu;
        for (std::ptrdiff_t i = lo; i < hi; ++i) {
            const Givens g = make_givens(h(i, i), h(i + 1, i));
            rot[i] = g;
            for (std::ptrdiff_t j = i; j <= hi; ++j) {
                const cplx x = h(i, j), y = h(i + 1, j);
                h(i, j) = g.c * x + g.s * y;
                h(i + 1, j) = -std::conj(g.s) * x + g.c * y;
            }
        }
        for (std::ptrdiff_t i = lo; i < hi; ++i) {
            const Givens g = rot[i];
            const std::ptrdiff_t last = std::min(i + 1, hi);
            for (std::ptrdiff_t r = lo; r <= last; ++r) {
                const cplx x = h(r, i), y = h(r, i + 1);
                h(r, i) = x * g.c + y * std::conj(g.s);
                h(r, i + 1) = -x * g.s + y * g.c;
            }
        }
        for (std::ptrdiff_t i = lo; i <= hi; ++i) h(i, i) += mu;
    }
    return eig;
}

// Solve (H - lambda) x = b for upper Hessenberg H with adjacent-row pivoting;
// returns ||b|| / ||x||, the norm of the smallest perturbation E with
// (H + E - lambda) x = 0 along this direction.
inline double hessenberg_backward_error(const DenseComplexMatrix& h, cplx lambda) {
    const std::size_t n = h.dim();
    DenseComplexMatrix u = h;
    for (std::size_t i = 0; i < n; ++i) u(i, i) -= lambda;
    const double floor = std::numeric_limits<double>::epsilon() * std::max(h.frobenius(), 1e-300);
    CVector b(n, cplx{1.0, 0.0});
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(u(i + 1, i)) > std::abs(u(i, i))) {
            for (std::size_t j = i; j < n; ++j) std::swap(u(i, j), u(i + 1, j));
            std::swap(b[i], b[i + 1]);
        }
        if (std::abs(u(i, i)) < floor) u(i, i) = floor;
        const cplx f = u(i + 1, i) / u(i, i);
        if (f == cplx{}) continue;
        for (std::size_t j = i; j < n; ++j) u(i + 1, j) -= f * u(i, j);
        b[i + 1] -= f * b[i];
    }
    if (std::abs(u(n - 1, n - 1)) < floor) u(n - 1, n - 1) = floor;
    CVector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        cplx s = b[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= u(ii, j) * x[j];
        x[ii] = s / u(ii, ii);
    }
    const double nx = norm2(x);
    if (!std::isfinite(nx)) return 0.0;
    return std::sqrt(static_cast<double>(n)) / nx;
}

} // namespace detail

inline EigenResult eigenvalues_dense(const DenseComplexMatrix& m, const EigenOptions& opt = {}) {
    if (m.dim() > 4096) throw InvalidArgument("eigenvalues_dense: dimension above 4096");
    DenseComplexMatrix h = m;
    detail::balance(h);
    detail::hessenberg(h);
    EigenResult out;
    out.values = detail::hessenberg_qr(h, opt);
    std::sort(out.values.begin(), out.values.end(), [](cplx a, cplx b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    });
    out.residual.assign(out.values.size(), 0.0);
    out.certified.assign(out.values.size(), !opt.certify);
    if (opt.certify) {
        const double scale = std::max(h.frobenius(), 1e-300);
        for (std::size_t i = 0; i < out.values.size(); ++i) {
            out.residual[i] = detail::hessenberg_backward_error(h, out.values[i]) / scale;
            out.certified[i] = out.residual[i] < opt.certificate_tol;
        }
    }
    return out;
}

} // namespace ptising
