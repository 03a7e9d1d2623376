#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "numeric.hpp"

namespace ptising {

using CVector = std::vector<cplx>;

/// Square complex matrix, row-major.
class DenseComplexMatrix {
public:
    DenseComplexMatrix() = default;
    explicit DenseComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

    static DenseComplexMatrix identity(std::size_t dim) {
        DenseComplexMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t dim() const { return dim_; }
    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
    std::span<const cplx> data() const { return data_; }

    DenseComplexMatrix adjoint() const {
        DenseComplexMatrix out(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
        return out;
    }

    DenseComplexMatrix conjugate() const {
        DenseComplexMatrix out(dim_);
        std::transform(data_.begin(), data_.end(), out.data_.begin(), [](cplx z) { return std::conj(z); });
        return out;
    }

    cplx trace() const {
        CompensatedSum<cplx> acc;
        for (std::size_t i = 0; i < dim_; ++i) acc.add((*this)(i, i));
        return acc.value();
    }

    double max_abs() const {
        double m = 0.0;
        for (const cplx& z : data_) m = std::max(m, std::abs(z));
        return m;
    }

    double frobenius() const {
        double s = 0.0;
        for (const cplx& z : data_) s += std::norm(z);
        return std::sqrt(s);
    }

    CVector apply(std::span<const cplx> v) const {
        check_size(v.size());
        CVector out(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            cplx acc{};
            const cplx* row = &data_[i * dim_];
            for (std::size_t j = 0; j < dim_; ++j) acc += row[j] * v[j];
            out[i] = acc;
        }
        return out;
    }

    friend DenseComplexMatrix operator*(const DenseComplexMatrix& a, const DenseComplexMatrix& b) {
        a.check_size(b.dim_);
        DenseComplexMatrix out(a.dim_);
        for (std::size_t i = 0; i < a.dim_; ++i)
            for (std::size_t l = 0; l < a.dim_; ++l) {
                const cplx ail = a(i, l);
                if (ail == cplx{}) continue;
                for (std::size_t j = 0; j < a.dim_; ++j) out(i, j) += ail * b(l, j);
            }
        return out;
    }

    friend DenseComplexMatrix operator-(DenseComplexMatrix a, const DenseComplexMatrix& b) {
        a.check_size(b.dim_);
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
        return a;
    }

    friend DenseComplexMatrix operator+(DenseComplexMatrix a, const DenseComplexMatrix& b) {
        a.check_size(b.dim_);
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
        return a;
    }

    friend DenseComplexMatrix operator*(cplx s, DenseComplexMatrix a) {
        for (cplx& z : a.data_) z *= s;
        return a;
    }

private:
    void check_size(std::size_t n) const {
        if (n != dim_)
            throw InvalidArgument("dimension mismatch: " + std::to_string(n) + " vs " + std::to_string(dim_));
    }

    std::size_t dim_ = 0;
    CVector data_;
};

inline double norm2(std::span<const cplx> v) {
    double s = 0.0;
    for (const cplx& z : v) s += std::norm(z);
    return std::sqrt(s);
}

/// Bilinear pairing sum_i a_i b_i (a holds bra components).
inline cplx pair(std::span<const cplx> a, std::span<const cplx> b) {
    cplx s{};
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// LU factorization with partial pivoting. Exactly-zero pivots are replaced
/// by `floor` so that shifted systems at an eigenvalue stay solvable, which is
/// what inverse iteration needs.
class LuFactorization {
public:
    LuFactorization(DenseComplexMatrix a, double floor) : lu_(std::move(a)), perm_(lu_.dim()) {
        const std::size_t n = lu_.dim();
        for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t piv = c;
            for (std::size_t r = c + 1; r < n; ++r)
                if (std::abs(lu_(r, c)) > std::abs(lu_(piv, c))) piv = r;
            if (piv != c) {
                for (std::size_t j = 0; j < n; ++j) std::swap(lu_(c, j), lu_(piv, j));
                std::swap(perm_[c], perm_[piv]);
            }
            if (std::abs(lu_(c, c)) < floor) lu_(c, c) = floor;
            for (std::size_t r = c + 1; r < n; ++r) {
                const cplx f = lu_(r, c) / lu_(c, c);
                lu_(r, c) = f;
                if (f == cplx{}) continue;
                for (std::size_t j = c + 1; j < n; ++j) lu_(r, j) -= f * lu_(c, j);
            }
        }
    }

    CVector solve(std::span<const cplx> b) const {
        const std::size_t n = lu_.dim();
        CVector x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
        for (std::size_t ii = n; ii-- > 0;) {
            for (std::size_t j = ii + 1; j < n; ++j) x[ii] -= lu_(ii, j) * x[j];
            x[ii] /= lu_(ii, ii);
        }
        return x;
    }

private:
    DenseComplexMatrix lu_;
    std::vector<std::size_t> perm_;
};

/// Right eigenvector for the eigenvalue nearest `shift` by inverse iteration.
/// Returns a unit vector; throws ConvergenceError when the residual stays
/// above `tol * ||M||_F`.
inline CVector inverse_iteration(const DenseComplexMatrix& m, cplx shift, double tol = 1e-10, int steps = 4) {
    const std::size_t n = m.dim();
    const double scale = std::max(m.frobenius(), 1e-300);
    DenseComplexMatrix shifted = m;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= shift;
    LuFactorization lu(shifted, 1e-14 * scale);
    CVector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = cplx{1.0 + 0.1 * static_cast<double>(i), 0.05 * static_cast<double>(i % 3)};
    for (int s = 0; s < steps; ++s) {
        v = lu.solve(v);
        const double nv = norm2(v);
        if (!(nv > 0.0) || !std::isfinite(nv)) throw ConvergenceError("inverse_iteration: breakdown");
        for (cplx& z : v) z /= nv;
    }
    CVector mv = m.apply(v);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) res += std::norm(mv[i] - shift * v[i]);
    if (std::sqrt(res) > tol * scale)
        throw ConvergenceError("inverse_iteration: residual " + std::to_string(std::sqrt(res)) + " above tolerance");
    return v;
}

} // namespace ptising
