#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <type_traits>
#include <vector>

#include "errors.hpp"

namespace ptising {

using cplx = std::complex<double>;

/// Kahan-Babuska (Neumaier) compensated accumulator. Order of `add` calls
/// fully determines the result.
template <class T>
class CompensatedSum {
public:
    void add(T x) {
        T t = sum_ + x;
        if constexpr (std::is_same_v<T, double>) {
            comp_ += component(sum_, x, t);
        } else {
            comp_ += T{component(sum_.real(), x.real(), t.real()),
                       component(sum_.imag(), x.imag(), t.imag())};
        }
        sum_ = t;
    }
    T value() const { return sum_ + comp_; }

private:
    static double component(double s, double x, double t) {
        return std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    }
    T sum_{};
    T comp_{};
};

struct GaussNode {
    double x;
    double w;
};

/// Gauss-Legendre rule of order n on [a, b], nodes ascending.
inline std::vector<GaussNode> gauss_legendre(int n, double a, double b) {
    if (n < 1) throw InvalidArgument("gauss_legendre: order must be positive");
    std::vector<GaussNode> rule(static_cast<std::size_t>(n));
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
            }
            dp = n * (z * p1 - p2) / (z * z - 1.0);
            double z1 = z;
            z = z1 - p1 / dp;
            if (std::abs(z - z1) <= 1e-15) break;
        }
        // recompute derivative at the converged root
        {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
            }
            dp = n * (z * p1 - p2) / (z * z - 1.0);
        }
        const double w = 2.0 * half / ((1.0 - z * z) * dp * dp);
        rule[static_cast<std::size_t>(i)] = {mid - half * z, w};
        rule[static_cast<std::size_t>(n - 1 - i)] = {mid + half * z, w};
    }
    return rule;
}

} // namespace ptising
