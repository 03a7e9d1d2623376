#pragma once

// Phase labels from the analytic boundary {r = 1} U {eta = 0, r > 1}, and ridge
// detection on scanned data.

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "model.hpp"

namespace ptising {

// I is eta > 0, III is eta < 0 (a labelling choice)
enum class PhaseLabel { ParamagnetI, FerromagnetII, ParamagnetIII, Boundary };

inline std::string_view to_string(PhaseLabel l) {
    switch (l) {
        case PhaseLabel::ParamagnetI: return "ParamagnetI";
        case PhaseLabel::FerromagnetII: return "FerromagnetII";
        case PhaseLabel::ParamagnetIII: return "ParamagnetIII";
        case PhaseLabel::Boundary: return "Boundary";
    }
    return "?";
}

inline PhaseLabel classify(const FieldPoint& p, double tol = 1e-6) {
    if (!(tol > 0.0)) throw InvalidArgument("classify: tol must be positive");
    const double r = std::hypot(p.eta, p.xi);
    if (std::abs(r - 1.0) < tol || (std::abs(p.eta) < tol && r > 1.0)) return PhaseLabel::Boundary;
    if (r < 1.0) return PhaseLabel::FerromagnetII;
    return p.eta > 0.0 ? PhaseLabel::ParamagnetI : PhaseLabel::ParamagnetIII;
}

/// Scalar data on a rectangular grid, values[i * xis.size() + j] at (etas[i], xis[j]).
struct ScalarField {
    std::vector<double> etas;
    std::vector<double> xis;
    std::vector<double> values;

    double at(std::size_t i, std::size_t j) const { return values[i * xis.size() + j]; }
};

struct BoundaryPoint {
    std::size_t i = 0;
    std::size_t j = 0;
    FieldPoint point;
    double value = 0.0;
    double distance = 0.0; ///< to the analytic boundary
};

/// Points whose |value| exceeds threshold * median(|value|) and is a strict
/// local maximum along at least one of the four grid directions (eta, xi and
/// both diagonals). Non-finite values are skipped and never count as neighbours.
inline std::vector<BoundaryPoint> detect_boundary(const ScalarField& f, double threshold = 2.0) {
    const std::size_t ni = f.etas.size(), nj = f.xis.size();
    if (ni == 0 || nj == 0 || f.values.size() != ni * nj) throw InvalidArgument("detect_boundary: empty or ragged grid");
    std::vector<double> mags;
    mags.reserve(f.values.size());
    for (double v : f.values)
        if (std::isfinite(v)) mags.push_back(std::abs(v));
    if (mags.empty()) return {};
    auto mid = mags.begin() + static_cast<std::ptrdiff_t>(mags.size() / 2);
    std::nth_element(mags.begin(), mid, mags.end());
    const double cut = threshold * *mid;

    auto mag = [&](std::ptrdiff_t i, std::ptrdiff_t j, double& out) {
        if (i < 0 || j < 0 || i >= static_cast<std::ptrdiff_t>(ni) || j >= static_cast<std::ptrdiff_t>(nj)) return false;
        const double v = f.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        if (!std::isfinite(v)) return false;
        out = std::abs(v);
        return true;
    };
    const int dirs[4][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
    std::vector<BoundaryPoint> out;
    for (std::size_t i = 0; i < ni; ++i)
        for (std::size_t j = 0; j < nj; ++j) {
            double c = 0.0;
            const auto si = static_cast<std::ptrdiff_t>(i), sj = static_cast<std::ptrdiff_t>(j);
            if (!mag(si, sj, c) || !(c > cut)) continue;
            bool ridge = false;
            for (const auto& d : dirs) {
                double a = 0.0, b = 0.0;
                if (mag(si + d[0], sj + d[1], a) && mag(si - d[0], sj - d[1], b) && c > a && c > b) {
                    ridge = true;
                    break;
                }
            }
            if (!ridge) continue;
            const FieldPoint p{f.etas[i], f.xis[j]};
            out.push_back({i, j, p, f.at(i, j), boundary_distance(p)});
        }
    return out;
}

} // namespace ptising
