#pragma once

// Parameter-plane sweeps. Rows are computed in parallel by grid row and
// emitted in grid order (eta outer, xi inner), so output never depends on the
// worker count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "berry.hpp"
#include "phase.hpp"
#include "response.hpp"
#include "spectrum.hpp"

namespace ptising {

inline constexpr const char* version = "0.1.0";

struct AxisRange {
    double min = 0.0;
    double max = 0.0;
    int count = 2;

    double at(int i) const { return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1); }
};

enum class OutputFormat { Csv, Json };

struct ScanConfig {
    AxisRange eta;
    AxisRange xi;
    std::optional<int> two_n; ///< empty means thermodynamic limit
    std::set<std::string> quantities;
    OutputFormat format = OutputFormat::Csv;
    int jobs = 0; ///< 0 = hardware concurrency
    double phase_tol = 1e-6;
    nlohmann::ordered_json source; ///< echoed into JSON metadata

    Mode mode() const { return two_n ? Mode{FiniteChain{*two_n}} : Mode{ThermodynamicLimit{}}; }
    bool wants(const std::string& q) const { return quantities.count(q) != 0; }
};

inline const std::set<std::string>& known_quantities() {
    static const std::set<std::string> q{"energy", "laplacian", "berry_sum", "berry_diff", "magnetization", "phase"};
    return q;
}

namespace detail {

inline AxisRange parse_range(const nlohmann::json& j, const std::string& name) {
    if (!j.is_object()) throw InvalidArgument("scan config: '" + name + "' must be an object");
    for (const auto& [key, _] : j.items())
        if (key != "min" && key != "max" && key != "count")
            throw InvalidArgument("scan config: unknown key '" + name + "." + key + "'");
    AxisRange r;
    try {
        r.min = j.at("min").get<double>();
        r.max = j.at("max").get<double>();
        r.count = j.at("count").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument("scan config: '" + name + "' needs numeric min, max, count (" + e.what() + ")");
    }
    if (!std::isfinite(r.min) || !std::isfinite(r.max)) throw InvalidArgument("scan config: '" + name + "' range not finite");
    if (r.count < 2) throw InvalidArgument("scan config: '" + name + ".count' must be >= 2");
    return r;
}

} // namespace detail

inline ScanConfig parse_scan_config(const nlohmann::json& j) {
    if (!j.is_object()) throw InvalidArgument("scan config: top level must be an object");
    static const std::set<std::string> keys{"eta", "xi", "sites", "quantities", "format", "jobs", "phase_tol"};
    for (const auto& [key, _] : j.items())
        if (!keys.count(key)) throw InvalidArgument("scan config: unknown key '" + key + "'");
    ScanConfig c;
    c.source = nlohmann::ordered_json::parse(j.dump());
    if (!j.contains("eta") || !j.contains("xi")) throw InvalidArgument("scan config: 'eta' and 'xi' are required");
    c.eta = detail::parse_range(j["eta"], "eta");
    c.xi = detail::parse_range(j["xi"], "xi");
    if (!j.contains("sites")) throw InvalidArgument("scan config: 'sites' is required (even integer or \"thermodynamic\")");
    const auto& s = j["sites"];
    if (s.is_string()) {
        if (s.get<std::string>() != "thermodynamic") throw InvalidArgument("scan config: 'sites' string must be \"thermodynamic\"");
    } else if (s.is_number_integer()) {
        c.two_n = s.get<int>();
        momentum_grid(*c.two_n); // validates
    } else {
        throw InvalidArgument("scan config: 'sites' must be an even integer or \"thermodynamic\"");
    }
    if (!j.contains("quantities") || !j["quantities"].is_array() || j["quantities"].empty())
        throw InvalidArgument("scan config: 'quantities' must be a non-empty array");
    for (const auto& q : j["quantities"]) {
        if (!q.is_string() || !known_quantities().count(q.get<std::string>()))
            throw InvalidArgument("scan config: unknown quantity " + q.dump());
        c.quantities.insert(q.get<std::string>());
    }
    if (j.contains("format")) {
        const auto f = j["format"].get<std::string>();
        if (f == "csv")
            c.format = OutputFormat::Csv;
        else if (f == "json")
            c.format = OutputFormat::Json;
        else
            throw InvalidArgument("scan config: format must be csv or json");
    }
    if (j.contains("jobs")) {
        c.jobs = j["jobs"].get<int>();
        if (c.jobs < 0) throw InvalidArgument("scan config: jobs must be >= 0");
    }
    if (j.contains("phase_tol")) {
        c.phase_tol = j["phase_tol"].get<double>();
        if (!(c.phase_tol > 0.0)) throw InvalidArgument("scan config: phase_tol must be positive");
    }
    return c;
}

/// One output row; NaN is the not-a-value marker.
struct ScanRow {
    double eta = 0.0, xi = 0.0, r = 0.0, phi = 0.0;
    double re_eps_g = NAN, im_eps_g = NAN;
    double re_lap = NAN, im_lap = NAN;
    double re_c_sum = NAN, im_c_sum = NAN;
    double re_c_diff = NAN, im_c_diff = NAN;
    double re_m_a = NAN, im_m_a = NAN;
    std::string phase;
    std::string error;
};

inline const std::vector<std::string>& scan_columns() {
    static const std::vector<std::string> c{"eta",      "xi",        "r",         "phi",       "re_eps_g", "im_eps_g",
                                            "re_lap",   "im_lap",    "re_c_sum",  "im_c_sum",  "re_c_diff", "im_c_diff",
                                            "re_m_a",   "im_m_a",    "phase",     "error"};
    return c;
}

inline ScanRow evaluate_point(const FieldPoint& p, const ScanConfig& cfg, std::span<const KSample> ks) {
    ScanRow row;
    row.eta = p.eta;
    row.xi = p.xi;
    const Polar pol = to_polar(p);
    row.r = pol.r;
    row.phi = pol.phi;
    if (cfg.wants("phase")) row.phase = std::string(to_string(classify(p, cfg.phase_tol)));
    const bool need_d = cfg.wants("laplacian") || cfg.wants("berry_sum") || cfg.wants("berry_diff") || cfg.wants("magnetization");
    if (cfg.wants("energy")) {
        CompensatedSum<double> acc;
        for (const auto& s : ks) acc.add(-s.weight * eps1(s.k, p));
        row.re_eps_g = acc.value();
        row.im_eps_g = 0.0;
    }
    if (!need_d) return row;
    try {
        const auto d = energy_derivatives(p, ks);
        if (cfg.wants("laplacian")) {
            const cplx l = d.laplacian();
            row.re_lap = l.real();
            row.im_lap = l.imag();
        }
        if (cfg.wants("berry_sum")) {
            const cplx c = curvature_preset_sum(d);
            row.re_c_sum = c.real();
            row.im_c_sum = c.imag();
        }
        if (cfg.wants("berry_diff")) {
            const cplx c = curvature_preset_diff(d);
            row.re_c_diff = c.real();
            row.im_c_diff = c.imag();
        }
        if (cfg.wants("magnetization")) {
            const cplx m = magnetizations(d).first;
            row.re_m_a = m.real();
            row.im_m_a = m.imag();
        }
    } catch (const GaplessError&) {
        row.error = "gapless";
    }
    return row;
}

struct ScanProgress {
    bool enabled = false;
    std::ostream* out = &std::cerr;
};

inline std::vector<ScanRow> run_scan(const ScanConfig& cfg, int jobs = -1, ScanProgress progress = {}) {
    const auto ks = samples(cfg.mode());
    const int ni = cfg.eta.count, nj = cfg.xi.count;
    std::vector<ScanRow> rows(static_cast<std::size_t>(ni) * static_cast<std::size_t>(nj));
    int workers = jobs >= 0 ? jobs : cfg.jobs;
    if (workers == 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    workers = std::clamp(workers, 1, ni);
    std::atomic<int> next{0}, done{0};
    auto work = [&] {
        for (int i = next++; i < ni; i = next++) {
            const double eta = cfg.eta.at(i);
            for (int j = 0; j < nj; ++j)
                rows[static_cast<std::size_t>(i) * nj + j] = evaluate_point(FieldPoint{eta, cfg.xi.at(j)}, cfg, ks);
            const int d = ++done;
            if (progress.enabled && (d % 10 == 0 || d == ni)) *progress.out << "scan: " << d << "/" << ni << " rows\n";
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    return rows;
}

namespace detail {

inline std::string fmt17(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline nlohmann::ordered_json json_number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

inline double parse_field(const std::string& s) {
    if (s.empty()) return NAN;
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw InvalidArgument("parse_csv: bad number '" + s + "'");
    return v;
}

} // namespace detail

inline std::vector<double> numeric_fields(const ScanRow& r) {
    return {r.eta,      r.xi,      r.r,       r.phi,     r.re_eps_g,  r.im_eps_g, r.re_lap,
            r.im_lap,   r.re_c_sum, r.im_c_sum, r.re_c_diff, r.im_c_diff, r.re_m_a,   r.im_m_a};
}

inline std::string to_csv(const std::vector<ScanRow>& rows) {
    std::string out;
    const auto& cols = scan_columns();
    for (std::size_t c = 0; c < cols.size(); ++c) out += (c ? "," : "") + cols[c];
    out += '\n';
    for (const auto& r : rows) {
        for (double v : numeric_fields(r)) out += detail::fmt17(v) + ',';
        out += r.phase + ',' + r.error + '\n';
    }
    return out;
}

inline std::vector<ScanRow> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw InvalidArgument("parse_csv: empty input");
    std::string header;
    const auto& cols = scan_columns();
    for (std::size_t c = 0; c < cols.size(); ++c) header += (c ? "," : "") + cols[c];
    if (line != header) throw InvalidArgument("parse_csv: unexpected header");
    std::vector<ScanRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::size_t start = 0;
        for (;;) {
            const auto comma = line.find(',', start);
            f.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (f.size() != cols.size()) throw InvalidArgument("parse_csv: wrong field count");
        ScanRow r;
        double* dst[] = {&r.eta,    &r.xi,       &r.r,        &r.phi,       &r.re_eps_g, &r.im_eps_g, &r.re_lap,
                         &r.im_lap, &r.re_c_sum, &r.im_c_sum, &r.re_c_diff, &r.im_c_diff, &r.re_m_a,  &r.im_m_a};
        for (std::size_t i = 0; i < 14; ++i) *dst[i] = detail::parse_field(f[i]);
        r.phase = f[14];
        r.error = f[15];
        rows.push_back(std::move(r));
    }
    return rows;
}

inline std::string to_json(const std::vector<ScanRow>& rows, const ScanConfig& cfg) {
    nlohmann::ordered_json doc;
    doc["metadata"] = {{"artifact", "ptising"}, {"version", version}, {"config", cfg.source}};
    auto arr = nlohmann::ordered_json::array();
    const auto& cols = scan_columns();
    for (const auto& r : rows) {
        nlohmann::ordered_json o;
        const auto v = numeric_fields(r);
        for (std::size_t i = 0; i < v.size(); ++i) o[cols[i]] = detail::json_number(v[i]);
        o["phase"] = r.phase.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(r.phase);
        o["error"] = r.error.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(r.error);
        arr.push_back(std::move(o));
    }
    doc["rows"] = std::move(arr);
    return doc.dump(1) + "\n";
}

inline std::string serialize(const std::vector<ScanRow>& rows, const ScanConfig& cfg) {
    return cfg.format == OutputFormat::Csv ? to_csv(rows) : to_json(rows, cfg);
}

} // namespace ptising
