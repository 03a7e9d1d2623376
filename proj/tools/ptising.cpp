// ptising command line: single-point evaluations, scans, oracle checks.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ptising/ptising.hpp"

using namespace ptising;
using ojson = nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// key = value lines, or one JSON object
class Report {
public:
    void add(const std::string& key, double v) {
        text_.emplace_back(key, fmt(v));
        json_[key] = std::isfinite(v) ? ojson(v) : ojson(nullptr);
    }
    void add(const std::string& key, cplx v) {
        if (v.imag() == 0.0) {
            text_.emplace_back(key, fmt(v.real()));
        } else {
            const std::string im = fmt(std::abs(v.imag()));
            text_.emplace_back(key, fmt(v.real()) + (v.imag() < 0 ? " - " : " + ") + im + "i");
        }
        json_[key] = {{"re", v.real()}, {"im", v.imag()}};
    }
    void add(const std::string& key, const std::string& v) {
        text_.emplace_back(key, v);
        json_[key] = v;
    }
    void add(const std::string& key, const char* v) { add(key, std::string(v)); }
    void add(const std::string& key, int v) {
        text_.emplace_back(key, std::to_string(v));
        json_[key] = v;
    }
    void add(const std::string& key, bool v) {
        text_.emplace_back(key, v ? "true" : "false");
        json_[key] = v;
    }

    void print(bool as_json) const {
        if (as_json) {
            std::cout << json_.dump(2) << "\n";
            return;
        }
        for (const auto& [k, v] : text_) std::cout << k << " = " << v << "\n";
    }

private:
    std::vector<std::pair<std::string, std::string>> text_;
    ojson json_ = ojson::object();
};

struct ModeFlags {
    int sites = 0;
    bool thermodynamic = false;

    Mode mode() const { return sites > 0 ? Mode{FiniteChain{sites}} : Mode{ThermodynamicLimit{}}; }
};

void add_mode_flags(CLI::App* cmd, ModeFlags& m) {
    auto* s = cmd->add_option("--sites", m.sites, "chain length 2N (even, >= 4)");
    auto* t = cmd->add_flag("--thermodynamic", m.thermodynamic, "thermodynamic limit (default)");
    s->excludes(t);
}

void add_point(CLI::App* cmd, double& eta, double& xi, double& J) {
    cmd->add_option("--eta", eta, "real field")->required();
    cmd->add_option("--xi", xi, "imaginary field")->required();
    cmd->add_option("--J", J, "Ising coupling")->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ising ring in a staggered complex transverse field"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version);

    double eta = 0.0, xi = 0.0, J = 1.0;
    bool as_json = false;
    int exit_code = 0;
    std::string format = "text";
    auto format_opt = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    };

    // dispersion
    auto* disp = app.add_subcommand("dispersion", "quasiparticle energy eps_n(k)");
    double k = 0.0;
    int branch = 1;
    add_point(disp, eta, xi, J);
    disp->add_option("--k", k, "momentum")->required();
    disp->add_option("--n", branch, "branch 1..6")->capture_default_str();
    format_opt(disp);

    // energy
    auto* energy = app.add_subcommand("energy", "ground-state energy and density");
    ModeFlags energy_mode;
    add_point(energy, eta, xi, J);
    add_mode_flags(energy, energy_mode);
    format_opt(energy);

    // laplacian
    auto* lap = app.add_subcommand("laplacian", "Laplacian of eps_g in the field plane");
    ModeFlags lap_mode;
    bool use_fd = false;
    double fd_step = 0.0;
    add_point(lap, eta, xi, J);
    add_mode_flags(lap, lap_mode);
    lap->add_flag("--fd", use_fd, "also report the finite-difference value");
    lap->add_option("--step", fd_step, "finite-difference step (default 1e-3 max(1,|eta|,|xi|))");
    format_opt(lap);

    // berry
    auto* berry = app.add_subcommand("berry", "Berry curvature density");
    ModeFlags berry_mode;
    std::string preset = "sum";
    add_point(berry, eta, xi, J);
    add_mode_flags(berry, berry_mode);
    berry->add_option("--preset", preset, "rotation preset")->check(CLI::IsMember({"sum", "diff"}))->required();
    format_opt(berry);

    // phase
    auto* phase = app.add_subcommand("phase", "phase label");
    double tol = 1e-6;
    add_point(phase, eta, xi, J);
    phase->add_option("--tol", tol, "boundary collar")->capture_default_str();
    format_opt(phase);

    // scan
    auto* scan = app.add_subcommand("scan", "sweep a grid of field points");
    std::string config_path, out_path;
    int jobs = -1;
    bool quiet = false;
    scan->add_option("--config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
    scan->add_option("--out", out_path, "output file")->required();
    scan->add_option("--jobs", jobs, "worker threads (default: config, then hardware)");
    scan->add_flag("--quiet", quiet, "no progress on stderr");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "exact-diagonalization checks");
    oracle->require_subcommand(1);
    int oracle_sites = 8;
    double oracle_k = std::numbers::pi / 3.0, oracle_step = 1e-4;
    std::string left_rule = "numeric";
    auto* o_chain = oracle->add_subcommand("chain", "sector ED against the closed-form E_g");
    add_point(o_chain, eta, xi, J);
    o_chain->add_option("--sites", oracle_sites, "2N in [4, 12]")->capture_default_str();
    format_opt(o_chain);
    auto* o_block = oracle->add_subcommand("block", "block spectrum contains 2 eps_n");
    add_point(o_block, eta, xi, J);
    o_block->add_option("--k", oracle_k, "momentum in (0, pi)")->capture_default_str();
    format_opt(o_block);
    auto* o_pt = oracle->add_subcommand("pt", "PT, P and T defects of the chain");
    add_point(o_pt, eta, xi, J);
    o_pt->add_option("--sites", oracle_sites, "2N in [4, 12]")->capture_default_str();
    format_opt(o_pt);
    auto* o_bi = oracle->add_subcommand("biortho", "biorthogonality of the composite states");
    add_point(o_bi, eta, xi, J);
    o_bi->add_option("--k", oracle_k, "momentum in (0, pi)")->capture_default_str();
    o_bi->add_option("--left", left_rule, "left vectors")->check(CLI::IsMember({"numeric", "conjugation"}))->capture_default_str();
    format_opt(o_bi);
    auto* o_overlap = oracle->add_subcommand("overlap", "antisymmetrized overlap of the ground pair");
    add_point(o_overlap, eta, xi, J);
    o_overlap->add_option("--k", oracle_k, "momentum in (0, pi)")->capture_default_str();
    o_overlap->add_option("--step", oracle_step, "finite-difference step")->capture_default_str();
    format_opt(o_overlap);

    // asymptotics
    auto* asym = app.add_subcommand("asymptotics", "log-divergence predictions");
    asym->require_subcommand(1);
    double r = 1.001, phi = 0.0, axis_eta = 1e-3, axis_xi = 5.0;
    auto* a_circle = asym->add_subcommand("circle", "near r = 1");
    a_circle->add_option("--r", r, "radius, 0 < |r - 1| < 0.1")->required();
    a_circle->add_option("--phi", phi, "polar angle")->required();
    format_opt(a_circle);
    auto* a_axis = asym->add_subcommand("axis", "near eta = 0 at large |xi|");
    a_axis->add_option("--eta", axis_eta, "0 < |eta| < 0.1")->required();
    a_axis->add_option("--xi", axis_xi, "imaginary field for the measured value")->capture_default_str();
    format_opt(a_axis);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    as_json = format == "json";

    try {
        const FieldPoint p{eta, xi, J};
        Report rep;
        if (*disp) {
            rep.add("n", branch);
            rep.add("k", k);
            rep.add("eps", dispersion(branch, k, p));
        } else if (*energy) {
            const Mode mode = energy_mode.mode();
            rep.add("mode", describe(mode));
            if (energy_mode.sites > 0) {
                const auto e = ground_energy(energy_mode.sites, p);
                rep.add("e_total", e.e_total);
                rep.add("eps_g", e.eps_g);
            } else {
                rep.add("eps_g", energy_density(p, mode));
            }
        } else if (*lap) {
            const Mode mode = lap_mode.mode();
            const auto d = energy_derivatives(p, mode);
            rep.add("mode", describe(mode));
            rep.add("laplacian", d.laplacian());
            rep.add("d2_eta", d.d2_eta);
            rep.add("d2_xi", d.d2_xi);
            rep.add("d2_mixed", d.d2_mixed);
            rep.add("boundary_distance", boundary_distance(p));
            if (use_fd) {
                const double h = fd_step > 0.0 ? fd_step : default_fd_step(p);
                rep.add("laplacian_fd", laplacian_fd(p, h, mode));
                rep.add("fd_step", h);
            }
        } else if (*berry) {
            const Mode mode = berry_mode.mode();
            const auto d = energy_derivatives(p, mode);
            rep.add("mode", describe(mode));
            rep.add("preset", preset);
            rep.add("curvature", preset == "sum" ? curvature_preset_sum(d) : curvature_preset_diff(d));
            const auto [ma, mb] = magnetizations(d);
            rep.add("m_a", ma);
            rep.add("m_b", mb);
        } else if (*phase) {
            const Polar pol = to_polar(p);
            rep.add("phase", std::string(to_string(classify(p, tol))));
            rep.add("r", pol.r);
            rep.add("phi", pol.phi);
            rep.add("boundary_distance", boundary_distance(p));
        } else if (*scan) {
            std::ifstream in(config_path);
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(in);
            } catch (const nlohmann::json::exception& e) {
                throw InvalidArgument(std::string("scan config: ") + e.what());
            }
            const ScanConfig cfg = parse_scan_config(j);
            const auto rows = run_scan(cfg, jobs, ScanProgress{!quiet, &std::cerr});
            std::ofstream out(out_path, std::ios::binary);
            if (!out) throw Error("cannot open " + out_path);
            out << serialize(rows, cfg);
            if (!out) throw Error("write failed: " + out_path);
            const auto gapless = std::count_if(rows.begin(), rows.end(), [](const ScanRow& r) { return !r.error.empty(); });
            if (!quiet) std::cerr << "scan: wrote " << rows.size() << " rows (" << gapless << " gapless) to " << out_path << "\n";
            return 0;
        } else if (*o_chain) {
            const auto c = sector_ground_compare(oracle_sites, p);
            const double tol_abs = 1e-8 * std::max(1.0, std::abs(c.free_fermion));
            rep.add("sites", oracle_sites);
            rep.add("even_min", c.even.value);
            rep.add("odd_min", c.odd.value);
            rep.add("free_fermion_e_g", c.free_fermion);
            rep.add("abs_error", c.abs_error);
            rep.add("even_is_lowest", c.even_is_lowest);
            rep.add("certified", c.even.certified && c.odd.certified);
            rep.add("pass", c.abs_error < tol_abs);
            exit_code = c.abs_error < tol_abs ? 0 : 1;
        } else if (*o_block) {
            const auto h = build_hk_block(oracle_k, p);
            const auto ev = eigenvalues_dense(h);
            double worst = 0.0;
            for (int n = 1; n <= 6; ++n) {
                const cplx target = block_eigenvalue(n, oracle_k, p);
                double best = INFINITY;
                for (const cplx& v : ev.values) best = std::min(best, std::abs(v - target));
                rep.add("miss_" + std::to_string(n), best);
                worst = std::max(worst, best);
            }
            rep.add("max_miss", worst);
            rep.add("certified", ev.all_certified());
            rep.add("pass", worst < 1e-9);
            exit_code = worst < 1e-9 ? 0 : 1;
        } else if (*o_pt) {
            const auto pt = pt_check(oracle_sites, p);
            rep.add("pt_defect", pt.pt_defect);
            rep.add("p_defect", pt.p_defect);
            rep.add("t_defect", pt.t_defect);
            rep.add("pass", pt.pt_defect < 1e-12);
            exit_code = pt.pt_defect < 1e-12 ? 0 : 1;
        } else if (*o_bi) {
            const auto m = biorthogonality_matrix(oracle_k, p, left_rule == "numeric" ? LeftRule::Numeric : LeftRule::Conjugation);
            double worst = 0.0;
            for (int a = 0; a < 6; ++a)
                for (int b = 0; b < 6; ++b) worst = std::max(worst, std::abs(m[a][b] - (a == b ? 1.0 : 0.0)));
            rep.add("left", left_rule);
            rep.add("max_defect", worst);
            rep.add("pass", worst < 1e-10);
            exit_code = worst < 1e-10 ? 0 : 1;
        } else if (*o_overlap) {
            const double defect = block_ground_overlap_check(oracle_k, p, oracle_step);
            rep.add("defect", defect);
            rep.add("pass", defect < 1e-6);
            exit_code = defect < 1e-6 ? 0 : 1;
        } else if (*a_circle) {
            const FieldPoint q{r * std::cos(phi), r * std::sin(phi)};
            rep.add("prediction", asymptotic_laplacian_circle(r, phi));
            rep.add("laplacian", laplacian_eps_g(q, ThermodynamicLimit{}));
        } else if (*a_axis) {
            rep.add("prediction", asymptotic_laplacian_axis(axis_eta));
            rep.add("laplacian", laplacian_eps_g(FieldPoint{axis_eta, axis_xi}, ThermodynamicLimit{}));
        }
        rep.print(as_json);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
