#pragma once

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kho/classical.hpp"
#include "kho/core.hpp"
#include "kho/decoherence.hpp"
#include "kho/io.hpp"
#include "kho/optics.hpp"
#include "kho/propagators.hpp"
#include "kho/version.hpp"
#include "kho/wigner.hpp"

// Experiment orchestration behind the command-line tool.  A fully resolved
// ExperimentConfig runs deterministically: fixed config and seed reproduce
// every output byte for byte, and each data file gets a JSON sidecar with
// the resolved configuration.

namespace kho {

enum class ExperimentKind { evolve, wigner, web, manifold, purity, params };

inline const char* kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::evolve: return "evolve";
        case ExperimentKind::wigner: return "wigner";
        case ExperimentKind::web: return "web";
        case ExperimentKind::manifold: return "manifold";
        case ExperimentKind::purity: return "purity";
        case ExperimentKind::params: return "params";
    }
    return "?";
}

/// Angles accept raw radians and rational or decimal multiples of pi:
/// "pi/3", "2pi/3", "1.45pi", "-pi", "0.78".
inline double parse_angle(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw config_error("empty angle");

    auto parse_num = [](const std::string& t) {
        const char* begin = t.c_str();
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end != begin + t.size())
            throw config_error("bad number in angle: '" + t + "'");
        return v;
    };

    std::size_t at = s.find("pi");
    std::size_t pi_len = 2;
    if (at == std::string::npos) {
        at = s.find("π");
        pi_len = 2;  // UTF-8 pi is two bytes
    }
    if (at == std::string::npos) return parse_num(s);

    std::string head = s.substr(0, at);
    std::string tail = s.substr(at + pi_len);

    double factor = 1.0;
    if (!head.empty() && head.back() == '*') head.pop_back();
    if (head == "-")
        factor = -1.0;
    else if (!head.empty() && head != "+")
        factor = parse_num(head);

    double denom = 1.0;
    if (!tail.empty()) {
        if (tail.front() != '/' || tail.size() < 2)
            throw config_error("bad angle: '" + text + "'");
        denom = parse_num(tail.substr(1));
        if (denom == 0.0) throw config_error("zero denominator in angle");
    }
    return factor * pi / denom;
}

/// Comma-separated doubles, e.g. "0.05,0.1,0.5".
inline std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (end != item.c_str() + item.size())
            throw config_error("bad number in list: '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw config_error("empty number list: '" + text + "'");
    return out;
}

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::evolve;

    // map parameters (kick/hbar may carry sweep lists for `purity`)
    double kick = 2.0;
    double alpha = 2.0 * pi / 3.0;
    double phi = 0.0;
    double hbar = 0.9;
    int kick_sign = +1;
    std::vector<double> kick_list;
    std::vector<double> hbar_list;

    GaussianSpec gauss;
    int n_steps = 1;

    // grid overrides; 0 = auto.  Auto grids grow on a boundary overflow,
    // pinned grids fail instead.
    int n_points = 0;
    double q_max = 0.0;

    // web / manifold
    int web_iters = 5000;
    double seed_radius = pi;
    std::vector<PhasePoint> extra_seeds;
    double eps_ref = 0.05;
    std::size_t point_cap = 1000000;
    double axis_half_sigmas = 3.0;
    std::optional<Mat2> correction;  // measurement-plane coordinate fix

    // optics design report
    double wavelength = 632.8e-9;
    double focal = 0.150;
    double nu = 0.0;
    double hbar_target = 0.0;
    LossModel loss{1.0, 0.98, 0.9745, 1.0};
    double floor_fraction = 0.01;
    bool json_report = false;

    std::filesystem::path out_dir = ".";
    bool dump_state = false;
    unsigned long seed = 0;
};

struct RunResult {
    std::vector<std::filesystem::path> files;
    std::string report;  // printed by the CLI (design reports, cell failures)
};

namespace detail {

inline KhoParams params_of(const ExperimentConfig& cfg) {
    return KhoParams{cfg.kick, cfg.alpha, cfg.phi, cfg.hbar, cfg.kick_sign};
}

inline io::json base_meta(const ExperimentConfig& cfg, const GridSpec* grid) {
    io::json j;
    j["artifact"] = "kho";
    j["version"] = version;
    j["kind"] = kind_name(cfg.kind);
    j["params"] = {{"K", cfg.kick},       {"alpha", cfg.alpha},
                   {"phi", cfg.phi},      {"hbar_eff", cfg.hbar},
                   {"kick_sign", cfg.kick_sign}};
    j["initial_state"] = {{"q0", cfg.gauss.q0},
                          {"p0", cfg.gauss.p0},
                          {"squeeze", cfg.gauss.squeeze},
                          {"tilt", cfg.gauss.tilt}};
    j["n_steps"] = cfg.n_steps;
    j["seed"] = cfg.seed;
    if (grid)
        j["grid"] = {{"n_points", grid->n},
                     {"q_max", grid->q_max},
                     {"dq", grid->dq()},
                     {"dp", grid->dp()}};
    return j;
}

/// Build the initial state on an auto or pinned grid and hand it to `body`;
/// on a boundary overflow with an auto grid, double the resolution and retry.
inline void run_with_grid(const ExperimentConfig& cfg, int n_steps,
                          const std::function<void(const QuantumState&)>& body) {
    const KhoParams par = params_of(cfg);
    GridSpec grid = suggest_grid(par, cfg.gauss, n_steps, cfg.n_points, cfg.q_max);
    const bool pinned = cfg.n_points > 0;
    for (int attempt = 0;; ++attempt) {
        try {
            body(prepare_gaussian(cfg.gauss, grid));
            return;
        } catch (const grid_overflow_error&) {
            if (pinned || attempt >= 4 || grid.n >= (1 << 22)) throw;
            grid = make_grid(grid.n * 2, grid.q_max, grid.hbar);
        }
    }
}

inline std::string num_tag(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

inline void run_evolve(const ExperimentConfig& cfg, RunResult& result) {
    detail::run_with_grid(cfg, cfg.n_steps, [&](const QuantumState& psi) {
        const auto snaps = kho_evolve(psi, params_of(cfg), cfg.n_steps);
        std::vector<io::MomentsRow> rows;
        for (std::size_t i = 0; i < snaps.size(); ++i)
            rows.push_back({static_cast<int>(i), expectations(snaps[i]),
                            state_norm(snaps[i])});
        const auto path = cfg.out_dir / "moments.csv";
        io::write_moments_csv(path, rows);
        io::write_sidecar(path, base_meta(cfg, &psi.grid));
        result.files.push_back(path);
        if (cfg.dump_state) {
            const auto spath = cfg.out_dir / "state_final.csv";
            io::write_state_csv(spath, snaps.back());
            io::write_sidecar(spath, base_meta(cfg, &psi.grid));
            result.files.push_back(spath);
        }
    });
}

inline void run_wigner(const ExperimentConfig& cfg, RunResult& result) {
    detail::run_with_grid(cfg, cfg.n_steps, [&](const QuantumState& psi) {
        const auto snaps = kho_evolve(psi, params_of(cfg), cfg.n_steps);
        const WignerGrid w = wigner_transform(snaps.back());

        io::json meta = base_meta(cfg, &psi.grid);
        meta["negativity_volume"] = negativity_volume(w);
        if (const auto area = fringe_scale(w)) meta["fringe_area"] = *area;

        const auto cpath = cfg.out_dir / "wigner.csv";
        io::write_wigner_csv(cpath, w);
        io::write_sidecar(cpath, meta);
        result.files.push_back(cpath);

        const auto ppath = cfg.out_dir / "wigner.pgm";
        double lo = 0, hi = 0;
        io::write_wigner_pgm16(ppath, w, &lo, &hi);
        io::json pmeta = meta;
        pmeta["heatmap"] = {{"w_min", lo}, {"w_max", hi},
                            {"rows", "P descending"}, {"cols", "Q ascending"}};
        io::write_sidecar(ppath, pmeta);
        result.files.push_back(ppath);
    });
}

inline void run_web(const ExperimentConfig& cfg, RunResult& result) {
    std::vector<PhasePoint> seeds = cfg.extra_seeds.empty()
                                        ? default_web_seeds(cfg.seed_radius)
                                        : cfg.extra_seeds;
    const WebCloud cloud = stroboscopic_web(params_of(cfg), seeds, cfg.web_iters);
    io::json meta = base_meta(cfg, nullptr);
    meta["n_iter"] = cfg.web_iters;
    meta["n_seeds"] = seeds.size();
    meta["max_radius"] = cloud.max_radius;
    const auto path = cfg.out_dir / "web.csv";
    io::write_points_csv(path, cloud);
    io::write_sidecar(path, meta);
    result.files.push_back(path);
}

inline void run_manifold(const ExperimentConfig& cfg, RunResult& result) {
    const double sig_major =
        std::max(cfg.gauss.squeeze, 1.0 / cfg.gauss.squeeze) *
        std::sqrt(cfg.hbar / 2.0);
    Polyline line = segment_polyline({cfg.gauss.q0, cfg.gauss.p0}, cfg.gauss.tilt,
                                     cfg.axis_half_sigmas * sig_major, 33,
                                     cfg.eps_ref);
    Polyline evolved = evolve_manifold(line, params_of(cfg), cfg.n_steps,
                                       cfg.point_cap);
    if (cfg.correction)
        evolved = transform_polyline(evolved, LinearPhaseSpaceMap{*cfg.correction});

    io::json meta = base_meta(cfg, nullptr);
    meta["eps_ref"] = cfg.eps_ref;
    meta["n_vertices"] = evolved.points.size();
    meta["arc_length"] = evolved.length();
    const auto path = cfg.out_dir / "manifold.csv";
    io::write_polyline_csv(path, evolved);
    io::write_sidecar(path, meta);
    result.files.push_back(path);
}

inline void run_purity(const ExperimentConfig& cfg, RunResult& result) {
    const std::vector<double> kicks =
        cfg.kick_list.empty() ? std::vector<double>{cfg.kick} : cfg.kick_list;
    const std::vector<double> hbars =
        cfg.hbar_list.empty() ? std::vector<double>{cfg.hbar} : cfg.hbar_list;
    const auto cells = purity_sweep(cfg.gauss, params_of(cfg), cfg.n_steps,
                                    hbars, kicks, cfg.n_points, cfg.q_max);
    int failures = 0;
    for (const auto& cell : cells) {
        const std::string tag = "purity_K" + num_tag(cell.params.kick) +
                                "_hbar" + num_tag(cell.params.hbar) + ".csv";
        if (!cell.curve) {
            ++failures;
            result.report += "cell K=" + num_tag(cell.params.kick) +
                             " hbar=" + num_tag(cell.params.hbar) +
                             " failed: " + cell.error_message + "\n";
            continue;
        }
        const auto path = cfg.out_dir / tag;
        io::write_purity_csv(path, *cell.curve);
        io::json meta = base_meta(cfg, nullptr);
        meta["params"]["K"] = cell.params.kick;
        meta["params"]["hbar_eff"] = cell.params.hbar;
        io::write_sidecar(path, meta);
        result.files.push_back(path);
    }
    if (failures == static_cast<int>(cells.size()))
        throw error("purity sweep: every cell failed\n" + result.report);
}

inline void run_params_report(const ExperimentConfig& cfg, RunResult& result) {
    double nu = cfg.nu;
    if (nu <= 0.0) {
        if (cfg.hbar_target <= 0.0)
            throw config_error("params: give either --nu or --hbar-target");
        nu = nu_for_hbar(cfg.wavelength, cfg.focal, cfg.alpha, cfg.hbar_target);
    }
    const OpticalDesign design{cfg.wavelength, cfg.focal, cfg.alpha, nu};
    const double hbar_eff = hbar_eff_from_optics(design);
    const double z = lens_spacing(cfg.focal, cfg.alpha);
    const long kicks = max_kicks(cfg.loss, cfg.floor_fraction);
    const auto stage = compose_abcd(frft_stage(cfg.focal, cfg.alpha));

    if (cfg.json_report) {
        io::json j;
        j["artifact"] = "kho";
        j["version"] = version;
        j["wavelength_m"] = design.wavelength;
        j["focal_m"] = design.focal;
        j["alpha_rad"] = design.alpha;
        j["nu_per_m"] = nu;
        j["f_prime_m"] = design.f_prime();
        j["hbar_eff"] = hbar_eff;
        j["lens_spacing_m"] = z;
        j["stage_rotation_rad"] = rotation_angle_of(stage.m);
        j["loss"] = {{"t_o", cfg.loss.t_o},
                     {"t_l", cfg.loss.t_l},
                     {"t_slm", cfg.loss.t_slm},
                     {"floor_fraction", cfg.floor_fraction},
                     {"max_kicks", kicks}};
        result.report = j.dump(2) + "\n";
    } else {
        char buf[1024];
        std::snprintf(buf, sizeof buf,
                      "wavelength      %.6g m\n"
                      "focal length    %.6g m\n"
                      "alpha           %.6g rad\n"
                      "nu              %.6g 1/m\n"
                      "f' = f sin a    %.6g m\n"
                      "hbar_eff        %.6g\n"
                      "lens spacing z  %.6g m\n"
                      "stage rotation  %.6g rad\n"
                      "max kicks       %ld  (t_o=%.4g, t_l=%.4g, t_SLM=%.4g, floor=%.3g)\n",
                      design.wavelength, design.focal, design.alpha, nu,
                      design.f_prime(), hbar_eff, z,
                      rotation_angle_of(stage.m), kicks, cfg.loss.t_o,
                      cfg.loss.t_l, cfg.loss.t_slm, cfg.floor_fraction);
        result.report = buf;
    }
}

}  // namespace detail

inline RunResult run_experiment(const ExperimentConfig& cfg) {
    KhoParams par = detail::params_of(cfg);
    par.validate();
    if (cfg.n_steps < 0) throw config_error("n must be >= 0");

    RunResult result;
    if (cfg.kind != ExperimentKind::params) {
        std::error_code ec;
        std::filesystem::create_directories(cfg.out_dir, ec);
        if (ec) throw io_error("cannot create output dir: " + cfg.out_dir.string());
    }

    switch (cfg.kind) {
        case ExperimentKind::evolve: detail::run_evolve(cfg, result); break;
        case ExperimentKind::wigner: detail::run_wigner(cfg, result); break;
        case ExperimentKind::web: detail::run_web(cfg, result); break;
        case ExperimentKind::manifold: detail::run_manifold(cfg, result); break;
        case ExperimentKind::purity: detail::run_purity(cfg, result); break;
        case ExperimentKind::params: detail::run_params_report(cfg, result); break;
    }
    return result;
}

}  // namespace kho
