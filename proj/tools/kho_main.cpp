// Command-line front end: named experiments of the kicked harmonic
// oscillator simulator.  Exit codes: 0 success, 2 configuration error,
// 3 numerical guard failure, 4 I/O error.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kho/experiments.hpp"
#include "kho/version.hpp"

namespace {

struct RawOptions {
    std::string alpha = "2pi/3";
    std::string phi = "0";
    std::string tilt = "0";
    std::vector<std::string> kicks;  // repeatable and comma-separable
    std::vector<std::string> hbars;
    std::vector<std::string> seeds;  // "q,p" pairs
    std::string correction;          // "a,b,c,d"
};

void add_common(CLI::App* cmd, kho::ExperimentConfig& cfg, RawOptions& raw) {
    cmd->set_config("--config")->configurable(false);
    cmd->allow_config_extras(false);
    cmd->add_option("--K", raw.kicks, "kick strength (repeatable or comma list)");
    cmd->add_option("--alpha", raw.alpha, "rotation per step; accepts pi fractions");
    cmd->add_option("--phi", raw.phi, "kick phase; accepts pi fractions");
    cmd->add_option("--hbar", raw.hbars, "effective Planck constant (list ok)");
    cmd->add_option("--kick-sign", cfg.kick_sign, "kick exponent sign, +1 or -1")
        ->check(CLI::IsMember({1, -1}));
    cmd->add_option("--n", cfg.n_steps, "number of map iterations")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--q0", cfg.gauss.q0, "initial center Q");
    cmd->add_option("--p0", cfg.gauss.p0, "initial center P");
    cmd->add_option("--squeeze", cfg.gauss.squeeze, "Q-width / symmetric width");
    cmd->add_option("--tilt", raw.tilt, "squeeze axis angle; accepts pi fractions");
    cmd->add_option("--n-points", cfg.n_points, "grid points (0 = auto)");
    cmd->add_option("--q-max", cfg.q_max, "grid half-width (0 = auto)");
    cmd->add_option("--out", cfg.out_dir, "output directory");
    cmd->add_option("--rng-seed", cfg.seed, "seed for Monte Carlo operations");
}

void resolve_common(kho::ExperimentConfig& cfg, const RawOptions& raw,
                    bool allow_lists) {
    cfg.alpha = kho::parse_angle(raw.alpha);
    cfg.phi = kho::parse_angle(raw.phi);
    cfg.gauss.tilt = kho::parse_angle(raw.tilt);

    auto expand = [](const std::vector<std::string>& items) {
        std::vector<double> vals;
        for (const auto& item : items)
            for (double v : kho::parse_double_list(item)) vals.push_back(v);
        return vals;
    };
    if (!raw.kicks.empty()) {
        cfg.kick_list = expand(raw.kicks);
        cfg.kick = cfg.kick_list.front();
    }
    if (!raw.hbars.empty()) {
        cfg.hbar_list = expand(raw.hbars);
        cfg.hbar = cfg.hbar_list.front();
    }
    if (!allow_lists &&
        (cfg.kick_list.size() > 1 || cfg.hbar_list.size() > 1))
        throw kho::config_error(
            "parameter lists are only supported by the purity sweep");

    for (const auto& s : raw.seeds) {
        const auto qp = kho::parse_double_list(s);
        if (qp.size() != 2)
            throw kho::config_error("--seed expects 'q,p', got '" + s + "'");
        cfg.extra_seeds.push_back({qp[0], qp[1]});
    }
    if (!raw.correction.empty()) {
        const auto m = kho::parse_double_list(raw.correction);
        if (m.size() != 4)
            throw kho::config_error("--correct expects 'a,b,c,d'");
        cfg.correction = kho::Mat2{m[0], m[1], m[2], m[3]};
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kicked harmonic oscillator simulator"};
    app.set_version_flag("--version", std::string("kho ") + kho::version);
    app.require_subcommand(1);

    kho::ExperimentConfig cfg;
    RawOptions raw;

    auto* evolve = app.add_subcommand("evolve", "iterate the map, write moments");
    add_common(evolve, cfg, raw);
    evolve->add_flag("--dump-state", cfg.dump_state, "also write final amplitudes");

    auto* wigner = app.add_subcommand("wigner", "Wigner function after n steps");
    add_common(wigner, cfg, raw);

    auto* web = app.add_subcommand("web", "classical stroboscopic portrait");
    add_common(web, cfg, raw);
    web->add_option("--iters", cfg.web_iters, "iterations per seed");
    web->add_option("--seed-radius", cfg.seed_radius, "radius of the seed ring");
    web->add_option("--seed", raw.seeds, "extra seed 'q,p' (repeatable)");

    auto* manifold = app.add_subcommand("manifold", "classically evolved skeleton");
    add_common(manifold, cfg, raw);
    manifold->add_option("--eps-ref", cfg.eps_ref, "refinement spacing");
    manifold->add_option("--point-cap", cfg.point_cap, "refinement point budget");
    manifold->add_option("--half-sigmas", cfg.axis_half_sigmas,
                         "initial segment half-length in major widths");
    manifold->add_option("--correct", raw.correction,
                         "linear coordinate correction 'a,b,c,d'");

    auto* purity = app.add_subcommand("purity", "qubit dephasing sweep");
    add_common(purity, cfg, raw);

    auto* params = app.add_subcommand("params", "optical design report");
    params->add_option("--lambda", cfg.wavelength, "wavelength [m]");
    params->add_option("--f", cfg.focal, "focal length [m]");
    params->add_option("--alpha", raw.alpha, "rotation per stage");
    params->add_option("--nu", cfg.nu, "kick spatial frequency [1/m]");
    params->add_option("--hbar-target", cfg.hbar_target, "solve nu for this hbar_eff");
    params->add_option("--t-o", cfg.loss.t_o, "transmission outside the loop");
    params->add_option("--t-l", cfg.loss.t_l, "lens/mirror transmission per kick");
    params->add_option("--t-slm", cfg.loss.t_slm, "modulator transmission per kick");
    params->add_option("--floor", cfg.floor_fraction, "intensity floor fraction");
    params->add_flag("--json", cfg.json_report, "machine-readable report");
    params->set_config("--config")->configurable(false);
    params->allow_config_extras(false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help, --version
        app.exit(e);
        return 2;
    }

    try {
        if (evolve->parsed()) cfg.kind = kho::ExperimentKind::evolve;
        if (wigner->parsed()) cfg.kind = kho::ExperimentKind::wigner;
        if (web->parsed()) cfg.kind = kho::ExperimentKind::web;
        if (manifold->parsed()) cfg.kind = kho::ExperimentKind::manifold;
        if (purity->parsed()) cfg.kind = kho::ExperimentKind::purity;
        if (params->parsed()) cfg.kind = kho::ExperimentKind::params;

        resolve_common(cfg, raw, cfg.kind == kho::ExperimentKind::purity);

        const kho::RunResult result = kho::run_experiment(cfg);
        if (!result.report.empty()) std::cout << result.report;
        for (const auto& f : result.files) std::cout << "wrote " << f.string() << "\n";
        return 0;
    } catch (const kho::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const kho::io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const kho::error& e) {
        std::cerr << "numerical guard: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
