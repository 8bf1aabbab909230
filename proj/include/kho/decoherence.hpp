#pragma once

#include <cmath>
#include <functional>
#include <future>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "kho/core.hpp"
#include "kho/propagators.hpp"

// Qubit dephasing by the kicked oscillator acting as an environment.
//
// A polarization qubit prepared in the equatorial state rides along two
// conditional evolutions of the same spatial state: the kicked map on one
// component, the bare harmonic rotation on the other.  Tracing out the
// spatial state leaves
//
//   rho = 1/2 [[1, f], [conj(f), 1]],   f(n) = <SHO^n psi | KHO^n psi>,
//
// so the populations stay exactly 1/2 and the purity is (1 + |f|^2)/2.

namespace kho {

/// 2x2 Hermitian density matrix in the {H, V} basis.
struct QubitState {
    double hh = 1.0, vv = 0.0;
    complex hv = 0.0;  // vh = conj(hv)

    double trace() const { return hh + vv; }
    double purity() const { return hh * hh + vv * vv + 2.0 * std::norm(hv); }

    // eigenvalues of a 2x2 Hermitian matrix
    std::pair<double, double> eigenvalues() const {
        const double mean = 0.5 * (hh + vv);
        const double r = std::hypot(0.5 * (hh - vv), std::abs(hv));
        return {mean - r, mean + r};
    }
};

/// Fidelity amplitude f(n) between the perturbed and unperturbed branches;
/// f(0) = 1 and |f| <= 1.
inline complex fidelity_amplitude(const QuantumState& initial,
                                  const KhoParams& par, int n) {
    if (n < 0) throw error("fidelity_amplitude: n must be >= 0");
    const QuantumState sho = sho_evolve(initial, par.alpha, n);
    const QuantumState kho = kho_evolve(initial, par, n).back();
    return inner_product(sho, kho);
}

/// Dephasing channel on an equatorial qubit (default |+>, azimuth chi about
/// the Bloch equator).
inline QubitState dephase_qubit(const QuantumState& initial,
                                const KhoParams& par, int n,
                                double azimuth = 0.0) {
    const complex f = fidelity_amplitude(initial, par, n);
    QubitState rho;
    rho.hh = rho.vv = 0.5;
    rho.hv = 0.5 * f * complex(std::cos(azimuth), -std::sin(azimuth));
    return rho;
}

struct PurityPoint {
    int n = 0;
    double purity = 1.0;
    complex f = 1.0;
};

struct PurityCurve {
    KhoParams params;
    std::vector<PurityPoint> points;  // n = 0 .. n_max
};

/// Both branches advanced kick by kick; O(n) evolutions total.
inline PurityCurve purity_curve(const QuantumState& initial,
                                const KhoParams& par, int n_max) {
    if (n_max < 0) throw error("purity_curve: n_max must be >= 0");
    PurityCurve curve;
    curve.params = par;
    QuantumState sho = initial;
    QuantumState kho = initial;
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) {
            sho = apply_rotation(sho, par.alpha);
            kho = kho_step(kho, par);
        }
        const complex f = inner_product(sho, kho);
        curve.points.push_back({n, 0.5 * (1.0 + std::norm(f)), f});
    }
    return curve;
}

struct SweepCell {
    KhoParams params;
    std::optional<PurityCurve> curve;
    std::string error_message;  // set when the cell failed
};

/// Purity curves for every (K, hbar_eff) pair.  Each cell gets its own grid
/// sized for its hbar_eff; a cell that fails is reported and the sweep
/// continues.  Cells are independent and run concurrently.
inline std::vector<SweepCell> purity_sweep(const GaussianSpec& g,
                                           const KhoParams& base, int n_max,
                                           const std::vector<double>& hbar_list,
                                           const std::vector<double>& kick_list,
                                           int n_points_override = 0,
                                           double q_max_override = 0.0) {
    if (hbar_list.empty() || kick_list.empty())
        throw error("purity_sweep: empty parameter list");
    std::vector<SweepCell> cells;
    for (double kick : kick_list)
        for (double hbar : hbar_list) {
            KhoParams par = base;
            par.kick = kick;
            par.hbar = hbar;
            cells.push_back(SweepCell{par, std::nullopt, {}});
        }

    auto run_cell = [&](SweepCell& cell) {
        try {
            cell.params.validate();
            const GridSpec grid = suggest_grid(cell.params, g, n_max,
                                               n_points_override, q_max_override);
            const QuantumState psi = prepare_gaussian(g, grid);
            cell.curve = purity_curve(psi, cell.params, n_max);
        } catch (const std::exception& e) {
            cell.error_message = e.what();
        }
    };

    std::vector<std::future<void>> jobs;
    jobs.reserve(cells.size());
    for (auto& cell : cells)
        jobs.push_back(std::async(std::launch::async, run_cell, std::ref(cell)));
    for (auto& j : jobs) j.get();
    return cells;
}

/// Tomography by linear inversion from the six projective intensities,
/// with optional relative Gaussian noise and a positivity projection.
struct TomographyResult {
    QubitState rho;
    bool clipped = false;  // reconstruction hit the positivity boundary
};

inline TomographyResult simulate_tomography(const QubitState& rho,
                                            double shot_noise = 0.0,
                                            unsigned long seed = 0) {
    // H, V, diagonal, antidiagonal, right/left circular projections
    const double half = 0.5 * (rho.hh + rho.vv);
    double ih = rho.hh;
    double iv = rho.vv;
    double id = half + rho.hv.real();
    double ia = half - rho.hv.real();
    double ir = half + rho.hv.imag();
    double il = half - rho.hv.imag();

    if (shot_noise > 0.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> g;
        for (double* v : {&ih, &iv, &id, &ia, &ir, &il})
            *v = std::max(0.0, *v * (1.0 + shot_noise * g(rng)));
    }

    const double total = ih + iv;
    if (!(total > 0.0)) throw error("simulate_tomography: zero total intensity");

    QubitState rec;
    rec.hh = ih / total;
    rec.vv = iv / total;
    rec.hv = complex((id - ia) / (2.0 * total), (ir - il) / (2.0 * total));

    // positivity projection: clip the negative eigenvalue, renormalize the
    // trace (which leaves the projector onto the positive eigenvector)
    TomographyResult out{rec, false};
    if (rec.eigenvalues().first < 0.0) {
        out.clipped = true;
        const double dz = 0.5 * (rec.hh - rec.vv);
        const double r = std::hypot(dz, std::abs(rec.hv));
        out.rho.hh = 0.5 * (1.0 + dz / r);
        out.rho.vv = 0.5 * (1.0 - dz / r);
        out.rho.hv = 0.5 * rec.hv / r;
    }
    return out;
}

}  // namespace kho
