#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "kho/core.hpp"

// The Floquet step U = R_alpha V_K on grid states.
//
// R_alpha is the harmonic rotation with number-basis eigenvalues
// e^{i alpha (k + 1/2)} (so R_{2pi} = -1), realized by the chirp
// factorization
//
//   R_alpha = C_q(tan(alpha/2)) F^-1 C_p(sin alpha) F C_q(tan(alpha/2)),
//
// where C_q(a) multiplies by exp(i a Q^2 / (2 hbar)) and C_p acts likewise
// in the momentum representation.  Every factor is unitary on the grid, so
// norm is preserved to roundoff, and the factorization carries the correct
// global phase with no extra constant.  tan(alpha/2) is singular at
// alpha = pi, hence the angle handling in apply_rotation.

namespace kho {

inline QuantumState apply_kick(const QuantumState& s, double kick_strength,
                               double phi, int kick_sign = +1) {
    if (kick_strength < 0.0) throw error("apply_kick: K must be >= 0");
    QuantumState out = s;
    const double rate = kick_sign * kick_strength / s.hbar();
    for (int j = 0; j < s.grid.n; ++j) {
        const double phase = -rate * std::cos(s.grid.q(j) + phi);
        out.amp[j] *= complex(std::cos(phase), std::sin(phase));
    }
    return out;
}

namespace detail {

inline void chirp_q(QuantumState& s, double a) {
    const double rate = a / (2.0 * s.hbar());
    for (int j = 0; j < s.grid.n; ++j) {
        const double q = s.grid.q(j);
        const double phase = rate * q * q;
        s.amp[j] *= complex(std::cos(phase), std::sin(phase));
    }
}

inline void chirp_p(const GridSpec& g, cvec& psi_p, double b) {
    const double rate = b / (2.0 * g.hbar);
    for (int k = 0; k < g.n; ++k) {
        const double p = g.p(k);
        const double phase = rate * p * p;
        psi_p[k] *= complex(std::cos(phase), std::sin(phase));
    }
}

/// One chirp-factorized rotation stage; valid away from alpha = pi (mod 2pi).
inline QuantumState rotation_stage(const QuantumState& s, double alpha) {
    const double a = std::tan(0.5 * alpha);
    const double b = std::sin(alpha);
    QuantumState out = s;
    chirp_q(out, a);
    cvec psi_p = to_momentum(out);
    if (momentum_boundary_mass(out.grid, psi_p) >= boundary_mass_limit)
        throw grid_overflow_error(
            "apply_rotation: momentum content reached the grid edge");
    chirp_p(out.grid, psi_p, b);
    out = from_momentum(out.grid, std::move(psi_p));
    chirp_q(out, a);
    return out;
}

/// psi(Q) -> psi(-Q) on the periodic grid (index 0 is its own mirror).
inline QuantumState parity_flip(const QuantumState& s) {
    QuantumState out = s;
    const int n = s.grid.n;
    for (int j = 0; j < n; ++j) out.amp[j] = s.amp[(n - j) % n];
    return out;
}

inline void scale_by(QuantumState& s, complex z) {
    for (auto& a : s.amp) a *= z;
}

}  // namespace detail

/// Harmonic rotation by alpha, including the e^{i alpha/2} zero-point phase.
/// Expectation values rotate by [[cos a, -sin a], [sin a, cos a]].
inline QuantumState apply_rotation(const QuantumState& s, double alpha) {
    // Reduce to (-pi, pi]; each removed full turn contributes R_{2pi} = -1.
    double a = std::remainder(alpha, 2.0 * pi);
    const double turns = std::round((alpha - a) / (2.0 * pi));
    complex phase = (std::fmod(std::abs(turns), 2.0) < 0.5) ? 1.0 : -1.0;

    constexpr double eps = 1e-14;
    if (std::abs(a) < eps) {
        QuantumState out = s;
        detail::scale_by(out, phase);
        return out;
    }
    if (std::abs(std::abs(a) - pi) < eps) {
        QuantumState out = detail::parity_flip(s);
        detail::scale_by(out, phase * complex(0.0, a > 0 ? 1.0 : -1.0));
        return out;
    }

    QuantumState out{s.grid, {}};
    if (std::abs(std::sin(a)) >= 0.5) {
        out = detail::rotation_stage(s, a);
    } else if (std::abs(a) > 0.5 * pi) {
        // near pi: two half-angle stages, each with |sin| >= sin(5pi/12)
        out = detail::rotation_stage(detail::rotation_stage(s, 0.5 * a), 0.5 * a);
    } else {
        // near 0: a symmetric pair a/2 +- pi/3, each with |sin| >= sin(pi/4)
        out = detail::rotation_stage(detail::rotation_stage(s, 0.5 * a - pi / 3.0),
                                     0.5 * a + pi / 3.0);
    }
    if (phase != complex(1.0)) detail::scale_by(out, phase);
    if (boundary_mass(out) >= boundary_mass_limit)
        throw grid_overflow_error("apply_rotation: state reached the grid edge");
    return out;
}

/// U = R_alpha V_K, kick first.
inline QuantumState kho_step(const QuantumState& s, const KhoParams& p) {
    p.validate();
    if (p.hbar != s.hbar())
        throw grid_error("kho_step: params.hbar differs from the state grid");
    return apply_rotation(apply_kick(s, p.kick, p.phi, p.kick_sign), p.alpha);
}

/// Snapshots [psi(0), U psi(0), ..., U^n psi(0)].
inline std::vector<QuantumState> kho_evolve(const QuantumState& s,
                                            const KhoParams& p, int n) {
    if (n < 0) throw error("kho_evolve: n must be >= 0");
    std::vector<QuantumState> snaps;
    snaps.reserve(n + 1);
    snaps.push_back(s);
    for (int step = 1; step <= n; ++step) {
        try {
            snaps.push_back(kho_step(snaps.back(), p));
        } catch (const grid_overflow_error& e) {
            throw grid_overflow_error(
                std::string("kho_evolve: overflow at step ") +
                    std::to_string(step) + ": " + e.what(),
                step);
        }
    }
    return snaps;
}

/// n harmonic rotations; equals apply_rotation(s, n * alpha) up to roundoff.
inline QuantumState sho_evolve(const QuantumState& s, double alpha, int n) {
    if (n < 0) throw error("sho_evolve: n must be >= 0");
    QuantumState out = s;
    for (int step = 0; step < n; ++step) out = apply_rotation(out, alpha);
    return out;
}

}  // namespace kho
