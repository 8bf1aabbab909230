#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "kho/errors.hpp"
#include "kho/fft.hpp"

// Grids, quantum state representation, Gaussian preparation and observables.
//
// A state is a vector of point samples psi(Q_j) on a uniform grid symmetric
// about the origin, with quadrature weight dq: <a|b> = sum conj(a_j) b_j dq.
// The conjugate momentum grid satisfies dp dq N = 2 pi hbar_eff.

namespace kho {

inline constexpr double pi = std::numbers::pi;

using complex = std::complex<double>;
using cvec = std::vector<complex>;

/// Uniform position grid on [-q_max, q_max), even point count, node at Q=0.
struct GridSpec {
    int n = 0;
    double q_max = 0.0;
    double hbar = 0.0;

    double dq() const { return 2.0 * q_max / n; }
    double dp() const { return 2.0 * pi * hbar / (n * dq()); }
    double p_max() const { return 0.5 * n * dp(); }
    double q(int j) const { return (j - n / 2) * dq(); }
    double p(int k) const { return (k - n / 2) * dp(); }

    friend bool operator==(const GridSpec& a, const GridSpec& b) {
        return a.n == b.n && a.q_max == b.q_max && a.hbar == b.hbar;
    }
};

inline GridSpec make_grid(int n_points, double q_max, double hbar_eff) {
    if (n_points < 2) throw grid_error("make_grid: n_points must be >= 2");
    if (n_points % 2 != 0) throw grid_error("make_grid: n_points must be even");
    if (!(q_max > 0.0)) throw grid_error("make_grid: q_max must be > 0");
    if (!(hbar_eff > 0.0)) throw grid_error("make_grid: hbar_eff must be > 0");
    return GridSpec{n_points, q_max, hbar_eff};
}

/// One Floquet step: kick of strength K and phase phi, then rotation alpha.
/// kick_sign flips the sign convention of the kick exponent (the magnitude
/// observables are insensitive to it; +1 gives exp(-i K cos(Q+phi)/hbar)).
struct KhoParams {
    double kick = 0.0;   // K >= 0
    double alpha = 0.0;  // rotation angle per step, radians
    double phi = 0.0;    // kick phase, radians
    double hbar = 1.0;   // effective Planck constant > 0
    int kick_sign = +1;

    void validate() const {
        if (!(hbar > 0.0)) throw error("KhoParams: hbar_eff must be > 0");
        if (kick < 0.0) throw error("KhoParams: K must be >= 0");
        if (kick_sign != 1 && kick_sign != -1)
            throw error("KhoParams: kick_sign must be +1 or -1");
    }
};

/// Squeezed Gaussian: center (q0, p0), Q-width ratio `squeeze` relative to
/// the symmetric minimum-uncertainty state, squeeze axes tilted by `tilt`.
struct GaussianSpec {
    double q0 = 0.0;
    double p0 = 0.0;
    double squeeze = 1.0;
    double tilt = 0.0;
};

struct QuantumState {
    GridSpec grid;
    cvec amp;  // point samples psi(Q_j)

    double hbar() const { return grid.hbar; }
    int size() const { return grid.n; }
};

struct Moments {
    double mean_q = 0, mean_p = 0;
    double var_q = 0, var_p = 0;
    double energy = 0;  // (<Q^2> + <P^2>)/2
};

inline double norm_squared(const QuantumState& s) {
    double acc = 0.0;
    for (const auto& a : s.amp) acc += std::norm(a);
    return acc * s.grid.dq();
}

inline double state_norm(const QuantumState& s) { return std::sqrt(norm_squared(s)); }

inline void normalize(QuantumState& s) {
    double n = state_norm(s);
    if (!(n > 0.0)) throw error("normalize: state has zero norm");
    for (auto& a : s.amp) a /= n;
}

/// Probability mass on the outer 2% of nodes (1% per side); aliasing guard.
inline double boundary_mass(const QuantumState& s) {
    const int n = s.grid.n;
    const int m = std::max(1, n / 100);
    double acc = 0.0;
    for (int j = 0; j < m; ++j) acc += std::norm(s.amp[j]);
    for (int j = n - m; j < n; ++j) acc += std::norm(s.amp[j]);
    return acc * s.grid.dq();
}

inline constexpr double boundary_mass_limit = 1e-10;

/// Momentum representation on the conjugate grid, unitary:
/// sum |psi~_k|^2 dp == sum |psi_j|^2 dq.
inline cvec to_momentum(const QuantumState& s) {
    const double scale = s.grid.dq() / std::sqrt(2.0 * pi * s.hbar());
    return fft::centered_forward(s.amp, scale);
}

inline QuantumState from_momentum(const GridSpec& grid, cvec psi_p) {
    const double scale = grid.dp() / std::sqrt(2.0 * pi * grid.hbar);
    return QuantumState{grid, fft::centered_inverse(std::move(psi_p), scale)};
}

/// Mass on the outer 2% of momentum nodes.
inline double momentum_boundary_mass(const GridSpec& grid, const cvec& psi_p) {
    const int n = grid.n;
    const int m = std::max(1, n / 100);
    double acc = 0.0;
    for (int k = 0; k < m; ++k) acc += std::norm(psi_p[k]);
    for (int k = n - m; k < n; ++k) acc += std::norm(psi_p[k]);
    return acc * grid.dp();
}

inline QuantumState prepare_gaussian(const GaussianSpec& g, const GridSpec& grid) {
    if (!(g.squeeze > 0.0)) throw error("prepare_gaussian: squeeze must be > 0");
    const double hbar = grid.hbar;
    // Wigner covariance of the tilted squeezed state, then the complex width
    // A of psi ~ exp(-A (Q-q0)^2 / (2 hbar)):  Re A = hbar/(2 S_qq),
    // Im A = -S_qp / S_qq  (pure-state relation fixes S_pp).
    const double c = std::cos(g.tilt), s = std::sin(g.tilt);
    const double vmaj = g.squeeze * g.squeeze * hbar / 2.0;
    const double vmin = hbar / (2.0 * g.squeeze * g.squeeze);
    const double s_qq = c * c * vmaj + s * s * vmin;
    const double s_qp = c * s * (vmaj - vmin);
    const complex width(hbar / (2.0 * s_qq), -s_qp / s_qq);

    QuantumState psi{grid, cvec(grid.n)};
    for (int j = 0; j < grid.n; ++j) {
        const double x = grid.q(j) - g.q0;
        psi.amp[j] = std::exp(-width * (x * x) / (2.0 * hbar) +
                              complex(0.0, g.p0 * x / hbar));
    }
    normalize(psi);
    if (boundary_mass(psi) >= boundary_mass_limit)
        throw grid_overflow_error("prepare_gaussian: state does not fit the grid");
    return psi;
}

namespace detail {

inline int next_pow2(long x) {
    int n = 2;
    while (n < x) n *= 2;
    return n;
}

/// Largest position-chirp rate tan(theta/2) used by the factorized rotation
/// stages for this angle; the momentum grid must absorb rate * support.
inline double rotation_chirp_bound(double alpha) {
    const double a = std::abs(std::remainder(alpha, 2.0 * pi));
    if (a < 1e-14 || std::abs(a - pi) < 1e-14) return 0.0;
    if (std::abs(std::sin(a)) >= 0.5) return std::abs(std::tan(0.5 * a));
    if (a > 0.5 * pi) return std::abs(std::tan(0.25 * a));
    return std::abs(std::tan(0.5 * (0.5 * a + pi / 3.0)));
}

}  // namespace detail

/// Pick a grid large and fine enough for n_steps of the map applied to the
/// given initial Gaussian.  The reach estimate grows by ~K per kick plus a
/// one-off quantum tail term: the kick populates momentum rungs spaced
/// hbar_eff with Bessel weights, whose 1e-12 tail extends several rungs past
/// the classical bound K.  The sampling must resolve the narrow Gaussian
/// axis, the kick phase and the rotation chirps.  Either override pins that
/// quantity.
inline GridSpec suggest_grid(const KhoParams& par, const GaussianSpec& g,
                             int n_steps, int n_points_override = 0,
                             double q_max_override = 0.0) {
    par.validate();
    if (!(g.squeeze > 0.0)) throw error("suggest_grid: squeeze must be > 0");
    const double sig_min = std::sqrt(par.hbar / 2.0) / std::max(g.squeeze, 1.0 / g.squeeze);
    const double sig_max = std::sqrt(par.hbar / 2.0) * std::max(g.squeeze, 1.0 / g.squeeze);
    const double rung_tail =
        par.kick > 0.0
            ? 8.0 * par.hbar * std::max(1.0, std::cbrt(par.kick / par.hbar))
            : 0.0;
    const double reach = std::hypot(g.q0, g.p0) + 6.0 * sig_max +
                         n_steps * par.kick + rung_tail + 2.0;

    const double q_max =
        q_max_override > 0.0 ? q_max_override : std::max(20.0, 1.5 * reach);

    if (n_points_override > 0) return make_grid(n_points_override, q_max, par.hbar);

    double dq_need = sig_min / 8.0;
    if (par.kick > 0.0)
        dq_need = std::min(dq_need, pi * par.hbar / (4.0 * par.kick));
    const double p_need =
        reach * (1.2 + detail::rotation_chirp_bound(par.alpha)) + 2.0;
    dq_need = std::min(dq_need, pi * par.hbar / p_need);

    const long n_raw = static_cast<long>(std::ceil(2.0 * q_max / dq_need));
    const int n = std::max(1024, detail::next_pow2(n_raw));
    if (n > (1 << 22))
        throw grid_error("suggest_grid: parameters need an unreasonably large grid");
    return make_grid(n, q_max, par.hbar);
}

inline void require_same_grid(const QuantumState& a, const QuantumState& b,
                              const char* who) {
    if (!(a.grid == b.grid))
        throw grid_error(std::string(who) + ": grids or hbar_eff differ");
}

/// Discrete <a|b> = sum conj(a_j) b_j dq.
inline complex inner_product(const QuantumState& a, const QuantumState& b) {
    require_same_grid(a, b, "inner_product");
    complex acc = 0.0;
    for (int j = 0; j < a.grid.n; ++j) acc += std::conj(a.amp[j]) * b.amp[j];
    return acc * a.grid.dq();
}

/// |<a|b>| for unit-normalized inputs.
inline double fidelity(const QuantumState& a, const QuantumState& b) {
    return std::abs(inner_product(a, b));
}

/// Position moments from the samples, momentum moments from the conjugate
/// representation; energy is (<Q^2>+<P^2>)/2.
inline Moments expectations(const QuantumState& s) {
    const double n2 = norm_squared(s);
    if (std::abs(n2 - 1.0) > 1e-8)
        throw error("expectations: state is not normalized");

    Moments m;
    double q1 = 0, q2 = 0;
    for (int j = 0; j < s.grid.n; ++j) {
        const double w = std::norm(s.amp[j]);
        const double q = s.grid.q(j);
        q1 += w * q;
        q2 += w * q * q;
    }
    q1 *= s.grid.dq();
    q2 *= s.grid.dq();

    const cvec psi_p = to_momentum(s);
    double p1 = 0, p2 = 0;
    for (int k = 0; k < s.grid.n; ++k) {
        const double w = std::norm(psi_p[k]);
        const double p = s.grid.p(k);
        p1 += w * p;
        p2 += w * p * p;
    }
    p1 *= s.grid.dp();
    p2 *= s.grid.dp();

    m.mean_q = q1;
    m.mean_p = p1;
    m.var_q = q2 - q1 * q1;
    m.var_p = p2 - p1 * p1;
    m.energy = 0.5 * (q2 + p2);
    return m;
}

}  // namespace kho
