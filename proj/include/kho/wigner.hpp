#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "kho/core.hpp"
#include "kho/linear_map.hpp"

// Wigner distribution of grid states:
//
//   W(Q,P) = 1/(2 pi hbar) Int psi(Q + s/2) conj(psi(Q - s/2)) e^{-i P s / hbar} ds
//
// evaluated without interpolation: the state is band-limited on its grid, so
// its half-step samples follow exactly from zero-embedding the spectrum on a
// doubled grid.  Each Q-row is then an autocorrelation at offsets s = m dq
// followed by one centered DFT, which lands on the conjugate momentum grid
// of the state.  The Q-marginal identity sum_P W dp = |psi(Q)|^2 is exact in
// this scheme.

namespace kho {

struct WignerGrid {
    std::vector<double> values;  // row-major, [iq * np + ip]
    std::vector<double> q_axis;
    std::vector<double> p_axis;
    double hbar = 0.0;

    int nq() const { return static_cast<int>(q_axis.size()); }
    int np() const { return static_cast<int>(p_axis.size()); }
    double dq() const { return q_axis[1] - q_axis[0]; }
    double dp() const { return p_axis[1] - p_axis[0]; }
    double at(int iq, int ip) const { return values[iq * np() + ip]; }
    double& at(int iq, int ip) { return values[iq * np() + ip]; }

    double integral() const {
        double acc = 0.0;
        for (double v : values) acc += v;
        return acc * dq() * dp();
    }
};

/// Exact band-limited upsampling to a grid with twice the points, same span.
inline cvec upsample_twice(const QuantumState& s) {
    const int n = s.grid.n;
    cvec spec = fft::centered_forward(s.amp, 1.0);
    cvec fine_spec(2 * n, complex(0.0));
    for (int k = 0; k < n; ++k) fine_spec[k + n / 2] = spec[k];
    // scale 1/n makes the even fine nodes reproduce the original samples
    return fft::centered_inverse(std::move(fine_spec), 1.0 / n);
}

inline WignerGrid wigner_transform(const QuantumState& s) {
    const int n = s.grid.n;
    const double hbar = s.hbar();
    const cvec fine = upsample_twice(s);

    WignerGrid w;
    w.hbar = hbar;
    w.q_axis.resize(n);
    w.p_axis.resize(n);
    for (int j = 0; j < n; ++j) w.q_axis[j] = s.grid.q(j);
    for (int k = 0; k < n; ++k) w.p_axis[k] = s.grid.p(k);
    w.values.assign(static_cast<std::size_t>(n) * n, 0.0);

    const double scale = s.grid.dq() / (2.0 * pi * hbar);
    cvec row(n);
    for (int j = 0; j < n; ++j) {
        const int center = 2 * j;
        for (int m = -n / 2; m < n / 2; ++m) {
            const int lo = center - m, hi = center + m;
            complex c = 0.0;
            if (lo >= 0 && lo < 2 * n && hi >= 0 && hi < 2 * n)
                c = fine[hi] * std::conj(fine[lo]);
            row[m + n / 2] = c;
        }
        cvec out = fft::centered_forward(row, scale);
        for (int k = 0; k < n; ++k) w.values[j * n + k] = out[k].real();
    }
    return w;
}

inline std::vector<double> q_marginal(const WignerGrid& w) {
    std::vector<double> m(w.nq(), 0.0);
    for (int j = 0; j < w.nq(); ++j) {
        double acc = 0.0;
        for (int k = 0; k < w.np(); ++k) acc += w.at(j, k);
        m[j] = acc * w.dp();
    }
    return m;
}

inline std::vector<double> p_marginal(const WignerGrid& w) {
    std::vector<double> m(w.np(), 0.0);
    for (int k = 0; k < w.np(); ++k) {
        double acc = 0.0;
        for (int j = 0; j < w.nq(); ++j) acc += w.at(j, k);
        m[k] = acc * w.dq();
    }
    return m;
}

/// Integral of the negative part, a standard nonclassicality measure.
inline double negativity_volume(const WignerGrid& w) {
    double acc = 0.0;
    for (double v : w.values)
        if (v < 0.0) acc -= v;
    return acc * w.dq() * w.dp();
}

/// Resample under the coordinate map W'(z) = W(E z)/|det E| (bilinear),
/// then renormalize to unit integral.
inline WignerGrid apply_linear_map(const WignerGrid& w,
                                   const LinearPhaseSpaceMap& map) {
    const double det = map.det();
    if (std::abs(det) < 1e-300)
        throw error("apply_linear_map: singular matrix");

    WignerGrid out = w;
    const double q0 = w.q_axis.front(), p0 = w.p_axis.front();
    const double idq = 1.0 / w.dq(), idp = 1.0 / w.dp();
    for (int j = 0; j < w.nq(); ++j) {
        for (int k = 0; k < w.np(); ++k) {
            const auto src = map.m.apply(w.q_axis[j], w.p_axis[k]);
            const double fq = (src[0] - q0) * idq;
            const double fp = (src[1] - p0) * idp;
            int iq = static_cast<int>(std::floor(fq));
            int ip = static_cast<int>(std::floor(fp));
            double tq = fq - iq, tp = fp - ip;
            // top edge counts as interior so the identity map is exact
            if (iq == w.nq() - 1 && tq < 1e-12) { --iq; tq = 1.0; }
            if (ip == w.np() - 1 && tp < 1e-12) { --ip; tp = 1.0; }
            double v = 0.0;
            if (iq >= 0 && iq + 1 < w.nq() && ip >= 0 && ip + 1 < w.np()) {
                v = (1 - tq) * (1 - tp) * w.at(iq, ip) +
                    tq * (1 - tp) * w.at(iq + 1, ip) +
                    (1 - tq) * tp * w.at(iq, ip + 1) +
                    tq * tp * w.at(iq + 1, ip + 1);
            }
            out.at(j, k) = v / std::abs(det);
        }
    }
    const double total = out.integral();
    if (std::abs(total) < 1e-12)
        throw error("apply_linear_map: map moved all mass off the grid");
    for (double& v : out.values) v /= total;
    return out;
}

/// Smallest resolved oscillation of W, as an area in (Q, P) units, or
/// nothing when no fringe is detected.
///
/// The statistic is the support radius kappa* of the 2-D spectrum |FT W| at
/// the relative level `rel_threshold`, compared against the support
/// kappa_ref that a structureless envelope with the same second moments
/// would have (a Gaussian of widths (dQ, dP) has spectrum support
/// sqrt(2 ln(1/theta)) / min(dQ, dP)).  A fringe is declared only when
/// kappa* exceeds `margin` times kappa_ref; the fringe frequency is then
/// kappa* - kappa_ref, which removes the envelope-lobe broadening of the
/// level set.  The constant is calibrated on the two-Gaussian superposition,
/// whose analytic fringe wavelength is pi hbar / d for centers at (+-d, 0).
inline std::optional<double> fringe_scale(const WignerGrid& w,
                                          double rel_threshold = 1e-2,
                                          double margin = 1.5) {
    const int nq = w.nq(), np = w.np();

    // narrowest principal width of the positive part of W
    double mass = 0, q1 = 0, q2 = 0, p1 = 0, p2 = 0, qp = 0;
    for (int j = 0; j < nq; ++j)
        for (int k = 0; k < np; ++k) {
            const double v = std::max(0.0, w.at(j, k));
            mass += v;
            q1 += v * w.q_axis[j];
            q2 += v * w.q_axis[j] * w.q_axis[j];
            p1 += v * w.p_axis[k];
            p2 += v * w.p_axis[k] * w.p_axis[k];
            qp += v * w.q_axis[j] * w.p_axis[k];
        }
    if (!(mass > 0.0)) return std::nullopt;
    q1 /= mass; q2 /= mass; p1 /= mass; p2 /= mass; qp /= mass;
    const double vq = q2 - q1 * q1, vp = p2 - p1 * p1, cqp = qp - q1 * p1;
    const double lam_min =
        0.5 * (vq + vp) - std::hypot(0.5 * (vq - vp), cqp);
    const double width_min = std::sqrt(std::max(1e-300, lam_min));

    // 2-D centered spectrum magnitudes
    std::vector<complex> stage(static_cast<std::size_t>(nq) * np);
    cvec buf(np);
    for (int j = 0; j < nq; ++j) {
        for (int k = 0; k < np; ++k) buf[k] = w.at(j, k);
        cvec out = fft::centered_forward(buf, 1.0);
        for (int k = 0; k < np; ++k) stage[j * np + k] = out[k];
    }
    std::vector<double> mag(static_cast<std::size_t>(nq) * np, 0.0);
    cvec col(nq);
    for (int k = 0; k < np; ++k) {
        for (int j = 0; j < nq; ++j) col[j] = stage[j * np + k];
        cvec out = fft::centered_forward(col, 1.0);
        for (int j = 0; j < nq; ++j) mag[j * np + k] = std::abs(out[j]);
    }

    const double du = 2.0 * pi / (nq * w.dq());
    const double dv = 2.0 * pi / (np * w.dp());
    double m0 = 0.0, kappa_star = 0.0;
    for (int j = 0; j < nq; ++j)
        for (int k = 0; k < np; ++k) m0 = std::max(m0, mag[j * np + k]);
    if (!(m0 > 0.0)) return std::nullopt;
    for (int j = 0; j < nq; ++j)
        for (int k = 0; k < np; ++k)
            if (mag[j * np + k] >= rel_threshold * m0)
                kappa_star = std::max(
                    kappa_star, std::hypot((j - nq / 2) * du, (k - np / 2) * dv));

    const double kappa_ref =
        std::sqrt(2.0 * std::log(1.0 / rel_threshold)) / width_min;
    if (kappa_star <= margin * kappa_ref) return std::nullopt;

    const double wavelength = 2.0 * pi / (kappa_star - kappa_ref);
    return wavelength * wavelength;
}

}  // namespace kho
