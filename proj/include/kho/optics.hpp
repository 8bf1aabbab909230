#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "kho/errors.hpp"
#include "kho/linear_map.hpp"

// Design-formula calculators bridging bench parameters (wavelength, focal
// length, kick spatial frequency) to the dimensionless simulation
// parameters, plus the transmission budget that limits the kick count.
//
// Ray-transfer matrices act on columns (x, theta).  A fractional Fourier
// stage of order alpha is free space z_alpha, a thin lens f, free space
// z_alpha again, with z_alpha = 2 f sin^2(alpha/2); it composes to the
// scaled rotation [[cos a, f' sin a], [-sin a / f', cos a]], f' = f sin a.

namespace kho {

struct OpticalDesign {
    double wavelength = 0.0;  // meters
    double focal = 0.0;       // meters
    double alpha = 0.0;       // radians, in (0, pi) for a single-lens stage
    double nu = 0.0;          // kick spatial frequency, 1/meters

    double f_prime() const { return focal * std::sin(alpha); }
    double wavenumber() const { return 2.0 * std::numbers::pi / wavelength; }

    void validate() const {
        if (!(wavelength > 0.0) || !(focal > 0.0) || !(nu > 0.0))
            throw error("OpticalDesign: physical quantities must be > 0");
        if (!(alpha > 0.0 && alpha < std::numbers::pi))
            throw error("OpticalDesign: alpha must lie in (0, pi)");
    }
};

/// hbar_eff = nu^2 f' / k = nu^2 f sin(alpha) lambda / (2 pi).
inline double hbar_eff_from_optics(const OpticalDesign& d) {
    d.validate();
    return d.nu * d.nu * d.f_prime() / d.wavenumber();
}

/// Kick spatial frequency required to hit a target hbar_eff.
inline double nu_for_hbar(double wavelength, double focal, double alpha,
                          double hbar_target) {
    OpticalDesign probe{wavelength, focal, alpha, 1.0};
    probe.validate();
    if (!(hbar_target > 0.0)) throw error("nu_for_hbar: target must be > 0");
    return std::sqrt(hbar_target * probe.wavenumber() / probe.f_prime());
}

/// Free-space distance on either side of the lens: z = 2 f sin^2(alpha/2).
inline double lens_spacing(double focal, double alpha) {
    if (!(focal > 0.0)) throw error("lens_spacing: focal must be > 0");
    const double s = std::sin(0.5 * alpha);
    return 2.0 * focal * s * s;
}

struct LossModel {
    double t_o = 1.0;    // elements outside the loop
    double t_l = 1.0;    // lenses and mirrors per kick
    double t_slm = 1.0;  // modulator per kick
    double i_in = 1.0;   // input intensity, arbitrary units

    void validate() const {
        for (double t : {t_o, t_l, t_slm})
            if (!(t > 0.0 && t <= 1.0))
                throw error("LossModel: transmissions must lie in (0, 1]");
    }
};

/// I_out = I_in t_o (t_l t_SLM)^n.
inline double loss_budget(const LossModel& m, int n) {
    m.validate();
    if (n < 0) throw error("loss_budget: n must be >= 0");
    return m.i_in * m.t_o * std::pow(m.t_l * m.t_slm, n);
}

/// Largest n with I_out / I_in >= floor_fraction; -1 if even n = 0 fails.
inline long max_kicks(const LossModel& m, double floor_fraction) {
    m.validate();
    if (!(floor_fraction > 0.0 && floor_fraction < 1.0))
        throw error("max_kicks: floor_fraction must lie in (0, 1)");
    if (m.t_o < floor_fraction) return -1;
    const double per_pass = m.t_l * m.t_slm;
    if (per_pass >= 1.0) return std::numeric_limits<long>::max();
    // closed form, then exact integer adjustment against log roundoff
    long n = static_cast<long>(
        std::floor(std::log(floor_fraction / m.t_o) / std::log(per_pass)));
    n = std::max(n, 0L);
    while (m.t_o * std::pow(per_pass, n) < floor_fraction) --n;
    while (m.t_o * std::pow(per_pass, n + 1) >= floor_fraction) ++n;
    return n;
}

inline Mat2 ray_free_space(double z) { return Mat2{1.0, z, 0.0, 1.0}; }

inline Mat2 ray_thin_lens(double focal) {
    if (focal == 0.0) throw error("ray_thin_lens: focal must be nonzero");
    return Mat2{1.0, 0.0, -1.0 / focal, 1.0};
}

/// Ordered product of ray matrices: stages[0] is traversed first.
inline LinearPhaseSpaceMap compose_abcd(const std::vector<Mat2>& stages) {
    Mat2 total;
    for (const Mat2& m : stages) {
        if (m.det() == 0.0) throw error("compose_abcd: singular stage");
        total = m * total;
    }
    return LinearPhaseSpaceMap{total};
}

/// Elements of one fractional Fourier stage of order alpha, in path order.
inline std::vector<Mat2> frft_stage(double focal, double alpha) {
    const double z = lens_spacing(focal, alpha);
    return {ray_free_space(z), ray_thin_lens(focal), ray_free_space(z)};
}

/// Two consecutive stages of order alpha/2; same rotation angle as a single
/// stage of order alpha, but scaled by f sin(alpha/2) instead of f sin(alpha).
inline std::vector<Mat2> frft_double_stage(double focal, double alpha) {
    auto first = frft_stage(focal, 0.5 * alpha);
    auto second = frft_stage(focal, 0.5 * alpha);
    first.insert(first.end(), second.begin(), second.end());
    return first;
}

/// [[cos a, f' sin a], [-sin a / f', cos a]] on ray columns (x, theta).
inline Mat2 scaled_rotation(double alpha, double f_prime) {
    const double c = std::cos(alpha), s = std::sin(alpha);
    return Mat2{c, f_prime * s, -s / f_prime, c};
}

/// Rotation angle realized by an ABCD map that is a scaled rotation.
inline double rotation_angle_of(const Mat2& m) {
    if (std::abs(m.a - m.d) > 1e-9 * (std::abs(m.a) + std::abs(m.d) + 1.0))
        throw error("rotation_angle_of: not a scaled rotation");
    const double s = std::sqrt(std::max(0.0, -m.b * m.c));
    return std::atan2(m.b >= 0.0 ? s : -s, m.a);
}

}  // namespace kho
