#pragma once

#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "kho/errors.hpp"

// Centered discrete Fourier transforms for grids symmetric about the origin.
//
// Samples live at x_j = (j - N/2) dx.  The conjugate variable is sampled at
// u_k = (k - N/2) du with du = 2*pi / (N dx).  For even N the centering
// phases e^{i pi j} reduce to sign flips, so the transform is a plain FFT
// conjugated by (-1)^j checkerboards plus one global sign (-1)^{N/2}; no
// trigonometric twiddles beyond the FFT itself are evaluated.

namespace kho::fft {

using cvec = std::vector<std::complex<double>>;

namespace detail {

inline void plain_fft(cvec& data, bool inverse) {
    thread_local Eigen::FFT<double> engine;
    cvec out(data.size());
    if (inverse)
        engine.inv(out, data);  // includes the 1/N factor
    else
        engine.fwd(out, data);
    data.swap(out);
}

inline void require_even(std::size_t n) {
    if (n < 2 || n % 2 != 0)
        throw grid_error("centered transform needs an even number of samples");
}

}  // namespace detail

/// F_k = scale * sum_j f_j exp(-i x_j u_k), x_j = (j-N/2)dx, u_k = (k-N/2)du.
inline cvec centered_forward(cvec f, double scale) {
    detail::require_even(f.size());
    const std::size_t n = f.size();
    for (std::size_t j = 1; j < n; j += 2) f[j] = -f[j];
    detail::plain_fft(f, false);
    const double sign = (n / 2) % 2 == 0 ? 1.0 : -1.0;  // e^{-i pi N/2}
    for (std::size_t k = 0; k < n; ++k) {
        double s = (k % 2 == 0) ? sign : -sign;
        f[k] *= s * scale;
    }
    return f;
}

/// G_j = scale * sum_k F_k exp(+i x_j u_k); exact inverse of centered_forward
/// when scale_fwd * scale_inv * N == 1.
inline cvec centered_inverse(cvec F, double scale) {
    detail::require_even(F.size());
    const std::size_t n = F.size();
    for (std::size_t k = 1; k < n; k += 2) F[k] = -F[k];
    detail::plain_fft(F, true);
    const double sign = (n / 2) % 2 == 0 ? 1.0 : -1.0;
    const double total = sign * scale * static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = (j % 2 == 0) ? total : -total;
        F[j] *= s;
    }
    return F;
}

}  // namespace kho::fft
