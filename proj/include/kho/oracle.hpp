#pragma once

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "kho/core.hpp"

// Independent validation path: dense-matrix evolution in the truncated
// number basis.  Q and P are the standard ladder combinations scaled so
// [Q, P] = i hbar_eff; the kick unitary is built by eigendecomposition of
// the Hermitian matrix Q + phi, the rotation is diagonal with entries
// e^{i alpha (k + 1/2)}.  Nothing here shares code with the grid
// propagators beyond the state type used for projection.

namespace kho {

struct FockOracle {
    int dim = 0;
    double hbar = 0.0;
    Eigen::MatrixXd q_op;        // position operator, real symmetric
    Eigen::MatrixXcd p_op;       // momentum operator, Hermitian
    Eigen::MatrixXcd rotation;   // R_alpha
    Eigen::MatrixXcd kick;       // V_K
    Eigen::MatrixXcd floquet;    // R_alpha V_K
};

inline FockOracle oracle_build(const KhoParams& params, int dim = 256) {
    params.validate();
    if (dim < 4) throw error("oracle_build: dim must be >= 4");
    const double hbar = params.hbar;

    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(dim, dim);
    const double r = std::sqrt(hbar / 2.0);
    for (int m = 0; m + 1 < dim; ++m) {
        const double t = r * std::sqrt(m + 1.0);
        q(m, m + 1) = q(m + 1, m) = t;
        p(m, m + 1) = complex(0.0, -t);
        p(m + 1, m) = complex(0.0, +t);
    }

    FockOracle o;
    o.dim = dim;
    o.hbar = hbar;
    o.q_op = q;
    o.p_op = p;

    // V_K = exp(-i sign K cos(Q + phi) / hbar) through the eigenbasis of Q+phi
    Eigen::MatrixXd shifted = q;
    shifted.diagonal().array() += params.phi;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(shifted);
    Eigen::VectorXcd kick_eigs(dim);
    for (int m = 0; m < dim; ++m) {
        const double phase =
            -params.kick_sign * params.kick * std::cos(eig.eigenvalues()(m)) / hbar;
        kick_eigs(m) = complex(std::cos(phase), std::sin(phase));
    }
    const Eigen::MatrixXcd vecs = eig.eigenvectors().cast<complex>();
    o.kick = vecs * kick_eigs.asDiagonal() * vecs.adjoint();

    Eigen::VectorXcd rot_eigs(dim);
    for (int k = 0; k < dim; ++k) {
        const double phase = params.alpha * (k + 0.5);
        rot_eigs(k) = complex(std::cos(phase), std::sin(phase));
    }
    o.rotation = Eigen::MatrixXcd(rot_eigs.asDiagonal());

    o.floquet = o.rotation * o.kick;
    return o;
}

namespace detail {

/// Tail population above 0.8*dim must stay below 1e-12.
inline void check_truncation(const Eigen::VectorXcd& c, int dim,
                             const char* who) {
    const int edge = static_cast<int>(0.8 * dim);
    double tail = 0.0;
    for (int k = edge; k < dim; ++k) tail += std::norm(c(k));
    if (tail >= 1e-12) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "%s: number-basis population above 0.8*dim is %.3e", who,
                      tail);
        throw truncation_error(buf);
    }
}

}  // namespace detail

inline Eigen::VectorXcd oracle_evolve(const FockOracle& o,
                                      const Eigen::VectorXcd& state, int n) {
    if (n < 0) throw error("oracle_evolve: n must be >= 0");
    Eigen::VectorXcd c = state;
    for (int step = 0; step < n; ++step) {
        c = o.floquet * c;
        detail::check_truncation(c, o.dim, "oracle_evolve");
    }
    return c;
}

/// Normalized Hermite functions of scale hbar on the grid nodes, row k.
/// phi_k(Q) = hbar^{-1/4} h_k(Q/sqrt(hbar)), three-term recurrence.
inline Eigen::MatrixXd hermite_basis(const GridSpec& grid, int dim) {
    Eigen::MatrixXd basis(dim, grid.n);
    const double root_h = std::sqrt(grid.hbar);
    const double norm0 = std::pow(pi * grid.hbar, -0.25);
    for (int j = 0; j < grid.n; ++j) {
        const double x = grid.q(j) / root_h;
        basis(0, j) = norm0 * std::exp(-0.5 * x * x);
        if (dim > 1) basis(1, j) = std::sqrt(2.0) * x * basis(0, j);
        for (int k = 2; k < dim; ++k)
            basis(k, j) = std::sqrt(2.0 / k) * x * basis(k - 1, j) -
                          std::sqrt((k - 1.0) / k) * basis(k - 2, j);
    }
    return basis;
}

/// Project a grid state onto the truncated number basis.
inline Eigen::VectorXcd oracle_project(const FockOracle& o,
                                       const QuantumState& s) {
    if (s.hbar() != o.hbar)
        throw grid_error("oracle_project: hbar_eff differs from the oracle");
    const Eigen::MatrixXd basis = hermite_basis(s.grid, o.dim);
    Eigen::Map<const Eigen::VectorXcd> psi(s.amp.data(), s.grid.n);
    Eigen::VectorXcd c = basis * psi * s.grid.dq();
    detail::check_truncation(c, o.dim, "oracle_project");
    return c;
}

/// Synthesize a grid state from number-basis coefficients.
inline QuantumState oracle_reconstruct(const FockOracle& o,
                                       const Eigen::VectorXcd& c,
                                       const GridSpec& grid) {
    if (grid.hbar != o.hbar)
        throw grid_error("oracle_reconstruct: hbar_eff differs from the oracle");
    const Eigen::MatrixXd basis = hermite_basis(grid, o.dim);
    Eigen::VectorXcd psi = basis.transpose() * c;
    QuantumState out{grid, cvec(psi.data(), psi.data() + grid.n)};
    return out;
}

/// |<a|b>| / (|a| |b|) for truncated-basis vectors.
inline double fock_fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    return std::abs(a.dot(b)) / (a.norm() * b.norm());
}

}  // namespace kho
