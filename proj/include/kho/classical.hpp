#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "kho/core.hpp"
#include "kho/linear_map.hpp"

// Classical stroboscopic map of the kicked harmonic oscillator:
//
//   P <- P + K sin(Q + phi),  then  (Q, P) <- R(alpha) (Q, P)
//
// with the same rotation matrix [[cos a, -sin a], [sin a, cos a]] as the
// quantum Heisenberg flow.  The map is area preserving and invertible.

namespace kho {

struct PhasePoint {
    double q = 0.0;
    double p = 0.0;

    double radius() const { return std::hypot(q, p); }
};

inline PhasePoint classical_step(const PhasePoint& z, const KhoParams& par) {
    const double p1 = z.p + par.kick * std::sin(z.q + par.phi);
    const double c = std::cos(par.alpha), s = std::sin(par.alpha);
    return PhasePoint{c * z.q - s * p1, s * z.q + c * p1};
}

inline PhasePoint classical_step_inverse(const PhasePoint& z,
                                         const KhoParams& par) {
    const double c = std::cos(par.alpha), s = std::sin(par.alpha);
    const double q = c * z.q + s * z.p;
    const double p1 = -s * z.q + c * z.p;
    return PhasePoint{q, p1 - par.kick * std::sin(q + par.phi)};
}

/// Ordered curve in phase space with a refinement tolerance.
struct Polyline {
    std::vector<PhasePoint> points;
    double eps_ref = 0.05;

    double length() const {
        double acc = 0.0;
        for (std::size_t i = 1; i < points.size(); ++i)
            acc += std::hypot(points[i].q - points[i - 1].q,
                              points[i].p - points[i - 1].p);
        return acc;
    }
};

/// Straight segment through `center` along direction `angle`, half-length h.
inline Polyline segment_polyline(PhasePoint center, double angle, double h,
                                 int n_points = 33, double eps_ref = 0.05) {
    Polyline line;
    line.eps_ref = eps_ref;
    const double c = std::cos(angle), s = std::sin(angle);
    for (int i = 0; i < n_points; ++i) {
        const double t = -h + 2.0 * h * i / (n_points - 1);
        line.points.push_back({center.q + t * c, center.p + t * s});
    }
    return line;
}

struct WebCloud {
    std::vector<PhasePoint> points;  // seed-major order, iterate 0..n per seed
    std::vector<int> seed_index;
    std::vector<int> iteration;
    double max_radius = 0.0;
};

/// All iterates of all seeds under the stroboscopic map (iterate 0 = seed).
inline WebCloud stroboscopic_web(const KhoParams& par,
                                 const std::vector<PhasePoint>& seeds,
                                 int n_iter) {
    if (n_iter < 1) throw error("stroboscopic_web: n_iter must be >= 1");
    WebCloud cloud;
    cloud.points.reserve(seeds.size() * (n_iter + 1));
    for (std::size_t s = 0; s < seeds.size(); ++s) {
        PhasePoint z = seeds[s];
        for (int it = 0; it <= n_iter; ++it) {
            cloud.points.push_back(z);
            cloud.seed_index.push_back(static_cast<int>(s));
            cloud.iteration.push_back(it);
            cloud.max_radius = std::max(cloud.max_radius, z.radius());
            if (it < n_iter) z = classical_step(z, par);
        }
    }
    return cloud;
}

/// Default seeding: ring of 12 points at the given radius, plus the origin.
inline std::vector<PhasePoint> default_web_seeds(double radius = pi) {
    std::vector<PhasePoint> seeds;
    for (int i = 0; i < 12; ++i) {
        const double a = 2.0 * pi * i / 12.0;
        seeds.push_back({radius * std::cos(a), radius * std::sin(a)});
    }
    seeds.push_back({0.0, 0.0});
    return seeds;
}

namespace detail {

inline double gap(const PhasePoint& a, const PhasePoint& b) {
    return std::hypot(a.q - b.q, a.p - b.p);
}

/// Map a resolved polyline once, subdividing source segments until every
/// image segment is shorter than eps_ref.
inline Polyline map_refined(const Polyline& line, const KhoParams& par,
                            std::size_t point_cap) {
    Polyline out;
    out.eps_ref = line.eps_ref;
    if (line.points.empty()) return out;

    out.points.push_back(classical_step(line.points.front(), par));
    for (std::size_t i = 1; i < line.points.size(); ++i) {
        // stack of source points whose images still need emitting, in order
        std::vector<std::pair<PhasePoint, PhasePoint>> todo;
        todo.push_back({line.points[i - 1], line.points[i]});
        while (!todo.empty()) {
            auto [a, b] = todo.back();
            todo.pop_back();
            const PhasePoint fb = classical_step(b, par);
            if (gap(out.points.back(), fb) <= line.eps_ref ||
                gap(a, b) < 1e-9) {
                out.points.push_back(fb);
                if (out.points.size() > point_cap)
                    throw point_budget_error(
                        "evolve_manifold: refinement exceeded the point cap");
            } else {
                const PhasePoint mid{0.5 * (a.q + b.q), 0.5 * (a.p + b.p)};
                todo.push_back({mid, b});
                todo.push_back({a, mid});
            }
        }
    }
    return out;
}

}  // namespace detail

/// n stroboscopic iterations of a curve with adaptive midpoint insertion;
/// consecutive image spacing is kept at or below eps_ref.
inline Polyline evolve_manifold(const Polyline& line, const KhoParams& par,
                                int n, std::size_t point_cap = 1000000) {
    if (line.points.size() < 2)
        throw error("evolve_manifold: need at least 2 points");
    Polyline cur = line;
    for (int it = 0; it < n; ++it)
        cur = detail::map_refined(cur, par, point_cap);
    return cur;
}

/// Minimum distance from a point to a polyline.
inline double distance_to_polyline(const PhasePoint& z, const Polyline& line) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < line.points.size(); ++i) {
        const auto& a = line.points[i - 1];
        const auto& b = line.points[i];
        const double vx = b.q - a.q, vy = b.p - a.p;
        const double wx = z.q - a.q, wy = z.p - a.p;
        const double vv = vx * vx + vy * vy;
        double t = vv > 0.0 ? (wx * vx + wy * vy) / vv : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        best = std::min(best, std::hypot(wx - t * vx, wy - t * vy));
    }
    return best;
}

struct Histogram2D {
    std::vector<double> density;  // row-major [iq * np + ip], integrates to 1
    int nq = 0, np = 0;
    double q_min = 0, q_max = 0, p_min = 0, p_max = 0;

    double dq() const { return (q_max - q_min) / nq; }
    double dp() const { return (p_max - p_min) / np; }
    double at(int iq, int ip) const { return density[iq * np + ip]; }
};

/// Sample the Gaussian phase-space density of `g`, push every sample through
/// n classical steps, and bin the result.  Samples falling outside the
/// histogram window are dropped before normalization.
inline Histogram2D liouville_histogram(const GaussianSpec& g, double hbar,
                                       const KhoParams& par, int n,
                                       int n_samples, int bins, double extent,
                                       unsigned long seed = 0) {
    if (n_samples < 1) throw error("liouville_histogram: need samples");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> unit;

    // covariance axes of the tilted squeezed Gaussian
    const double sig_maj = g.squeeze * std::sqrt(hbar / 2.0);
    const double sig_min = std::sqrt(hbar / 2.0) / g.squeeze;
    const double c = std::cos(g.tilt), s = std::sin(g.tilt);

    Histogram2D h;
    h.nq = h.np = bins;
    h.q_min = -extent;
    h.q_max = extent;
    h.p_min = -extent;
    h.p_max = extent;
    h.density.assign(static_cast<std::size_t>(bins) * bins, 0.0);

    long kept = 0;
    for (int i = 0; i < n_samples; ++i) {
        const double a = sig_maj * unit(rng), b = sig_min * unit(rng);
        PhasePoint z{g.q0 + c * a - s * b, g.p0 + s * a + c * b};
        for (int it = 0; it < n; ++it) z = classical_step(z, par);
        const int iq = static_cast<int>((z.q - h.q_min) / h.dq());
        const int ip = static_cast<int>((z.p - h.p_min) / h.dp());
        if (iq >= 0 && iq < bins && ip >= 0 && ip < bins) {
            h.density[iq * bins + ip] += 1.0;
            ++kept;
        }
    }
    if (kept == 0) throw error("liouville_histogram: all samples left the window");
    const double w = 1.0 / (kept * h.dq() * h.dp());
    for (double& v : h.density) v *= w;
    return h;
}

/// Apply a linear coordinate correction to every vertex.
inline Polyline transform_polyline(const Polyline& line,
                                   const LinearPhaseSpaceMap& map) {
    Polyline out = line;
    for (auto& z : out.points) {
        const auto t = map.m.apply(z.q, z.p);
        z = {t[0], t[1]};
    }
    return out;
}

}  // namespace kho
