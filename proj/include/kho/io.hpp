#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kho/classical.hpp"
#include "kho/core.hpp"
#include "kho/decoherence.hpp"
#include "kho/errors.hpp"
#include "kho/wigner.hpp"

// File output: CSV with full round-trip precision, 16-bit PGM heatmaps, and
// a JSON metadata sidecar next to every data file.  All writers are
// deterministic for fixed inputs.

namespace kho::io {

using json = nlohmann::ordered_json;

/// Shortest decimal that round-trips a double.
inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::ofstream open_out(const std::filesystem::path& path,
                              bool binary = false) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw io_error("cannot open for writing: " + path.string());
    return out;
}

inline void write_sidecar(const std::filesystem::path& data_path,
                          const json& meta) {
    auto side = data_path;
    side += ".json";
    std::ofstream out = open_out(side);
    out << meta.dump(2) << "\n";
    if (!out) throw io_error("failed writing " + side.string());
}

inline void write_wigner_csv(const std::filesystem::path& path,
                             const WignerGrid& w) {
    std::ofstream out = open_out(path);
    out << "Q,P,W\n";
    for (int j = 0; j < w.nq(); ++j)
        for (int k = 0; k < w.np(); ++k)
            out << fmt(w.q_axis[j]) << ',' << fmt(w.p_axis[k]) << ','
                << fmt(w.at(j, k)) << '\n';
    if (!out) throw io_error("failed writing " + path.string());
}

/// P5 grayscale, maxval 65535, big-endian.  Rows run from the highest P to
/// the lowest so the image reads like a phase-space plot; columns follow Q.
/// Values map [w_min, w_max] -> [0, 65535]; the sidecar records the range.
inline void write_wigner_pgm16(const std::filesystem::path& path,
                               const WignerGrid& w, double* w_min_out = nullptr,
                               double* w_max_out = nullptr) {
    double lo = w.values.front(), hi = lo;
    for (double v : w.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi > lo ? hi - lo : 1.0;
    std::ofstream out = open_out(path, true);
    out << "P5\n" << w.nq() << " " << w.np() << "\n65535\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(w.nq()) * 2);
    for (int k = w.np() - 1; k >= 0; --k) {
        for (int j = 0; j < w.nq(); ++j) {
            const double t = (w.at(j, k) - lo) / span;
            const auto v = static_cast<std::uint16_t>(t * 65535.0 + 0.5);
            row[2 * j] = static_cast<unsigned char>(v >> 8);
            row[2 * j + 1] = static_cast<unsigned char>(v & 0xff);
        }
        out.write(reinterpret_cast<const char*>(row.data()), row.size());
    }
    if (!out) throw io_error("failed writing " + path.string());
    if (w_min_out) *w_min_out = lo;
    if (w_max_out) *w_max_out = hi;
}

inline void write_points_csv(const std::filesystem::path& path,
                             const WebCloud& cloud) {
    std::ofstream out = open_out(path);
    out << "seed,iter,Q,P\n";
    for (std::size_t i = 0; i < cloud.points.size(); ++i)
        out << cloud.seed_index[i] << ',' << cloud.iteration[i] << ','
            << fmt(cloud.points[i].q) << ',' << fmt(cloud.points[i].p) << '\n';
    if (!out) throw io_error("failed writing " + path.string());
}

inline void write_polyline_csv(const std::filesystem::path& path,
                               const Polyline& line) {
    std::ofstream out = open_out(path);
    out << "Q,P\n";
    for (const auto& z : line.points)
        out << fmt(z.q) << ',' << fmt(z.p) << '\n';
    if (!out) throw io_error("failed writing " + path.string());
}

inline void write_purity_csv(const std::filesystem::path& path,
                             const PurityCurve& curve) {
    std::ofstream out = open_out(path);
    out << "n,purity,abs_f,arg_f\n";
    for (const auto& pt : curve.points)
        out << pt.n << ',' << fmt(pt.purity) << ',' << fmt(std::abs(pt.f))
            << ',' << fmt(std::arg(pt.f)) << '\n';
    if (!out) throw io_error("failed writing " + path.string());
}

struct MomentsRow {
    int n = 0;
    Moments m;
    double norm = 1.0;
};

inline void write_moments_csv(const std::filesystem::path& path,
                              const std::vector<MomentsRow>& rows) {
    std::ofstream out = open_out(path);
    out << "n,mean_Q,mean_P,var_Q,var_P,energy,norm\n";
    for (const auto& r : rows)
        out << r.n << ',' << fmt(r.m.mean_q) << ',' << fmt(r.m.mean_p) << ','
            << fmt(r.m.var_q) << ',' << fmt(r.m.var_p) << ',' << fmt(r.m.energy)
            << ',' << fmt(r.norm) << '\n';
    if (!out) throw io_error("failed writing " + path.string());
}

inline void write_state_csv(const std::filesystem::path& path,
                            const QuantumState& s) {
    std::ofstream out = open_out(path);
    out << "Q,re_psi,im_psi\n";
    for (int j = 0; j < s.grid.n; ++j)
        out << fmt(s.grid.q(j)) << ',' << fmt(s.amp[j].real()) << ','
            << fmt(s.amp[j].imag()) << '\n';
    if (!out) throw io_error("failed writing " + path.string());
}

}  // namespace kho::io
