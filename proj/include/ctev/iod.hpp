/**
 * @file iod.hpp
 * @brief Eigenvalue detection from the phases of far-field operator eigenvalues.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctev/errors.hpp"
#include "ctev/forward.hpp"
#include "ctev/medium.hpp"

namespace ctev {

struct PhaseEntry {
    int order = 0;
    double modulus = 0.0;
    double phase = 0.0;   ///< in [0, 2 pi)
};

struct PhaseCurve {
    Geometry geometry = Geometry::sphere;
    std::vector<double> k_grid;
    std::vector<std::vector<PhaseEntry>> entries;   ///< retained eigenvalues per grid point
    std::vector<double> envelope;                   ///< max retained phase (NaN when none)
    std::vector<bool> skipped;                      ///< resonance at this grid point
};

inline double phase_0_2pi(cplx z) {
    double a = std::arg(z);
    if (a < 0.0) a += 2.0 * std::numbers::pi;
    return a >= 2.0 * std::numbers::pi ? 0.0 : a;
}

/**
 * Phases of the far-field operator eigenvalues on the grid
 * k_min, k_min + step, ..., k_max. Eigenvalues with modulus below
 * floor * (max modulus at that k) are dropped.
 */
inline PhaseCurve phase_curves(Geometry g, const Medium& med, double k_min, double k_max, double step, double floor) {
    if (!(k_min > 0.0) || !(k_max >= k_min)) throw std::invalid_argument("phase_curves: need 0 < k_min <= k_max");
    if (!(step > 0.0)) throw std::invalid_argument("phase_curves: step must be positive");
    if (!(floor >= 0.0 && floor < 1.0)) throw std::invalid_argument("phase_curves: floor must lie in [0, 1)");
    if (!med.is_real()) throw std::invalid_argument("phase_curves: requires real n and real eta");
    const auto count = static_cast<std::size_t>(std::llround((k_max - k_min) / step)) + 1;
    PhaseCurve pc;
    pc.geometry = g;
    pc.k_grid.resize(count);
    pc.entries.resize(count);
    pc.envelope.assign(count, std::numeric_limits<double>::quiet_NaN());
    pc.skipped.assign(count, false);
    for (std::size_t i = 0; i < count; ++i) {
        const double k = k_min + static_cast<double>(i) * step;
        pc.k_grid[i] = k;
        std::vector<FarFieldEig> eigs;
        try {
            eigs = farfield_operator_eigs(g, k, med, 0.0);
        } catch (const resonance_error&) {
            pc.skipped[i] = true;
            continue;
        }
        double mx = 0.0;
        for (const auto& e : eigs) mx = std::max(mx, std::abs(e.eig));
        for (const auto& e : eigs) {
            const double mod = std::abs(e.eig);
            if (mx == 0.0 || mod < floor * mx || mod == 0.0) continue;
            const double ph = phase_0_2pi(e.eig);
            pc.entries[i].push_back({e.order, mod, ph});
            if (std::isnan(pc.envelope[i]) || ph > pc.envelope[i]) pc.envelope[i] = ph;
        }
    }
    return pc;
}

/**
 * Grid wavenumbers where a single modal track peaks above pi - proximity:
 * phase[i] > pi - proximity, phase[i] >= phase[i-1] and phase[i+1] < phase[i].
 * Sorted ascending, duplicates removed.
 */
inline std::vector<double> detect_ites(const PhaseCurve& pc, double proximity) {
    if (!(proximity > 0.0 && proximity < 0.25 * std::numbers::pi))
        throw std::invalid_argument("detect_ites: proximity must lie in (0, pi/4)");
    const std::size_t count = pc.k_grid.size();
    std::map<int, std::vector<double>> tracks;
    for (std::size_t i = 0; i < count; ++i)
        for (const auto& e : pc.entries[i]) tracks[e.order];
    for (auto& [order, tr] : tracks) {
        tr.assign(count, std::numeric_limits<double>::quiet_NaN());
        for (std::size_t i = 0; i < count; ++i)
            for (const auto& e : pc.entries[i])
                if (e.order == order) tr[i] = e.phase;
    }
    const double thresh = std::numbers::pi - proximity;
    std::vector<double> out;
    for (const auto& [order, tr] : tracks) {
        for (std::size_t i = 1; i + 1 < count; ++i) {
            if (std::isnan(tr[i - 1]) || std::isnan(tr[i]) || std::isnan(tr[i + 1])) continue;
            if (tr[i] > thresh && tr[i] >= tr[i - 1] && tr[i + 1] < tr[i]) out.push_back(pc.k_grid[i]);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Rows "k,order,modulus,phase" for every retained eigenvalue.
inline std::string phase_curve_csv(const PhaseCurve& pc) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(6);
    os << "k,order,modulus,phase\n";
    for (std::size_t i = 0; i < pc.k_grid.size(); ++i)
        for (const auto& e : pc.entries[i]) os << pc.k_grid[i] << ',' << e.order << ',' << e.modulus << ',' << e.phase << '\n';
    return os.str();
}

/// Rows "k,envelope".
inline std::string envelope_csv(const PhaseCurve& pc) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(6);
    os << "k,envelope\n";
    for (std::size_t i = 0; i < pc.k_grid.size(); ++i) {
        os << pc.k_grid[i] << ',';
        if (std::isnan(pc.envelope[i]))
            os << "nan";
        else
            os << pc.envelope[i];
        os << '\n';
    }
    return os.str();
}

}  // namespace ctev
