/**
 * @file dispersion.hpp
 * @brief Determinants whose zeros are the conductive transmission eigenvalues.
 *
 * For modal order p the eigenvalue condition on the unit ball reads
 *
 *     d(k) = k sqrt(n) j_p'(k sqrt(n)) j_p(k) - j_p(k sqrt(n)) (k j_p'(k) + eta j_p(k)) = 0,
 *
 * and the disk analogue uses J_m in place of j_p. For order 0 on the ball the
 * trigonometric form
 *
 *     k sin(k sqrt(n)) cos k - k sqrt(n) sin k cos(k sqrt(n)) + eta sin k sin(k sqrt(n))
 *
 * equals -k^2 sqrt(n) times d(k).
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ctev/errors.hpp"
#include "ctev/medium.hpp"
#include "ctev/rootfind.hpp"
#include "ctev/specfun.hpp"

namespace ctev {

namespace dispersion_detail {

inline void check_k(cplx k, const char* fn) {
    if (!std::isfinite(k.real()) || !std::isfinite(k.imag()))
        throw std::invalid_argument(std::string(fn) + ": non-finite wavenumber");
    if (k == cplx(0.0)) throw std::invalid_argument(std::string(fn) + ": k = 0 is excluded");
}

template <class Pair>
cplx determinant(cplx k, const Medium& med, int order, Pair radial) {
    const cplx s = std::sqrt(med.index(k));
    const cplx ks = k * s;
    const auto in = radial(order, ks);
    const auto out = radial(order, k);
    return ks * in.deriv * out.value - in.value * (k * out.deriv + med.eta() * out.value);
}

}  // namespace dispersion_detail

/// Ball determinant for spherical order p.
inline cplx d_sphere(cplx k, const Medium& med, int order) {
    dispersion_detail::check_k(k, "d_sphere");
    if (order < 0) throw std::invalid_argument("d_sphere: negative order");
    return dispersion_detail::determinant(k, med, order, specfun::sph_bessel_j_pair);
}

/// Disk determinant for Fourier order m.
inline cplx d_disk(cplx k, const Medium& med, int order) {
    dispersion_detail::check_k(k, "d_disk");
    if (order < 0) throw std::invalid_argument("d_disk: negative order");
    return dispersion_detail::determinant(k, med, order, specfun::bessel_j_pair);
}

inline cplx determinant(Geometry g, cplx k, const Medium& med, int order) {
    return g == Geometry::sphere ? d_sphere(k, med, order) : d_disk(k, med, order);
}

/// Order-0 ball determinant in trigonometric form (= -k^2 sqrt(n) d_sphere).
inline cplx d_sphere_trig(cplx k, const Medium& med) {
    dispersion_detail::check_k(k, "d_sphere_trig");
    const cplx s = std::sqrt(med.index(k));
    const cplx ks = k * s;
    return k * std::sin(ks) * std::cos(k) - k * s * std::sin(k) * std::cos(ks) + med.eta() * std::sin(k) * std::sin(ks);
}

/**
 * Determinant rescaled for contour integration.
 *
 * Multiplies by exp(i k (1 + sqrt(n_ref))) (and by k on the ball), an entire
 * nonvanishing factor that cancels the exponential growth of the Bessel
 * products in the upper half plane. Zeros are unchanged.
 */
class ScaledDeterminant {
public:
    ScaledDeterminant(Geometry g, Medium med, int order)
        : g_(g), med_(std::move(med)), order_(order), c_(1.0 + std::sqrt(med_.reference_index())) {
        if (order < 0) throw std::invalid_argument("ScaledDeterminant: negative order");
    }

    cplx operator()(cplx k) const {
        cplx v = determinant(g_, k, med_, order_) * std::exp(cplx(0.0, 1.0) * k * c_);
        if (g_ == Geometry::sphere) v *= k;
        return v;
    }

private:
    Geometry g_;
    Medium med_;
    int order_;
    cplx c_;
};

struct EigenvalueRecord {
    cplx k;
    int order = 0;
    Geometry geometry = Geometry::sphere;
    cplx eta;
    double residual = 0.0;   ///< |scaled determinant| at k
    int multiplicity = 1;    ///< winding count of the enclosing box
    bool refined = true;
};

inline constexpr double kRealAxisShift = 1e-2;

/**
 * Eigenvalues of orders 0..max_order inside `rect`.
 *
 * If rect.im_min >= 0 it is lowered to -0.01 so that real roots are interior.
 * Records are sorted by (order, Re k, Im k).
 */
inline std::vector<EigenvalueRecord> compute_ites(Geometry g, const Medium& med, rootfind::SearchRect rect,
                                                  int max_order, double tol,
                                                  const rootfind::RootfindOptions& opt = {}) {
    rect.validate();
    if (max_order < 0) throw std::invalid_argument("compute_ites: negative max_order");
    if (rect.im_min >= 0.0) rect.im_min = -kRealAxisShift;
    if (rect.contains(cplx(0.0))) throw std::invalid_argument("compute_ites: search rectangle must exclude k = 0");
    rootfind::RootfindOptions o = opt;
    o.exclusions.push_back(cplx(0.0));
    if (med.is_absorbing() && med.n2() > 0.0) o.exclusions.push_back(cplx(0.0, -med.n2() / med.n1()));
    std::vector<EigenvalueRecord> out;
    for (int p = 0; p <= max_order; ++p) {
        const ScaledDeterminant f(g, med, p);
        for (const auto& z : rootfind::find_zeros(f, rect, tol, o))
            out.push_back({z.z, p, g, med.eta(), z.residual, z.winding_count, z.refined});
    }
    return out;
}

/**
 * Orders the roots of one order for tabulation: real roots (|Im| < 1e-8)
 * ascending, then complex roots by ascending real part.
 */
inline std::vector<cplx> table_order(std::vector<cplx> ks) {
    auto is_real = [](cplx k) { return std::abs(k.imag()) < 1e-8; };
    std::stable_sort(ks.begin(), ks.end(), [&](cplx a, cplx b) {
        if (is_real(a) != is_real(b)) return is_real(a);
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return ks;
}

/**
 * Follows each reference root through successive root sets by nearest
 * neighbour. Result is indexed [branch][step]. Throws convergence_error when
 * two branches claim the same root or a step has too few roots.
 */
inline std::vector<std::vector<cplx>> track_branches(const std::vector<cplx>& reference,
                                                     const std::vector<std::vector<cplx>>& steps) {
    std::vector<std::vector<cplx>> branches(reference.size());
    std::vector<cplx> current = reference;
    for (std::size_t s = 0; s < steps.size(); ++s) {
        const auto& cand = steps[s];
        if (cand.size() < current.size())
            throw convergence_error("track_branches: step " + std::to_string(s) + " has fewer roots than branches");
        std::vector<int> owner(cand.size(), -1);
        for (std::size_t b = 0; b < current.size(); ++b) {
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < cand.size(); ++c) {
                const double d = std::abs(cand[c] - current[b]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (owner[best] >= 0)
                throw convergence_error("track_branches: branches " + std::to_string(owner[best]) + " and " +
                                        std::to_string(b) + " collide at step " + std::to_string(s));
            owner[best] = static_cast<int>(b);
            branches[b].push_back(cand[best]);
            current[b] = cand[best];
        }
    }
    return branches;
}

/**
 * log2(e_i / e_{i+1}) for consecutive errors. A zero error yields +inf
 * (exact hit) and is the only non-finite value produced.
 */
inline std::vector<double> eoc_sequence(const std::vector<double>& errors) {
    if (errors.size() < 2) throw std::invalid_argument("eoc_sequence: need at least two errors");
    for (double e : errors)
        if (!(e >= 0.0) || !std::isfinite(e)) throw std::invalid_argument("eoc_sequence: errors must be finite and >= 0");
    std::vector<double> out;
    out.reserve(errors.size() - 1);
    for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
        if (errors[i + 1] == 0.0)
            out.push_back(std::numeric_limits<double>::infinity());
        else if (errors[i] == 0.0)
            out.push_back(-std::numeric_limits<double>::infinity());
        else
            out.push_back(std::log2(errors[i] / errors[i + 1]));
    }
    return out;
}

}  // namespace ctev
