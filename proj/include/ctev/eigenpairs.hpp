/**
 * @file eigenpairs.hpp
 * @brief Radially symmetric eigenfunction pairs and their L2 discrepancies.
 *
 * w(r) = c1 Z0(k sqrt(n) r), v(r) = c2 Z0(k r) with c1 = Z0(k), c2 = Z0(k sqrt(n)),
 * where Z0 is j0 on the ball and J0 on the disk. The choice of constants
 * enforces w = v at r = 1.
 */
#pragma once

#include <boost/math/special_functions/legendre.hpp>

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ctev/dispersion.hpp"
#include "ctev/errors.hpp"
#include "ctev/medium.hpp"
#include "ctev/specfun.hpp"

namespace ctev {

enum class Component { w, v };

struct RadialEigenfunction {
    Geometry geometry = Geometry::sphere;
    cplx k;
    cplx n;
    Component which = Component::w;
    cplx c1;
    cplx c2;

    static RadialEigenfunction make(Geometry g, cplx k, cplx n, Component which) {
        const cplx ks = k * std::sqrt(n);
        return {g, k, n, which, radial0(g, k), radial0(g, ks)};
    }

    static cplx radial0(Geometry g, cplx z) {
        return g == Geometry::sphere ? specfun::sph_bessel_j(0, z) : specfun::bessel_j(0, z);
    }
};

namespace eigenpairs_detail {

inline void check_r(double r) {
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("eigenfunction: r must lie in [0, 1]");
}

}  // namespace eigenpairs_detail

inline cplx eval_w(double r, const RadialEigenfunction& ef) {
    eigenpairs_detail::check_r(r);
    return ef.c1 * RadialEigenfunction::radial0(ef.geometry, ef.k * std::sqrt(ef.n) * r);
}

inline cplx eval_v(double r, const RadialEigenfunction& ef) {
    eigenpairs_detail::check_r(r);
    return ef.c2 * RadialEigenfunction::radial0(ef.geometry, ef.k * r);
}

inline cplx eval(double r, const RadialEigenfunction& ef) {
    return ef.which == Component::w ? eval_w(r, ef) : eval_v(r, ef);
}

/// Gauss-Legendre nodes and weights on [0, 1].
inline const std::vector<std::pair<double, double>>& gauss_legendre_01(int order) {
    static std::mutex mu;
    static std::map<int, std::vector<std::pair<double, double>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;
    std::vector<std::pair<double, double>> rule;
    rule.reserve(static_cast<std::size_t>(order));
    for (double x : boost::math::legendre_p_zeros<double>(order)) {
        const double dp = boost::math::legendre_p_prime(order, x);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.emplace_back(0.5 * (1.0 + x), 0.5 * w);
        if (x != 0.0) rule.emplace_back(0.5 * (1.0 - x), 0.5 * w);
    }
    return cache.emplace(order, std::move(rule)).first->second;
}

namespace eigenpairs_detail {

inline double weighted_sq_diff(const RadialEigenfunction& a, const RadialEigenfunction& b, int order) {
    const bool sphere = a.geometry == Geometry::sphere;
    double sum = 0.0;
    for (const auto& [r, w] : gauss_legendre_01(order)) {
        const double jac = sphere ? 4.0 * std::numbers::pi * r * r : 2.0 * std::numbers::pi * r;
        sum += w * jac * std::norm(eval(r, a) - eval(r, b));
    }
    return sum;
}

}  // namespace eigenpairs_detail

/**
 * Squared L2 error 4 pi int |f_a - f_b|^2 r^2 dr (ball) or
 * 2 pi int |f_a - f_b|^2 r dr (disk), by Gauss-Legendre with `quad_order`
 * nodes; the order is doubled until two successive values agree to 1e-12
 * relative.
 */
inline double l2_error(const RadialEigenfunction& ef_eta, const RadialEigenfunction& ef_0, int quad_order = 64) {
    if (ef_eta.geometry != ef_0.geometry || ef_eta.which != ef_0.which)
        throw std::invalid_argument("l2_error: eigenfunctions differ in geometry or component");
    if (quad_order < 2) throw std::invalid_argument("l2_error: quad_order must be >= 2");
    double prev = eigenpairs_detail::weighted_sq_diff(ef_eta, ef_0, quad_order);
    for (int q = 2 * quad_order; q <= 1024; q *= 2) {
        const double cur = eigenpairs_detail::weighted_sq_diff(ef_eta, ef_0, q);
        if (std::abs(cur - prev) <= 1e-12 * std::abs(cur) || cur == prev) return cur;
        prev = cur;
    }
    throw convergence_error("l2_error: quadrature did not converge");
}

/// log(e_i / e_{i+1}) / (2 log 2) for squared errors.
inline std::vector<double> eoc_eigfun(const std::vector<double>& sq_errors) {
    std::vector<double> out = eoc_sequence(sq_errors);
    for (double& v : out) v *= 0.5;
    return out;
}

}  // namespace ctev
