/**
 * @file specfun.hpp
 * @brief Integer-order cylindrical and spherical Bessel/Hankel functions of
 * complex argument.
 *
 * Evaluation strategy
 *  - J_n: ascending power series for |z| <= 12, Miller backward recurrence
 *    (normalised with the generating-function identity
 *    e^{-iz} = J_0 + 2 sum (-i)^k J_k) for larger |z|.
 *  - H^(1)_0, H^(1)_1 in the closed upper half plane: power series for
 *    |z| < 2, Temme's continued fraction for K_0/K_1 at w = -iz for
 *    2 <= |z| < 50, Hankel's asymptotic expansion beyond. Higher orders by
 *    forward recurrence, which is the stable direction for H^(1).
 *  - Lower half plane: H^(1)_n(z) = 2 J_n(z) - conj(H^(1)_n(conj z)).
 *  - Y_n = (H^(1)_n - J_n) / i, so the recessive Hankel function never
 *    comes out of a cancelling sum.
 *  - j_n: series for |z| <= 1, Miller recurrence otherwise; h^(1)_n by
 *    forward recurrence from the closed forms of orders 0 and 1 (upper half
 *    plane), reflected to the lower half plane like H^(1)_n.
 *
 * All functions are pure. Orders are limited to [0, 200] and arguments to
 * |z| < 1e4; non-finite arguments raise std::invalid_argument.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctev/errors.hpp"

namespace ctev::specfun {

using cplx = std::complex<double>;

inline constexpr int kMaxOrder = 200;
inline constexpr double kMaxArg = 1e4;
inline constexpr double kSeriesRadius = 12.0;
inline constexpr double kAsymptoticRadius = 50.0;

namespace detail {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();
inline constexpr double kEulerGamma = 0.57721566490153286060651209;
inline constexpr cplx kI{0.0, 1.0};

inline void check_argument(int order, cplx z, const char* fn, int max_order = kMaxOrder) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::invalid_argument(std::string(fn) + ": non-finite argument");
    if (order < 0 || order > max_order)
        throw std::invalid_argument(std::string(fn) + ": order out of range [0, 200]");
    if (std::abs(z) >= kMaxArg)
        throw std::invalid_argument(std::string(fn) + ": |z| must be below 1e4");
}

inline void check_pole(cplx z, const char* fn) {
    if (z == cplx(0.0, 0.0)) throw pole_error(std::string(fn) + ": pole at z = 0");
}

// log10 magnitude envelope of J_n(x) for n > x (Zhang & Jin).
inline double envj(int n, double x) {
    const double nn = std::max(n, 1);
    return 0.5 * std::log10(6.28 * nn) - nn * std::log10(1.36 * x / nn);
}

// Secant search for the order where envj(order, x) reaches `target`.
inline int envj_root(double x, int n0, double target) {
    double f0 = envj(n0, x) - target;
    int n1 = n0 + 5;
    double f1 = envj(n1, x) - target;
    int nn = n1;
    for (int it = 0; it < 40; ++it) {
        if (f1 == f0) break;
        nn = static_cast<int>(n1 - (n1 - n0) / (1.0 - f0 / f1));
        const double f = envj(nn, x) - target;
        if (std::abs(nn - n1) < 1) break;
        n0 = n1;
        f0 = f1;
        n1 = nn;
        f1 = f;
    }
    return nn;
}

// Starting order for backward recurrence so that J_0..J_n carry about
// `digits` significant digits.
inline int miller_start(double x, int n, double digits = 18.0) {
    const double half = 0.5 * digits;
    const double ejn = envj(n, x);
    double target;
    int n0;
    if (ejn <= half) {
        target = digits;
        n0 = static_cast<int>(1.1 * x) + 1;
    } else {
        target = half + ejn;
        n0 = n;
    }
    const int start = envj_root(x, n0, target) + 10;
    return std::max(start, n + 12);
}

// J_n(z) by its ascending series; intended for |z| <= kSeriesRadius.
inline cplx cyl_j_series(int n, cplx z) {
    cplx lead = 1.0;
    const cplx half = 0.5 * z;
    for (int j = 1; j <= n; ++j) lead *= half / static_cast<double>(j);
    if (lead == cplx(0.0)) return lead;
    const cplx q = -0.25 * z * z;
    cplx term = 1.0;
    cplx sum = 1.0;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(n + k));
        sum += term;
        if (std::abs(term) <= 0.25 * kEps * std::abs(sum) && k > 2) break;
    }
    return lead * sum;
}

// J_0..J_nmax(z) by Miller's algorithm.
inline std::vector<cplx> cyl_j_miller(int nmax, cplx z) {
    const double x = std::abs(z);
    const int start = miller_start(x, nmax);
    std::vector<cplx> f(static_cast<std::size_t>(start) + 2, cplx(0.0));
    f[start + 1] = 0.0;
    f[start] = 1e-250;
    for (int k = start; k >= 1; --k) {
        f[k - 1] = (2.0 * k / z) * f[k] - f[k + 1];
        if (std::abs(f[k - 1]) > 1e250) {
            for (int j = k - 1; j <= start + 1; ++j) f[j] *= 1e-250;
        }
    }
    // e^{-iz} = J_0 + 2 sum (-i)^k J_k for Im z >= 0, e^{iz} with i^k otherwise.
    const bool upper = z.imag() >= 0.0;
    const cplx rot = upper ? cplx(0.0, -1.0) : cplx(0.0, 1.0);
    cplx phase = 1.0;
    cplx s = f[0];
    for (int k = 1; k <= start; ++k) {
        phase *= rot;
        s += 2.0 * phase * f[k];
    }
    const cplx target = upper ? std::exp(-kI * z) : std::exp(kI * z);
    const cplx scale = target / s;
    std::vector<cplx> out(static_cast<std::size_t>(nmax) + 1);
    for (int k = 0; k <= nmax; ++k) out[k] = f[k] * scale;
    return out;
}

// Y_0 and Y_1 by their ascending series; intended for |z| < 2.
inline std::pair<cplx, cplx> cyl_y01_series(cplx z) {
    const cplx q = 0.25 * z * z;
    const cplx lg = std::log(0.5 * z) + kEulerGamma;
    const double two_pi = 2.0 / std::numbers::pi;

    cplx j0 = 1.0, y0_sum = 0.0, term = 1.0;
    double harmonic = 0.0;
    for (int k = 1; k < 200; ++k) {
        term *= -q / (static_cast<double>(k) * k);
        harmonic += 1.0 / k;
        j0 += term;
        const cplx add = -term * harmonic;
        y0_sum += add;
        if (std::abs(add) < 0.25 * kEps * std::abs(y0_sum) && std::abs(term) < 0.25 * kEps)
            break;
    }
    const cplx y0 = two_pi * (lg * j0 + y0_sum);

    // Y_1 = (2/pi) (ln(z/2)+gamma) J_1 - 2/(pi z)
    //       - (1/pi) sum (-q)^k (z/2) (H_k + H_{k+1}) / (k! (k+1)!)
    cplx j1 = 0.5 * z, t = 0.5 * z;
    cplx y1_sum = t * 1.0;  // k = 0: H_0 + H_1 = 1
    double hk = 0.0;
    for (int k = 1; k < 200; ++k) {
        t *= -q / (static_cast<double>(k) * (k + 1));
        hk += 1.0 / k;
        const double hk1 = hk + 1.0 / (k + 1);
        j1 += t;
        const cplx add = t * (hk + hk1);
        y1_sum += add;
        if (std::abs(add) < 0.25 * kEps * std::abs(y1_sum) && std::abs(t) < 0.25 * kEps * std::abs(j1))
            break;
    }
    const cplx y1 = two_pi * lg * j1 - two_pi / z - y1_sum / std::numbers::pi;
    return {y0, y1};
}

// Hankel's asymptotic expansion of H^(1)_nu(z), nu in {0, 1}, large |z|.
inline cplx cyl_h1_asymptotic(int nu, cplx z) {
    const double mu = 4.0 * nu * nu;
    cplx term = 1.0;
    cplx sum = 1.0;
    double last = 1.0;
    for (int k = 1; k < 80; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= kI * (mu - odd * odd) / (8.0 * k) / z;
        const double mag = std::abs(term);
        if (mag > last) break;  // asymptotic series: stop at the smallest term
        sum += term;
        last = mag;
        if (mag < 0.25 * kEps * std::abs(sum)) break;
    }
    const double pi = std::numbers::pi;
    const cplx omega = z - 0.5 * nu * pi - 0.25 * pi;
    return std::sqrt(2.0 / (pi * z)) * std::exp(kI * omega) * sum;
}

// K_0(w), K_1(w) for Re w >= 0, |w| >= 2 by Temme's continued fraction
// (Steed's algorithm, as in Numerical Recipes' bessik with mu = 0).
inline std::pair<cplx, cplx> cyl_k01_temme(cplx w) {
    cplx b = 2.0 * (1.0 + w);
    cplx d = 1.0 / b;
    cplx h = d, delh = d;
    cplx q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25;
    cplx q = a1, c = a1;
    double a = -a1;
    cplx s = 1.0 + q * delh;
    int i = 1;
    for (; i < 20000; ++i) {
        a -= 2.0 * i;
        c = -a * c / (i + 1.0);
        const cplx qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const cplx dels = q * delh;
        s += dels;
        if (std::abs(dels) < 0.5 * kEps * std::abs(s)) break;
    }
    if (i >= 20000) throw convergence_error("cyl_k01_temme: continued fraction did not converge");
    h = a1 * h;
    const cplx k0 = std::sqrt(std::numbers::pi / (2.0 * w)) * std::exp(-w) / s;
    const cplx k1 = k0 * (w + 0.5 - h) / w;
    return {k0, k1};
}

// H^(1)_0, H^(1)_1 for Im z >= 0, z != 0.
inline std::pair<cplx, cplx> cyl_h01_upper(cplx z) {
    const double r = std::abs(z);
    if (r >= kAsymptoticRadius) return {cyl_h1_asymptotic(0, z), cyl_h1_asymptotic(1, z)};
    if (r >= 2.0) {
        const auto [k0, k1] = cyl_k01_temme(-kI * z);
        const double c = 2.0 / std::numbers::pi;
        return {-kI * c * k0, -c * k1};
    }
    const auto [y0, y1] = cyl_y01_series(z);
    return {cyl_j_series(0, z) + kI * y0, cyl_j_series(1, z) + kI * y1};
}

inline std::vector<cplx> forward_recurrence(cplx f0, cplx f1, int nmax, cplx z, double shift) {
    std::vector<cplx> out(static_cast<std::size_t>(std::max(nmax, 1)) + 1);
    out[0] = f0;
    out[1] = f1;
    for (int k = 1; k < nmax; ++k) out[k + 1] = ((2.0 * k + shift) / z) * out[k] - out[k - 1];
    out.resize(static_cast<std::size_t>(nmax) + 1);
    return out;
}

inline std::vector<cplx> cyl_h1_upper_seq(int nmax, cplx z) {
    const auto [h0, h1] = cyl_h01_upper(z);
    return forward_recurrence(h0, h1, nmax, z, 0.0);
}

// Spherical j_n(z) by its ascending series; intended for |z| <= 1.
inline cplx sph_j_series(int n, cplx z) {
    cplx lead = 1.0;
    for (int j = 1; j <= n; ++j) lead *= z / (2.0 * j + 1.0);
    if (lead == cplx(0.0)) return lead;
    const cplx q = -0.5 * z * z;
    cplx term = 1.0, sum = 1.0;
    for (int k = 1; k < 300; ++k) {
        term *= q / (static_cast<double>(k) * (2.0 * n + 2.0 * k + 1.0));
        sum += term;
        if (std::abs(term) <= 0.25 * kEps * std::abs(sum) && k > 1) break;
    }
    return lead * sum;
}

inline std::vector<cplx> sph_j_miller(int nmax, cplx z) {
    const int start = miller_start(std::abs(z), nmax + 1);
    std::vector<cplx> f(static_cast<std::size_t>(start) + 2, cplx(0.0));
    f[start] = 1e-250;
    for (int k = start; k >= 1; --k) {
        f[k - 1] = ((2.0 * k + 1.0) / z) * f[k] - f[k + 1];
        if (std::abs(f[k - 1]) > 1e250) {
            for (int j = k - 1; j <= start + 1; ++j) f[j] *= 1e-250;
        }
    }
    const cplx j0 = std::sin(z) / z;
    const cplx j1 = (j0 - std::cos(z)) / z;
    const cplx scale = std::abs(j0) >= std::abs(j1) ? j0 / f[0] : j1 / f[1];
    std::vector<cplx> out(static_cast<std::size_t>(nmax) + 1);
    for (int k = 0; k <= nmax; ++k) out[k] = f[k] * scale;
    return out;
}

inline std::vector<cplx> sph_h1_upper_seq(int nmax, cplx z) {
    const cplx e = std::exp(kI * z);
    const cplx h0 = -kI * e / z;
    const cplx h1 = -e * (z + kI) / (z * z);
    return forward_recurrence(h0, h1, nmax, z, 1.0);
}

}  // namespace detail

/// J_0(z), ..., J_nmax(z).
inline std::vector<cplx> bessel_j_seq(int nmax, cplx z) {
    detail::check_argument(nmax, z, "bessel_j", kMaxOrder + 1);
    if (std::abs(z) <= kSeriesRadius) {
        std::vector<cplx> out(static_cast<std::size_t>(nmax) + 1);
        for (int k = 0; k <= nmax; ++k) out[k] = detail::cyl_j_series(k, z);
        return out;
    }
    return detail::cyl_j_miller(nmax, z);
}

inline cplx bessel_j(int order, cplx z) {
    detail::check_argument(order, z, "bessel_j");
    if (std::abs(z) <= kSeriesRadius) return detail::cyl_j_series(order, z);
    return detail::cyl_j_miller(order, z)[order];
}

/// J'_n(z) = (J_{n-1} - J_{n+1}) / 2, with J'_0 = -J_1.
inline cplx bessel_j_deriv(int order, cplx z) {
    detail::check_argument(order, z, "bessel_j_deriv");
    const auto j = bessel_j_seq(order + 1, z);
    if (order == 0) return -j[1];
    return 0.5 * (j[order - 1] - j[order + 1]);
}

/// H^(1)_0(z), ..., H^(1)_nmax(z).
inline std::vector<cplx> hankel1_seq(int nmax, cplx z) {
    detail::check_argument(nmax, z, "hankel1", kMaxOrder + 1);
    detail::check_pole(z, "hankel1");
    if (z.imag() >= 0.0) return detail::cyl_h1_upper_seq(nmax, z);
    auto h = detail::cyl_h1_upper_seq(nmax, std::conj(z));
    const auto j = bessel_j_seq(nmax, z);
    for (int k = 0; k <= nmax; ++k) h[k] = 2.0 * j[k] - std::conj(h[k]);
    return h;
}

inline cplx hankel1(int order, cplx z) { return hankel1_seq(order, z)[order]; }

inline cplx hankel1_deriv(int order, cplx z) {
    const auto h = hankel1_seq(order + 1, z);
    if (order == 0) return -h[1];
    return 0.5 * (h[order - 1] - h[order + 1]);
}

inline cplx bessel_y(int order, cplx z) {
    return (hankel1(order, z) - bessel_j(order, z)) / detail::kI;
}

/// j_0(z), ..., j_nmax(z); j_0(0) = 1.
inline std::vector<cplx> sph_bessel_j_seq(int nmax, cplx z) {
    detail::check_argument(nmax, z, "sph_bessel_j", kMaxOrder + 1);
    std::vector<cplx> out(static_cast<std::size_t>(nmax) + 1);
    if (std::abs(z) <= 1.0) {
        for (int k = 0; k <= nmax; ++k) out[k] = detail::sph_j_series(k, z);
        return out;
    }
    return detail::sph_j_miller(nmax, z);
}

inline cplx sph_bessel_j(int order, cplx z) { return sph_bessel_j_seq(order, z)[order]; }

/// j'_n = (n j_{n-1} - (n+1) j_{n+1}) / (2n+1), regular at z = 0.
inline cplx sph_bessel_j_deriv(int order, cplx z) {
    detail::check_argument(order, z, "sph_bessel_j_deriv");
    const auto j = sph_bessel_j_seq(order + 1, z);
    if (order == 0) return -j[1];
    return (static_cast<double>(order) * j[order - 1] - (order + 1.0) * j[order + 1]) / (2.0 * order + 1.0);
}

/// h^(1)_0(z), ..., h^(1)_nmax(z), with h_0 = -i e^{iz}/z.
inline std::vector<cplx> sph_hankel1_seq(int nmax, cplx z) {
    detail::check_argument(nmax, z, "sph_hankel1", kMaxOrder + 1);
    detail::check_pole(z, "sph_hankel1");
    if (z.imag() >= 0.0) return detail::sph_h1_upper_seq(nmax, z);
    auto h = detail::sph_h1_upper_seq(nmax, std::conj(z));
    const auto j = sph_bessel_j_seq(nmax, z);
    for (int k = 0; k <= nmax; ++k) h[k] = 2.0 * j[k] - std::conj(h[k]);
    return h;
}

inline cplx sph_hankel1(int order, cplx z) { return sph_hankel1_seq(order, z)[order]; }

inline cplx sph_hankel1_deriv(int order, cplx z) {
    const auto h = sph_hankel1_seq(order + 1, z);
    if (order == 0) return -h[1];
    return (static_cast<double>(order) * h[order - 1] - (order + 1.0) * h[order + 1]) / (2.0 * order + 1.0);
}

inline cplx sph_bessel_y(int order, cplx z) {
    return (sph_hankel1(order, z) - sph_bessel_j(order, z)) / detail::kI;
}

/// Values and derivatives of one function family at one order.
struct ValueDeriv {
    cplx value;
    cplx deriv;
};

/// J_n and J'_n sharing one sequence evaluation.
inline ValueDeriv bessel_j_pair(int order, cplx z) {
    const auto j = bessel_j_seq(order + 1, z);
    return {j[order], order == 0 ? -j[1] : 0.5 * (j[order - 1] - j[order + 1])};
}

inline ValueDeriv hankel1_pair(int order, cplx z) {
    const auto h = hankel1_seq(order + 1, z);
    return {h[order], order == 0 ? -h[1] : 0.5 * (h[order - 1] - h[order + 1])};
}

inline ValueDeriv sph_bessel_j_pair(int order, cplx z) {
    const auto j = sph_bessel_j_seq(order + 1, z);
    if (order == 0) return {j[0], -j[1]};
    return {j[order], (static_cast<double>(order) * j[order - 1] - (order + 1.0) * j[order + 1]) / (2.0 * order + 1.0)};
}

inline ValueDeriv sph_hankel1_pair(int order, cplx z) {
    const auto h = sph_hankel1_seq(order + 1, z);
    if (order == 0) return {h[0], -h[1]};
    return {h[order], (static_cast<double>(order) * h[order - 1] - (order + 1.0) * h[order + 1]) / (2.0 * order + 1.0)};
}

}  // namespace ctev::specfun
