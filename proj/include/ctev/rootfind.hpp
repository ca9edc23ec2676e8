/**
 * @file rootfind.hpp
 * @brief All zeros of an analytic function inside a rectangle.
 *
 * Zeros are counted with the argument principle, isolated by recursive
 * quadrisection and polished with Newton's method. The winding number of a
 * box contour is computed two ways (trapezoid rule on f'/f and the sum of
 * argument increments between contour samples); both must round to the same
 * integer before a count is trusted.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <concepts>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctev/errors.hpp"

namespace ctev::rootfind {

using cplx = std::complex<double>;

template <class F>
concept ComplexFunction = std::invocable<F, cplx> && std::convertible_to<std::invoke_result_t<F, cplx>, cplx>;

/// Axis-aligned rectangle [re_min, re_max] x [im_min, im_max] i.
struct SearchRect {
    double re_min = 0.0;
    double re_max = 0.0;
    double im_min = 0.0;
    double im_max = 0.0;

    void validate() const {
        if (!(std::isfinite(re_min) && std::isfinite(re_max) && std::isfinite(im_min) && std::isfinite(im_max)))
            throw std::invalid_argument("SearchRect: non-finite bound");
        if (!(re_min < re_max) || !(im_min < im_max))
            throw std::invalid_argument("SearchRect: requires re_min < re_max and im_min < im_max");
    }

    [[nodiscard]] double width() const { return re_max - re_min; }
    [[nodiscard]] double height() const { return im_max - im_min; }
    [[nodiscard]] double diameter() const { return std::hypot(width(), height()); }
    [[nodiscard]] cplx center() const { return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}; }

    [[nodiscard]] bool contains(cplx z, double slack = 0.0) const {
        return z.real() >= re_min - slack && z.real() <= re_max + slack && z.imag() >= im_min - slack &&
               z.imag() <= im_max + slack;
    }

    /// Closed-rectangle membership of any of `points`.
    [[nodiscard]] bool contains_any(const std::vector<cplx>& points) const {
        return std::any_of(points.begin(), points.end(), [&](cplx p) { return contains(p); });
    }
};

struct LocatedZero {
    cplx z;
    double residual = 0.0;   ///< |f(z)|
    int newton_iters = 0;
    int winding_count = 1;   ///< zeros counted in the final enclosing box
    bool refined = true;     ///< false: Newton failed, z is a box center
};

struct RootfindOptions {
    int quad_pts = 64;              ///< initial samples per edge
    int max_quad_pts = 1 << 15;     ///< cap for adaptive doubling
    double coarse_tol = 0.5;        ///< box diameter below which Newton is attempted
    double min_box = 1e-7;          ///< relative box size treated as a cluster/multiple zero
    int max_newton = 60;
    int max_depth = 60;
    std::vector<cplx> exclusions;   ///< singular points that must stay outside every box
};

namespace detail {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double diff_step(cplx z) { return 1e-7 * std::max(1.0, std::abs(z)); }

template <ComplexFunction F>
cplx central_derivative(const F& f, cplx z) {
    const double h = diff_step(z);
    return (cplx(f(z + h)) - cplx(f(z - h))) / (2.0 * h);
}

struct ContourSample {
    std::vector<cplx> z;     // closed polygon samples (first point not repeated)
    std::vector<cplx> dz;    // trapezoid weight times edge direction
};

// Counter-clockwise samples: n points per edge, corners included once.
inline ContourSample sample_contour(const SearchRect& r, int n) {
    ContourSample s;
    const std::array<cplx, 5> corners{cplx(r.re_min, r.im_min), cplx(r.re_max, r.im_min), cplx(r.re_max, r.im_max),
                                      cplx(r.re_min, r.im_max), cplx(r.re_min, r.im_min)};
    s.z.reserve(4 * static_cast<std::size_t>(n));
    s.dz.reserve(4 * static_cast<std::size_t>(n));
    for (int e = 0; e < 4; ++e) {
        const cplx a = corners[e], b = corners[e + 1];
        const cplx step = (b - a) / static_cast<double>(n);
        for (int j = 0; j < n; ++j) {
            s.z.push_back(a + static_cast<double>(j) * step);
            // Trapezoid weights: corners collect half a step from each adjacent edge.
            s.dz.push_back(step);
        }
    }
    return s;
}

struct WindingEstimate {
    double integral = 0.0;     // (1/2 pi i) trapezoid of f'/f
    double increments = 0.0;   // sum of arg increments / 2 pi
    double max_jump = 0.0;     // largest single arg increment
};

template <ComplexFunction F>
WindingEstimate winding(const F& f, const SearchRect& r, int n) {
    const ContourSample s = sample_contour(r, n);
    const std::size_t m = s.z.size();
    std::vector<cplx> fv(m);
    double log_sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        fv[j] = f(s.z[j]);
        const double a = std::abs(fv[j]);
        if (!std::isfinite(a)) throw contour_error("count_zeros: non-finite function value on contour");
        if (a == 0.0) throw contour_error("count_zeros: zero of f on the contour");
        log_sum += std::log(a);
    }
    const double floor = 1e-13 * std::exp(log_sum / static_cast<double>(m));
    WindingEstimate w;
    cplx integral = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        if (std::abs(fv[j]) < floor)
            throw contour_error("count_zeros: |f| below safety floor on contour; perturb the rectangle");
        const cplx logd = central_derivative(f, s.z[j]) / fv[j];
        // Each sample sits at the junction of two trapezoid panels; corners join
        // panels from different edges.
        const cplx prev_dz = s.dz[(j + m - 1) % m];
        integral += 0.5 * (prev_dz + s.dz[j]) * logd;
        const double jump = std::arg(fv[(j + 1) % m] / fv[j]);
        w.increments += jump;
        w.max_jump = std::max(w.max_jump, std::abs(jump));
    }
    w.integral = (integral / cplx(0.0, kTwoPi)).real();
    w.increments /= kTwoPi;
    return w;
}

}  // namespace detail

/**
 * Number of zeros (with multiplicity) of an analytic `f` inside `rect`.
 *
 * Starts with `quad_pts` samples per edge and doubles until the f'/f
 * trapezoid value is within 0.25 of an integer, agrees with the argument
 * increment count, and no sample-to-sample phase jump exceeds pi/2.
 * Throws contour_error when |f| falls below the safety floor on the contour
 * or the doubling budget is exhausted (a zero sits on or very near the edge).
 */
template <ComplexFunction F>
int count_zeros(const F& f, const SearchRect& rect, int quad_pts = 64, int max_quad_pts = 1 << 15) {
    rect.validate();
    if (quad_pts < 4) throw std::invalid_argument("count_zeros: quad_pts must be >= 4");
    for (int n = quad_pts; n <= max_quad_pts; n *= 2) {
        const detail::WindingEstimate w = detail::winding(f, rect, n);
        const double rounded = std::round(w.increments);
        if (w.max_jump >= 0.5 * std::numbers::pi || std::abs(w.increments - rounded) > 1e-6) continue;
        // The f'/f quadrature is only meaningful when the difference step is small next to the box.
        const double h = detail::diff_step(rect.center());
        const bool quadrature_ok = h < 1e-2 * std::min(rect.width(), rect.height());
        if (!quadrature_ok || (std::abs(w.integral - rounded) < 0.25)) return static_cast<int>(rounded);
    }
    throw contour_error("count_zeros: winding number did not settle; a zero lies on or near the contour");
}

/**
 * Newton iteration z <- z - m f(z)/f'(z) from `z0` with a central-difference
 * derivative. Iterates to stagnation; throws convergence_error if the final
 * residual is not below `tol`.
 */
template <ComplexFunction F>
LocatedZero newton_polish(const F& f, cplx z0, double tol, int multiplicity = 1, int max_iter = 60) {
    cplx z = z0;
    cplx fz = f(z);
    double last_step = std::numeric_limits<double>::infinity();
    int it = 0;
    for (; it < max_iter; ++it) {
        if (fz == cplx(0.0)) break;
        const cplx d = detail::central_derivative(f, z);
        if (d == cplx(0.0) || !std::isfinite(std::abs(d))) break;
        const cplx step = static_cast<double>(multiplicity) * fz / d;
        const double size = std::abs(step);
        if (!std::isfinite(size)) break;
        // Past the quadratic regime the step stops shrinking; keep the better iterate.
        if (size > last_step && std::abs(fz) < tol) break;
        const cplx znew = z - step;
        const cplx fnew = f(znew);
        z = znew;
        fz = fnew;
        last_step = size;
        if (size <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(z))) {
            ++it;
            break;
        }
    }
    LocatedZero out{z, std::abs(fz), it, multiplicity, true};
    if (!(out.residual < tol) || !std::isfinite(out.residual)) {
        std::ostringstream msg;
        msg << "newton_refine: residual " << out.residual << " above tolerance " << tol << " after " << it
            << " iterations";
        throw convergence_error(msg.str());
    }
    return out;
}

template <ComplexFunction F>
cplx newton_refine(const F& f, cplx z0, double tol, int max_iter = 60) {
    return newton_polish(f, z0, tol, 1, max_iter).z;
}

namespace detail {

template <ComplexFunction F>
class ZeroSearch {
public:
    ZeroSearch(const F& f, const SearchRect& top, double tol, const RootfindOptions& opt)
        : f_(f), top_(top), tol_(tol), opt_(opt), scale_(std::max(top.width(), top.height())) {}

    int count(const SearchRect& r) const { return count_zeros(f_, r, opt_.quad_pts, opt_.max_quad_pts); }

    void run(const SearchRect& r, int n, int depth) {
        if (n <= 0) return;
        const double diam = r.diameter();
        if (n == 1 && diam < opt_.coarse_tol) {
            try {
                LocatedZero z = newton_polish(f_, r.center(), tol_, 1, opt_.max_newton);
                if (r.contains(z.z, 1e-9 * scale_) && top_.contains(z.z)) {
                    z.winding_count = 1;
                    found_.push_back(z);
                    return;
                }
            } catch (const convergence_error&) {
            }
        }
        if (n >= 2 && diam < opt_.coarse_tol && try_multiple(r, n)) return;
        if (diam < opt_.min_box * scale_ || depth >= opt_.max_depth) {
            settle_cluster(r, n);
            return;
        }
        subdivide(r, n, depth);
    }

    std::vector<LocatedZero> take() { return std::move(found_); }

private:
    // A zero of multiplicity n: Newton with step n f/f', confirmed by the count on a small box.
    bool try_multiple(const SearchRect& r, int n) {
        try {
            LocatedZero z = newton_polish(f_, r.center(), tol_, n, opt_.max_newton);
            if (!r.contains(z.z) || !top_.contains(z.z)) return false;
            const double d = 1e-4 * std::max(1.0, std::abs(z.z));
            const SearchRect tiny{z.z.real() - d, z.z.real() + d, z.z.imag() - d, z.z.imag() + d};
            if (count(tiny) != n) return false;
            z.winding_count = n;
            found_.push_back(z);
            return true;
        } catch (const std::runtime_error&) {
            return false;
        }
    }

    void settle_cluster(const SearchRect& r, int n) {
        try {
            LocatedZero z = newton_polish(f_, r.center(), tol_, n, opt_.max_newton);
            z.winding_count = n;
            if (top_.contains(z.z)) {
                found_.push_back(z);
                return;
            }
        } catch (const convergence_error&) {
        }
        const cplx c = r.center();
        found_.push_back(LocatedZero{c, std::abs(cplx(f_(c))), opt_.max_newton, n, false});
    }

    void subdivide(const SearchRect& r, int n, int depth) {
        static constexpr std::array<double, 6> kSplits{0.5, 0.5731, 0.4387, 0.6123, 0.3791, 0.5417};
        for (double t : kSplits) {
            const double xm = r.re_min + t * r.width();
            const double ym = r.im_min + (1.0 - t) * r.height();
            const std::array<SearchRect, 4> kids{SearchRect{r.re_min, xm, r.im_min, ym},
                                                 SearchRect{xm, r.re_max, r.im_min, ym},
                                                 SearchRect{r.re_min, xm, ym, r.im_max},
                                                 SearchRect{xm, r.re_max, ym, r.im_max}};
            std::array<int, 4> counts{};
            bool ok = true;
            for (std::size_t i = 0; i < 4 && ok; ++i) {
                if (kids[i].contains_any(opt_.exclusions)) {
                    ok = false;
                    break;
                }
                try {
                    counts[i] = count(kids[i]);
                } catch (const contour_error&) {
                    ok = false;
                }
            }
            if (!ok) continue;
            if (counts[0] + counts[1] + counts[2] + counts[3] != n) continue;
            for (std::size_t i = 0; i < 4; ++i) run(kids[i], counts[i], depth + 1);
            return;
        }
        throw contour_error("find_zeros: could not subdivide box without cutting through a zero");
    }

    const F& f_;
    SearchRect top_;
    double tol_;
    RootfindOptions opt_;
    double scale_;
    std::vector<LocatedZero> found_;
};

}  // namespace detail

/**
 * All zeros of `f` inside `rect`, each polished until |f(z)| < tol.
 *
 * Results are sorted by (Re z, Im z); zeros closer than 10 tol are merged.
 * A zero of multiplicity m is reported once with winding_count = m.
 */
template <ComplexFunction F>
std::vector<LocatedZero> find_zeros(const F& f, const SearchRect& rect, double tol, const RootfindOptions& opt = {}) {
    rect.validate();
    if (!(tol > 0.0)) throw std::invalid_argument("find_zeros: tol must be positive");
    if (rect.contains_any(opt.exclusions))
        throw std::invalid_argument("find_zeros: rectangle contains an excluded singular point");
    detail::ZeroSearch<F> search(f, rect, tol, opt);
    const int total = search.count(rect);
    search.run(rect, total, 0);
    std::vector<LocatedZero> zeros = search.take();
    std::sort(zeros.begin(), zeros.end(), [](const LocatedZero& a, const LocatedZero& b) {
        if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
        return a.z.imag() < b.z.imag();
    });
    std::vector<LocatedZero> merged;
    for (const auto& z : zeros) {
        if (!merged.empty() && std::abs(merged.back().z - z.z) < 10.0 * tol) {
            merged.back().winding_count += z.winding_count;
            continue;
        }
        merged.push_back(z);
    }
    return merged;
}

}  // namespace ctev::rootfind
