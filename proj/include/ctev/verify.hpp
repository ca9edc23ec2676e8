/**
 * @file verify.hpp
 * @brief Property checks and golden-table comparisons run by `ctev verify`.
 */
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ctev/experiments.hpp"

namespace ctev {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

namespace golden {

inline const std::vector<cplx>& sphere_n3() {
    static const std::vector<cplx> v{{4.443358, 0.0}, {8.328578, 0.0}, {3.003079, 0.723476}, {6.305573, 0.787309},
                                     {9.598536, 0.669770}};
    return v;
}

inline const std::vector<cplx>& disk_n3() {
    static const std::vector<cplx> v{{4.159236, 0.0}, {8.261173, 0.0}, {2.363421, 0.781661}, {5.646922, 0.735262},
                                     {8.814961, 0.318519}};
    return v;
}

// Eigenvalue EOC columns, rows eta = 1/2 .. 1/256.
inline const std::vector<std::vector<double>>& eoc_sphere() {
    static const std::vector<std::vector<double>> v{
        {0.977, 0.993, 0.998, 0.999, 1.000, 1.000, 1.000, 1.000},
        {1.023, 1.013, 1.007, 1.003, 1.002, 1.001, 1.000, 1.000},
        {1.068, 1.044, 1.024, 1.012, 1.006, 1.003, 1.002, 1.001},
        {1.007, 1.006, 1.004, 1.002, 1.001, 1.001, 1.000, 1.000},
        {0.991, 0.997, 0.999, 0.999, 1.000, 1.000, 1.000, 1.000}};
    return v;
}

inline const std::vector<std::vector<double>>& eoc_disk() {
    static const std::vector<std::vector<double>> v{
        {1.018, 1.014, 1.009, 1.005, 1.002, 1.001, 1.001, 1.000},
        {1.108, 1.055, 1.028, 1.014, 1.007, 1.003, 1.002, 1.001},
        {1.081, 1.056, 1.030, 1.015, 1.008, 1.004, 1.002, 1.001},
        {0.997, 1.002, 1.002, 1.001, 1.001, 1.000, 0.999, 1.000},
        {0.950, 0.977, 0.990, 0.996, 0.997, 1.007, 0.989, 0.999}};
    return v;
}

// Eigenfunction EOC columns: w and v for the first real branch, then for the first complex branch.
inline const std::vector<std::vector<double>>& eoc_ef_sphere() {
    static const std::vector<std::vector<double>> v{
        {0.992, 1.002, 1.002, 1.001, 1.001, 1.000, 1.000, 1.000},
        {1.004, 1.000, 0.999, 1.000, 1.000, 1.000, 1.000, 1.000},
        {1.093, 1.071, 1.040, 1.021, 1.010, 1.005, 1.003, 1.001},
        {1.075, 1.063, 1.036, 1.019, 1.010, 1.005, 1.002, 1.001}};
    return v;
}

inline const std::vector<std::vector<double>>& eoc_ef_disk() {
    static const std::vector<std::vector<double>> v{
        {1.034, 1.022, 1.012, 1.006, 1.003, 1.002, 1.001, 1.000},
        {0.941, 0.967, 0.983, 0.992, 0.996, 0.998, 0.999, 0.999},
        {1.082, 1.083, 1.047, 1.025, 1.013, 1.006, 1.003, 1.002},
        {1.071, 1.078, 1.046, 1.024, 1.012, 1.006, 1.003, 1.002}};
    return v;
}

struct IodGolden {
    Geometry geometry;
    double eta;
    std::vector<double> ks;
};

inline const std::vector<IodGolden>& iod_tables() {
    static const std::vector<IodGolden> v{
        {Geometry::sphere, 0.1, {3.10, 3.13, 3.68, 4.25, 4.82}},
        {Geometry::sphere, 0.5, {2.97, 3.08, 3.64, 4.22, 4.79}},
        {Geometry::sphere, 1.0, {2.79, 3.02, 3.60, 4.18, 4.76}},
        {Geometry::sphere, 3.0, {2.20, 2.80, 3.43, 4.04, 4.64}},
        {Geometry::disk, 1.0, {2.77, 3.29, 3.31, 3.89, 4.47}},
        {Geometry::disk, 3.0, {2.49, 3.12, 3.14, 3.74, 4.34, 4.94}}};
    return v;
}

}  // namespace golden

namespace verify_detail {

inline std::string num(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

/// Max distance between matched roots, or +inf when the sets differ in size.
inline double match_roots(const std::vector<cplx>& got, const std::vector<cplx>& want) {
    if (got.size() != want.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (cplx w : want) {
        double best = std::numeric_limits<double>::infinity();
        for (cplx g : got) best = std::min(best, std::abs(g - w));
        worst = std::max(worst, best);
    }
    return worst;
}

inline double max_table_diff(const std::vector<std::vector<double>>& got, const std::vector<std::vector<double>>& want) {
    if (got.size() != want.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (std::size_t c = 0; c < want.size(); ++c) {
        if (got[c].size() != want[c].size()) return std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < want[c].size(); ++i) worst = std::max(worst, std::abs(got[c][i] - want[c][i]));
    }
    return worst;
}

// Angles in [-0.02, pi + 0.02], so Im z >= -1 on the annulus. Deeper in the lower half plane J and H
// both grow like e^{|Im z|} and the Wronskian combination cancels to O(eps e^{2 |Im z|}).
inline std::vector<cplx> annulus_samples(std::mt19937_64& rng, int count, double rmin, double rmax) {
    std::uniform_real_distribution<double> ur(std::log(rmin), std::log(rmax)), ua(-0.02, std::numbers::pi + 0.02);
    std::vector<cplx> z;
    for (int i = 0; i < count; ++i) z.push_back(std::polar(std::exp(ur(rng)), ua(rng)));
    return z;
}

/// Least-squares circle through the origin: |e|^2 = 2 Re(conj(c) e). Returns max | |e - c| - |c| |.
inline double circle_fit_residual(const std::vector<cplx>& e) {
    double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
    for (cplx z : e) {
        const double x = 2 * z.real(), y = 2 * z.imag(), r = std::norm(z);
        a11 += x * x;
        a12 += x * y;
        a22 += y * y;
        b1 += x * r;
        b2 += y * r;
    }
    const double det = a11 * a22 - a12 * a12;
    const cplx c((a22 * b1 - a12 * b2) / det, (a11 * b2 - a12 * b1) / det);
    double worst = 0.0;
    for (cplx z : e) worst = std::max(worst, std::abs(std::abs(z - c) - std::abs(c)));
    return worst;
}

inline rootfind::SearchRect omega() { return {0.5, 10.0, -0.01, 10.0}; }

}  // namespace verify_detail

/// Runs every property check; the suite passes when all entries pass.
inline std::vector<CheckResult> run_property_suite(unsigned long long seed = 20240601ULL) {
    using namespace verify_detail;
    std::vector<CheckResult> out;
    auto run = [&](const std::string& name, const std::function<std::pair<bool, std::string>()>& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        CheckResult r;
        r.name = name;
        try {
            auto [ok, detail] = fn();
            r.passed = ok;
            r.detail = detail;
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(std::move(r));
    };
    std::mt19937_64 rng(seed);
    const auto zs = annulus_samples(rng, 200, 0.1, 50.0);
    const cplx I(0.0, 1.0);

    run("wronskian_cylindrical", [&] {
        double worst = 0.0;
        for (cplx z : zs) {
            const auto J = specfun::bessel_j_seq(41, z);
            const auto H = specfun::hankel1_seq(41, z);
            for (int p = 0; p <= 40; ++p) {
                const cplx jd = p == 0 ? -J[1] : 0.5 * (J[p - 1] - J[p + 1]);
                const cplx hd = p == 0 ? -H[1] : 0.5 * (H[p - 1] - H[p + 1]);
                const cplx w = J[p] * hd - jd * H[p];
                worst = std::max(worst, std::abs(w - 2.0 * I / (std::numbers::pi * z)) / std::abs(2.0 / (std::numbers::pi * z)));
            }
        }
        return std::pair{worst < 1e-10, "max rel " + num(worst)};
    });
    run("wronskian_spherical", [&] {
        double worst = 0.0;
        for (cplx z : zs) {
            for (int p = 0; p <= 40; p += 1) {
                const auto j = specfun::sph_bessel_j_pair(p, z);
                const auto h = specfun::sph_hankel1_pair(p, z);
                const cplx w = j.value * h.deriv - j.deriv * h.value;
                worst = std::max(worst, std::abs(w - I / (z * z)) * std::norm(z));
            }
        }
        return std::pair{worst < 1e-10, "max rel " + num(worst)};
    });
    run("conjugate_symmetry", [&] {
        double worst = 0.0;
        for (cplx z : zs) {
            for (int p : {0, 1, 5, 17, 40}) {
                const cplx a = specfun::bessel_j(p, std::conj(z)), b = std::conj(specfun::bessel_j(p, z));
                const cplx c = specfun::sph_bessel_j(p, std::conj(z)), d = std::conj(specfun::sph_bessel_j(p, z));
                worst = std::max(worst, std::abs(a - b) / std::max(std::abs(b), 1e-300));
                worst = std::max(worst, std::abs(c - d) / std::max(std::abs(d), 1e-300));
            }
        }
        return std::pair{worst < 1e-12, "max rel " + num(worst)};
    });
    run("derivative_consistency", [&] {
        double worst = 0.0;
        const double h = 1e-6;
        for (std::size_t i = 0; i < zs.size(); i += 5) {
            const cplx z = zs[i];
            if (std::abs(z) < 0.5) continue;
            for (int p : {0, 1, 3, 8}) {
                auto chk = [&](auto f, cplx d) {
                    const cplx fd = (f(p, z + h) - f(p, z - h)) / (2 * h);
                    worst = std::max(worst, std::abs(fd - d) / std::max(1.0, std::abs(d)));
                };
                chk(specfun::bessel_j, specfun::bessel_j_deriv(p, z));
                chk(specfun::hankel1, specfun::hankel1_deriv(p, z));
                chk(specfun::sph_bessel_j, specfun::sph_bessel_j_deriv(p, z));
                chk(specfun::sph_hankel1, specfun::sph_hankel1_deriv(p, z));
            }
        }
        return std::pair{worst < 1e-6, "max rel " + num(worst)};
    });
    run("rootfind_count_conservation", [&] {
        const ScaledDeterminant f(Geometry::sphere, Medium::constant(3.0, 0.0), 0);
        const rootfind::SearchRect r{0.5, 10.0, -0.5, 10.0};
        const int total = rootfind::count_zeros(f, r);
        const int parts = rootfind::count_zeros(f, {0.5, 5.3, -0.5, 4.7}) + rootfind::count_zeros(f, {5.3, 10.0, -0.5, 4.7}) +
                          rootfind::count_zeros(f, {0.5, 5.3, 4.7, 10.0}) + rootfind::count_zeros(f, {5.3, 10.0, 4.7, 10.0});
        return std::pair{total == 5 && parts == total,
                         "total " + std::to_string(total) + ", partition " + std::to_string(parts)};
    });
    run("golden_sphere_eigenvalues", [&] {
        std::vector<cplx> ks;
        for (const auto& r : compute_ites(Geometry::sphere, Medium::constant(3.0, 0.0), omega(), 0, 1e-10)) ks.push_back(r.k);
        const double d = match_roots(ks, golden::sphere_n3());
        return std::pair{d <= 1e-5, std::to_string(ks.size()) + " roots, max err " + num(d)};
    });
    run("golden_disk_eigenvalues", [&] {
        std::vector<cplx> ks;
        for (const auto& r : compute_ites(Geometry::disk, Medium::constant(3.0, 0.0), omega(), 0, 1e-10)) ks.push_back(r.k);
        const double d = match_roots(ks, golden::disk_n3());
        return std::pair{d <= 1e-5, std::to_string(ks.size()) + " roots, max err " + num(d)};
    });
    run("root_consistency_winding", [&] {
        const Medium med = Medium::constant(3.0, 0.5);
        int bad = 0;
        const auto recs = compute_ites(Geometry::disk, med, omega(), 2, 1e-10);
        for (const auto& r : recs) {
            const ScaledDeterminant f(Geometry::disk, med, r.order);
            const double h = 1e-3;
            const int w = rootfind::count_zeros(f, {r.k.real() - h, r.k.real() + h, r.k.imag() - h, r.k.imag() + h});
            if (w != 1 || !(r.residual < 1e-10)) ++bad;
        }
        return std::pair{bad == 0 && !recs.empty(), std::to_string(recs.size()) + " roots, " + std::to_string(bad) + " failing"};
    });
    run("eta_zero_continuity", [&] {
        std::vector<cplx> a, b;
        for (const auto& r : compute_ites(Geometry::sphere, Medium::constant(3.0, 0.0), omega(), 0, 1e-10)) a.push_back(r.k);
        for (const auto& r : compute_ites(Geometry::sphere, Medium::constant(3.0, 1e-12), omega(), 0, 1e-10)) b.push_back(r.k);
        const double d = match_roots(b, a);
        return std::pair{d < 1e-9, "max shift " + num(d)};
    });

    EocEvResult eoc_s, eoc_d;
    run("golden_eoc_eigenvalues", [&] {
        auto cfg = parse_config({{"experiment", "eoc-ev"}, {"geometry", "sphere"}, {"n", 3},
                                 {"eta_sequence", {{"base", 0.5}, {"first", 0}, {"last", 8}}}});
        eoc_s = run_eoc_ev(cfg);
        cfg.geometry = Geometry::disk;
        eoc_d = run_eoc_ev(cfg);
        const double ds = max_table_diff(eoc_s.eoc, golden::eoc_sphere());
        const double dd = max_table_diff(eoc_d.eoc, golden::eoc_disk());
        return std::pair{ds <= 0.02 && dd <= 0.02, "sphere max diff " + num(ds) + ", disk " + num(dd)};
    });
    run("eoc_envelope", [&] {
        double lo = 10, hi = -10;
        for (const auto* r : {&eoc_s, &eoc_d})
            for (const auto& col : r->eoc)
                for (double v : col) lo = std::min(lo, v), hi = std::max(hi, v);
        return std::pair{lo >= 0.94 && hi <= 1.11, "range [" + num(lo) + ", " + num(hi) + "]"};
    });
    run("eta_monotonicity", [&] {
        int bad = 0, checked = 0;
        for (const auto* r : {&eoc_s, &eoc_d}) {
            const auto& br = r->branches;
            for (std::size_t b = 0; b < br.reference.size(); ++b) {
                if (std::abs(br.reference[b].imag()) > 1e-8) continue;
                ++checked;
                // etas decrease along the index, so k must increase and stay below k_0.
                for (std::size_t i = 0; i < br.etas.size(); ++i) {
                    if (br.k[b][i].real() > br.reference[b].real() + 1e-12) ++bad;
                    if (i > 0 && !(br.k[b][i].real() > br.k[b][i - 1].real())) ++bad;
                }
            }
        }
        return std::pair{bad == 0 && checked == 4, std::to_string(checked) + " real branches, " + std::to_string(bad) + " violations"};
    });
    run("golden_eoc_eigenfunctions", [&] {
        auto cfg = parse_config({{"experiment", "eoc-ef"}, {"geometry", "sphere"}, {"n", 3},
                                 {"eta_sequence", {{"base", 0.5}, {"first", 0}, {"last", 8}}}});
        auto flatten = [](const EocEfResult& r) {
            std::vector<std::vector<double>> t;
            for (std::size_t s = 0; s < r.selected.size(); ++s) {
                t.push_back(r.eoc_w[s]);
                t.push_back(r.eoc_v[s]);
            }
            return t;
        };
        const auto s = run_eoc_ef(cfg);
        cfg.geometry = Geometry::disk;
        const auto d = run_eoc_ef(cfg);
        const double ds = max_table_diff(flatten(s), golden::eoc_ef_sphere());
        const double dd = max_table_diff(flatten(d), golden::eoc_ef_disk());
        return std::pair{ds <= 0.02 && dd <= 0.02, "sphere max diff " + num(ds) + ", disk " + num(dd)};
    });
    run("eigenfunction_lipschitz", [&] {
        // max_r |w_eta - w_0| / |k_eta - k_0| stays bounded along the first real sphere branch.
        const auto& br = eoc_s.branches;
        const cplx k0 = br.reference[0];
        const auto w0 = RadialEigenfunction::make(Geometry::sphere, k0, 3.0, Component::w);
        std::vector<double> ratios;
        for (cplx k : br.k[0]) {
            const auto w = RadialEigenfunction::make(Geometry::sphere, k, 3.0, Component::w);
            double mx = 0.0;
            for (int i = 0; i <= 200; ++i) mx = std::max(mx, std::abs(eval_w(i / 200.0, w) - eval_w(i / 200.0, w0)));
            ratios.push_back(mx / std::abs(k - k0));
        }
        const double first = ratios.front(), last = ratios.back();
        const double mx = *std::max_element(ratios.begin(), ratios.end());
        return std::pair{mx <= 2.0 * first && last <= 2.0 * first, "ratio first " + num(first) + ", last " + num(last)};
    });

    run("energy_conservation_sphere", [&] {
        std::uniform_real_distribution<double> uk(0.5, 10.0), un(1.1, 5.0), ue(0.0, 3.0);
        double worst = 0.0;
        for (int t = 0; t < 20; ++t) {
            const double k = uk(rng);
            const Medium med = Medium::constant(un(rng), ue(rng));
            const auto mc = modal_coefficients(Geometry::sphere, k, med);
            for (cplx l : mc.values) worst = std::max(worst, std::abs(std::abs(1.0 - 2.0 * l) - 1.0));
        }
        return std::pair{worst < 1e-10, "max | |1-2 lambda| - 1 | " + num(worst)};
    });
    run("circle_fit_disk", [&] {
        std::uniform_real_distribution<double> uk(0.5, 10.0), un(1.1, 5.0), ue(0.0, 3.0);
        double worst = 0.0;
        for (int t = 0; t < 20; ++t) {
            std::vector<cplx> e;
            for (const auto& fe : farfield_operator_eigs(Geometry::disk, uk(rng), Medium::constant(un(rng), ue(rng)), 1e-14))
                e.push_back(fe.eig);
            if (e.size() >= 3) worst = std::max(worst, circle_fit_residual(e));
        }
        return std::pair{worst < 1e-8, "max fit residual " + num(worst)};
    });
    run("reciprocity_farfield", [&] {
        std::uniform_real_distribution<double> ua(0.0, std::numbers::pi), ub(0.0, 2.0 * std::numbers::pi);
        double worst = 0.0;
        const Medium med = Medium::constant(3.0, cplx(0.7, 0.2));
        for (int t = 0; t < 20; ++t) {
            const Vec3 x = direction_from_angles(ua(rng), ub(rng)), y = direction_from_angles(ua(rng), ub(rng));
            const Vec3 mx{-x[0], -x[1], -x[2]}, my{-y[0], -y[1], -y[2]};
            const cplx a = farfield_pattern_sphere(x, y, 5.0, med), b = farfield_pattern_sphere(my, mx, 5.0, med);
            worst = std::max(worst, std::abs(a - b) / std::abs(a));
            const double th = ub(rng), ph = ub(rng);
            const cplx c = farfield_pattern_disk(th, ph, 5.0, med),
                       d = farfield_pattern_disk(ph + std::numbers::pi, th + std::numbers::pi, 5.0, med);
            worst = std::max(worst, std::abs(c - d) / std::abs(c));
        }
        return std::pair{worst < 1e-10, "max rel " + num(worst)};
    });
    run("truncation_stability", [&] {
        const Medium med = Medium::constant(3.0, 1.0);
        double worst = 0.0;
        for (double k : {1.0, 4.0, 9.5}) {
            const cplx a = farfield_pattern_sphere(direction_from_angles(0.4, 0), direction_from_angles(1.3, 0), k, med);
            const cplx b = farfield_pattern_sphere(direction_from_angles(0.4, 0), direction_from_angles(1.3, 0), k, med, 10);
            const cplx c = farfield_pattern_disk(0.4, 1.3, k, med), d = farfield_pattern_disk(0.4, 1.3, k, med, 10);
            worst = std::max({worst, std::abs(a - b) / std::abs(a), std::abs(c - d) / std::abs(c)});
        }
        return std::pair{worst < 1e-10, "max rel change " + num(worst)};
    });
    run("jacobi_anger", [&] {
        std::uniform_real_distribution<double> ur(0.0, 1.0), ua(0.0, std::numbers::pi), ub(0.0, 2.0 * std::numbers::pi);
        double worst = 0.0;
        for (int t = 0; t < 30; ++t) {
            const double k = 10.0 * ur(rng), r = ur(rng);
            const Vec3 xd = direction_from_angles(ua(rng), ub(rng)), d = direction_from_angles(ua(rng), ub(rng));
            const Vec3 x{r * xd[0], r * xd[1], r * xd[2]};
            const cplx exact = std::exp(I * k * (x[0] * d[0] + x[1] * d[1] + x[2] * d[2]));
            worst = std::max(worst, std::abs(plane_wave_series_sphere(x, d, k, 40) - exact));
        }
        return std::pair{worst < 1e-10, "max abs " + num(worst)};
    });
    run("lsm_blowup", [&] {
        auto cfg = parse_config({{"experiment", "lsm"}, {"n", 3}, {"k_grid", {{"min", 4.4}, {"max", 4.5}, {"step", 0.05}}}});
        const auto r = run_lsm(cfg);
        return std::pair{r.ratio > 100.0, "ratio " + num(r.ratio)};
    });

    run("golden_iod_tables", [&] {
        int bad = 0;
        std::ostringstream os;
        for (const auto& row : golden::iod_tables()) {
            const auto pc = phase_curves(row.geometry, Medium::constant(4.0, row.eta), 1.0, 5.0, 0.01, 1e-8);
            const auto d = detect_ites(pc, 0.1);
            bool ok = d.size() == row.ks.size();
            for (std::size_t i = 0; ok && i < d.size(); ++i) ok = std::abs(d[i] - row.ks[i]) <= 0.01 + 1e-9;
            if (!ok) {
                ++bad;
                os << to_string(row.geometry) << " eta=" << row.eta << " mismatch; ";
            }
        }
        return std::pair{bad == 0, bad == 0 ? std::string("6 rows match") : os.str()};
    });
    run("iod_misses_pi", [&] {
        auto cfg = parse_config({{"experiment", "iod"}, {"geometry", "sphere"}, {"n", 4}, {"etas", {1.0}}, {"max_order", 12}});
        const auto row = run_iod_row(cfg, 1.0);
        const bool in_roots = std::any_of(row.roots.begin(), row.roots.end(), [](const EigenvalueRecord& r) {
            return std::abs(r.k - std::numbers::pi) < 1e-6;
        });
        const bool in_iod = std::any_of(row.detections.begin(), row.detections.end(),
                                        [](double k) { return std::abs(k - std::numbers::pi) <= 0.01; });
        return std::pair{in_roots && !in_iod && row.unmatched.empty(),
                         std::string("pi in roots: ") + (in_roots ? "yes" : "no") + ", in detections: " +
                             (in_iod ? "yes" : "no") + ", unmatched detections: " + std::to_string(row.unmatched.size())};
    });
    run("iod_detections_are_roots", [&] {
        int unmatched = 0;
        for (const auto& row : golden::iod_tables()) {
            auto cfg = parse_config({{"experiment", "iod"}, {"geometry", std::string(to_string(row.geometry))}, {"n", 4},
                                     {"etas", {row.eta}}, {"max_order", 12}});
            unmatched += static_cast<int>(run_iod_row(cfg, row.eta).unmatched.size());
        }
        return std::pair{unmatched == 0, std::to_string(unmatched) + " detections away from every root"};
    });
    run("iod_phase_monotone_eta0", [&] {
        const auto pc = phase_curves(Geometry::sphere, Medium::constant(4.0, 0.0), 1.0, 5.0, 0.01, 1e-8);
        // Every decrease of a modal track must be a release from near pi.
        int bad = 0;
        std::map<int, std::vector<double>> tr;
        for (std::size_t i = 0; i < pc.k_grid.size(); ++i)
            for (const auto& e : pc.entries[i]) {
                auto& v = tr[e.order];
                v.resize(pc.k_grid.size(), std::numeric_limits<double>::quiet_NaN());
                v[i] = e.phase;
            }
        for (auto& [order, v] : tr) {
            v.resize(pc.k_grid.size(), std::numeric_limits<double>::quiet_NaN());
            for (std::size_t i = 0; i + 1 < v.size(); ++i)
                if (!std::isnan(v[i]) && !std::isnan(v[i + 1]) && v[i + 1] < v[i] && v[i] < std::numbers::pi - 0.1) ++bad;
        }
        return std::pair{bad == 0, std::to_string(bad) + " non-release decreases"};
    });
    run("iod_floor_invariance", [&] {
        int diff = 0;
        for (double eta : {0.0, 1.0}) {
            const Medium med = Medium::constant(4.0, eta);
            const auto a = phase_curves(Geometry::sphere, med, 1.0, 5.0, 0.01, 1e-8);
            const auto b = phase_curves(Geometry::sphere, med, 1.0, 5.0, 0.01, 1e-6);
            for (std::size_t i = 0; i < a.k_grid.size(); ++i)
                if (!(a.envelope[i] == b.envelope[i])) ++diff;
            if (detect_ites(a, 0.1) != detect_ites(b, 0.1)) ++diff;
        }
        return std::pair{diff == 0, std::to_string(diff) + " envelope/detection differences"};
    });

    run("dtn_closed_form", [&] {
        double worst = 0.0;
        for (double k : {0.7, 1.5, 3.1}) {
            const auto T = dtn_map(k, 2.0, 31);
            const auto C = dtn_closed_form(k * std::sqrt(2.0), 31);
            for (int m = -31; m <= 31; ++m)
                worst = std::max(worst, std::abs(T.at(m) - C.at(m)) / std::max(1.0, std::abs(C.at(m))));
        }
        return std::pair{worst < 1e-10, "max rel " + num(worst)};
    });
    run("reconstruction", [&] {
        auto cfg = parse_config({{"experiment", "recon"}, {"geometry", "disk"}, {"n", 2}, {"k", 1.5}, {"R_C", 2},
                                 {"etas", {0.5, {1.0, 0.5}, 0.0}}, {"alpha", 1e-10}});
        const auto run = run_recon(cfg);
        const bool ok = run.cases[0].err_direct < 1e-2 && run.cases[0].err_lsq < 1e-2 && run.cases[1].err_direct < 1e-2 &&
                        run.cases[1].err_lsq < 1e-2 && run.cases[2].err_direct < 1e-3 && run.cases[2].err_lsq < 1e-3;
        std::ostringstream os;
        for (const auto& c : run.cases) os << "direct " << num(c.err_direct) << " lsq " << num(c.err_lsq) << "; ";
        return std::pair{ok, os.str()};
    });
    run("absorbing_media", [&] {
        auto cfg = parse_config({{"experiment", "absorbing"}, {"geometry", "sphere"}, {"n1", 3}, {"eta", 1.0},
                                 {"n2_values", {0.1, 0.05, 0.025}},
                                 {"rect", {{"re_min", 0.5}, {"re_max", 10}, {"im_min", -0.25}, {"im_max", 10}}}});
        const auto r = run_absorbing(cfg);
        bool counts = true;
        for (const auto& row : r.rows) counts = counts && row.roots.size() == r.reference.size();
        return std::pair{r.all_in_region && r.converging && counts,
                         std::string("in region: ") + (r.all_in_region ? "yes" : "no") +
                             ", converging: " + (r.converging ? "yes" : "no")};
    });
    return out;
}

}  // namespace ctev
