/**
 * @file forward.hpp
 * @brief Modal forward scattering by the unit ball and unit disk with a
 *        conductive boundary condition.
 *
 * Conventions
 * - Ball: u_inf(x, y) = (4 pi i / k) sum_p lambda_p sum_m Y_p^m(x) conj(Y_p^m(y)),
 *   so the far-field operator has eigenvalue (4 pi i / k) lambda_p with
 *   multiplicity 2p + 1.
 * - Disk: with u^s ~ gamma e^{ikr} r^{-1/2} u_inf and gamma = e^{i pi/4}/sqrt(8 pi k),
 *   u_inf(theta, phi) = 4i sum_m lambda_|m| e^{i m (theta - phi)}, so the
 *   eigenvalue on e^{i m phi} is 8 pi i lambda_|m| (multiplicity 2 for m >= 1).
 * - lambda = num / den where num is the eigenvalue determinant and den is the
 *   same expression with the exterior Bessel function replaced by H^(1).
 *   The scattered-field coefficient relative to the incident one is
 *   alpha = -lambda.
 */
#pragma once

#include <boost/math/special_functions/legendre.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctev/dispersion.hpp"
#include "ctev/errors.hpp"
#include "ctev/medium.hpp"
#include "ctev/specfun.hpp"

namespace ctev {

inline constexpr int kMaxModalOrder = 200;

struct ModalCoefficients {
    Geometry geometry = Geometry::sphere;
    double k = 0.0;
    Medium med = Medium::constant(1.0);
    std::vector<cplx> values;   ///< lambda_p, p = 0..truncation
    int truncation = 0;
};

namespace forward_detail {

inline void check_k(double k, const char* fn) {
    if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument(std::string(fn) + ": k must be positive and finite");
}

template <class JPair, class HPair>
cplx lambda_ratio(int order, double k, const Medium& med, JPair jpair, HPair hpair, const char* fn) {
    if (order < 0) throw std::invalid_argument(std::string(fn) + ": negative order");
    const cplx kc(k, 0.0);
    const cplx s = std::sqrt(med.index(kc));
    const cplx ks = kc * s;
    const auto in = jpair(order, ks);
    const auto jo = jpair(order, kc);
    const auto ho = hpair(order, kc);
    const cplx num = ks * in.deriv * jo.value - in.value * (kc * jo.deriv + med.eta() * jo.value);
    const cplx a = ks * in.deriv * ho.value;
    const cplx b = in.value * (kc * ho.deriv + med.eta() * ho.value);
    const cplx den = a - b;
    if (std::abs(den) < 1e-14 * (std::abs(a) + std::abs(b)) || den == cplx(0.0))
        throw resonance_error(std::string(fn) + ": modal system is singular at order " + std::to_string(order));
    return num / den;
}

}  // namespace forward_detail

/// Ball modal ratio lambda_p.
inline cplx mie_lambda_sphere(int p, double k, const Medium& med) {
    forward_detail::check_k(k, "mie_lambda_sphere");
    return forward_detail::lambda_ratio(p, k, med, specfun::sph_bessel_j_pair, specfun::sph_hankel1_pair,
                                        "mie_lambda_sphere");
}

/// Disk modal ratio lambda_m (same structure with J_m and H_m).
inline cplx mie_lambda_disk(int m, double k, const Medium& med) {
    forward_detail::check_k(k, "mie_lambda_disk");
    return forward_detail::lambda_ratio(std::abs(m), k, med, specfun::bessel_j_pair, specfun::hankel1_pair,
                                        "mie_lambda_disk");
}

/// Disk scattered-field coefficient relative to the incident J_m coefficient.
inline cplx mie_alpha_disk(int m, double k, const Medium& med) { return -mie_lambda_disk(m, k, med); }

inline cplx mie_lambda(Geometry g, int order, double k, const Medium& med) {
    return g == Geometry::sphere ? mie_lambda_sphere(order, k, med) : mie_lambda_disk(order, k, med);
}

/// Initial truncation ceil(k max(1, |sqrt n|)) + 15.
inline int truncation_order(double k, const Medium& med) {
    const double s = std::max(1.0, std::abs(std::sqrt(med.index(cplx(k, 0.0)))));
    return static_cast<int>(std::ceil(k * s)) + 15;
}

/**
 * lambda_0..lambda_P with P from truncation_order, extended by 10 until
 * |lambda_P| <= tail_tol max|lambda| (or all vanish).
 */
inline ModalCoefficients modal_coefficients(Geometry g, double k, const Medium& med, double tail_tol = 1e-15) {
    forward_detail::check_k(k, "modal_coefficients");
    ModalCoefficients mc{g, k, med, {}, truncation_order(k, med)};
    for (int p = 0; p <= mc.truncation; ++p) mc.values.push_back(mie_lambda(g, p, k, med));
    auto max_abs = [&] {
        double m = 0.0;
        for (auto v : mc.values) m = std::max(m, std::abs(v));
        return m;
    };
    while (std::abs(mc.values.back()) > tail_tol * max_abs()) {
        if (mc.truncation + 10 > kMaxModalOrder)
            throw convergence_error("modal_coefficients: modal series did not decay by order " +
                                    std::to_string(kMaxModalOrder));
        for (int p = mc.truncation + 1; p <= mc.truncation + 10; ++p) mc.values.push_back(mie_lambda(g, p, k, med));
        mc.truncation += 10;
    }
    return mc;
}

struct FarFieldEig {
    int order = 0;
    cplx eig;
    int multiplicity = 1;
};

/// Far-field operator eigenvalue carried by a modal ratio.
inline cplx farfield_eig_from_lambda(Geometry g, double k, cplx lambda) {
    const cplx i(0.0, 1.0);
    return g == Geometry::sphere ? 4.0 * std::numbers::pi * i / k * lambda : 8.0 * std::numbers::pi * i * lambda;
}

/**
 * Far-field operator eigenvalues by modal order, dropping orders with
 * |lambda| < tol. Multiplicity 2p + 1 (ball) or 2 for m >= 1 (disk).
 */
inline std::vector<FarFieldEig> farfield_operator_eigs(Geometry g, double k, const Medium& med, double tol) {
    const ModalCoefficients mc = modal_coefficients(g, k, med);
    std::vector<FarFieldEig> out;
    for (int p = 0; p <= mc.truncation; ++p) {
        if (std::abs(mc.values[p]) < tol) continue;
        const int mult = g == Geometry::sphere ? 2 * p + 1 : (p == 0 ? 1 : 2);
        out.push_back({p, farfield_eig_from_lambda(g, k, mc.values[p]), mult});
    }
    return out;
}

using Vec3 = std::array<double, 3>;

inline Vec3 direction_from_angles(double polar, double azimuth) {
    return {std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth), std::cos(polar)};
}

/// Ball far-field pattern for unit directions xhat (observation) and yhat (incidence).
inline cplx farfield_pattern_sphere(const Vec3& xhat, const Vec3& yhat, double k, const Medium& med,
                                    int extra_orders = 0) {
    ModalCoefficients mc = modal_coefficients(Geometry::sphere, k, med);
    for (int p = mc.truncation + 1; p <= mc.truncation + extra_orders; ++p)
        mc.values.push_back(mie_lambda_sphere(p, k, med));
    const double c = std::clamp(xhat[0] * yhat[0] + xhat[1] * yhat[1] + xhat[2] * yhat[2], -1.0, 1.0);
    // sum_m Y_p^m(x) conj(Y_p^m(y)) = (2p + 1) P_p(x.y) / (4 pi)
    cplx sum = 0.0;
    for (std::size_t p = 0; p < mc.values.size(); ++p) {
        const int pi = static_cast<int>(p);
        sum += static_cast<double>(2 * pi + 1) * boost::math::legendre_p(pi, c) * mc.values[p];
    }
    return cplx(0.0, 1.0) / k * sum;
}

/// Disk far-field pattern at observation angle theta for incidence angle phi.
inline cplx farfield_pattern_disk(double theta, double phi, double k, const Medium& med, int extra_orders = 0) {
    ModalCoefficients mc = modal_coefficients(Geometry::disk, k, med);
    for (int p = mc.truncation + 1; p <= mc.truncation + extra_orders; ++p)
        mc.values.push_back(mie_lambda_disk(p, k, med));
    cplx sum = mc.values[0];
    for (std::size_t m = 1; m < mc.values.size(); ++m)
        sum += 2.0 * std::cos(static_cast<double>(m) * (theta - phi)) * mc.values[m];
    return cplx(0.0, 4.0) * sum;
}

/**
 * Far-field pattern from angles. On the ball both directions lie in the
 * x-z plane with the given polar angles.
 */
inline cplx farfield_pattern(double xhat_angle, double yhat_angle, double k, const Medium& med, Geometry g) {
    if (g == Geometry::disk) return farfield_pattern_disk(xhat_angle, yhat_angle, k, med);
    return farfield_pattern_sphere(direction_from_angles(xhat_angle, 0.0), direction_from_angles(yhat_angle, 0.0), k,
                                   med);
}

/// Truncated ball plane-wave expansion sum_p i^p (2p+1) j_p(k|x|) P_p(cos angle(x, d)).
inline cplx plane_wave_series_sphere(const Vec3& x, const Vec3& d, double k, int P) {
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    const double c = r == 0.0 ? 1.0 : std::clamp((x[0] * d[0] + x[1] * d[1] + x[2] * d[2]) / r, -1.0, 1.0);
    const auto j = specfun::sph_bessel_j_seq(P, cplx(k * r, 0.0));
    cplx sum = 0.0, ip = 1.0;
    for (int p = 0; p <= P; ++p) {
        sum += ip * static_cast<double>(2 * p + 1) * j[p] * boost::math::legendre_p(p, c);
        ip *= cplx(0.0, 1.0);
    }
    return sum;
}

/**
 * Squared norm of the far-field-equation solution for the point z with
 * |z| = z_radius on the ball:
 *   ||g_z||^2 = k^2 sum_{p<=P} (2p+1)/(4 pi) |j_p(k |z|)|^2 / |lambda_p|^2.
 * Returns +inf when some lambda_p vanishes to within 1e-150.
 */
inline double lsm_gnorm(double k, double z_radius, const Medium& med, int P) {
    forward_detail::check_k(k, "lsm_gnorm");
    if (!(z_radius >= 0.0 && z_radius < 1.0)) throw std::invalid_argument("lsm_gnorm: z_radius must lie in [0, 1)");
    if (P < 0 || P > kMaxModalOrder) throw std::invalid_argument("lsm_gnorm: P out of range");
    const auto j = specfun::sph_bessel_j_seq(P, cplx(k * z_radius, 0.0));
    double sum = 0.0;
    for (int p = 0; p <= P; ++p) {
        if (j[p] == cplx(0.0)) continue;
        const double lam = std::abs(mie_lambda_sphere(p, k, med));
        if (lam < 1e-150) return std::numeric_limits<double>::infinity();
        sum += static_cast<double>(2 * p + 1) / (4.0 * std::numbers::pi) * std::norm(j[p]) / (lam * lam);
    }
    return k * k * sum;
}

/// Scattered near-field samples on the circle |x| = R_C, rows = receivers, columns = sources.
struct NearFieldDataset {
    double k = 0.0;
    double R_C = 0.0;
    std::vector<double> source_angles;
    std::vector<double> receiver_angles;
    std::vector<cplx> values;   ///< row-major [receiver][source]

    [[nodiscard]] std::size_t n_rec() const { return receiver_angles.size(); }
    [[nodiscard]] std::size_t n_src() const { return source_angles.size(); }
    [[nodiscard]] cplx at(std::size_t rec, std::size_t src) const { return values[rec * n_src() + src]; }
    cplx& at(std::size_t rec, std::size_t src) { return values[rec * n_src() + src]; }

    void validate() const {
        if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("NearFieldDataset: k must be positive");
        if (!(R_C > 1.0) || !std::isfinite(R_C)) throw std::invalid_argument("NearFieldDataset: R_C must exceed 1");
        if (values.size() != n_rec() * n_src()) throw std::invalid_argument("NearFieldDataset: value count mismatch");
    }
};

inline std::vector<double> equispaced_angles(int count) {
    std::vector<double> a(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) a[static_cast<std::size_t>(i)] = 2.0 * std::numbers::pi * i / count;
    return a;
}

namespace forward_detail {

// Modal symbols s_m = (i/4) alpha_m H_m(k R)^2 for m = 0..M, with M grown until the tail is negligible.
inline std::vector<cplx> nearfield_symbols(double k, const Medium& med, double R) {
    int M = static_cast<int>(std::ceil(k * R * std::max(1.0, std::abs(std::sqrt(med.index(cplx(k, 0.0))))))) + 15;
    for (;;) {
        if (M > kMaxModalOrder) throw convergence_error("synth_nearfield: modal series did not converge");
        const auto h = specfun::hankel1_seq(M, cplx(k * R, 0.0));
        std::vector<cplx> s(static_cast<std::size_t>(M) + 1);
        double mx = 0.0;
        for (int m = 0; m <= M; ++m) {
            s[m] = cplx(0.0, 0.25) * mie_alpha_disk(m, k, med) * h[m] * h[m];
            mx = std::max(mx, std::abs(s[m]));
        }
        if (mx == 0.0 || std::abs(s[M]) <= 1e-16 * mx) return s;
        M += 10;
    }
}

}  // namespace forward_detail

/**
 * Disk near-field data for point sources Phi_k(., y), |y| = R_C, observed on
 * the same circle: u^s(x, y) = (i/4) sum_m alpha_m H_m(k R_C)^2 e^{i m (theta_x - theta_y)}.
 */
inline NearFieldDataset synth_nearfield(double k, const Medium& med, double R_C, int n_src = 64, int n_rec = 64) {
    forward_detail::check_k(k, "synth_nearfield");
    if (!(R_C > 1.0)) throw std::invalid_argument("synth_nearfield: R_C must exceed 1");
    if (n_src < 1 || n_rec < 1) throw std::invalid_argument("synth_nearfield: need at least one source and receiver");
    const auto s = forward_detail::nearfield_symbols(k, med, R_C);
    NearFieldDataset nf{k, R_C, equispaced_angles(n_src), equispaced_angles(n_rec), {}};
    nf.values.resize(static_cast<std::size_t>(n_src) * static_cast<std::size_t>(n_rec));
    for (std::size_t r = 0; r < nf.n_rec(); ++r) {
        for (std::size_t c = 0; c < nf.n_src(); ++c) {
            const double d = nf.receiver_angles[r] - nf.source_angles[c];
            cplx v = s[0];
            for (std::size_t m = 1; m < s.size(); ++m) v += 2.0 * std::cos(static_cast<double>(m) * d) * s[m];
            nf.at(r, c) = v;
        }
    }
    return nf;
}

/// Adds complex Gaussian noise with Frobenius norm `level` times that of the data.
inline NearFieldDataset add_noise(NearFieldDataset nf, double level, unsigned long long seed) {
    if (level < 0.0) throw std::invalid_argument("add_noise: level must be >= 0");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<cplx> e(nf.values.size());
    double ne = 0.0, nd = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        const double re = g(rng);
        const double im = g(rng);
        e[i] = cplx(re, im);
        ne += std::norm(e[i]);
        nd += std::norm(nf.values[i]);
    }
    const double scale = ne > 0.0 ? level * std::sqrt(nd / ne) : 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) nf.values[i] += scale * e[i];
    return nf;
}

// Serialization

inline std::string to_csv(const NearFieldDataset& nf) {
    nf.validate();
    std::ostringstream os;
    os << std::setprecision(17);
    os << "k," << nf.k << ",R_C," << nf.R_C << ",n_rec," << nf.n_rec() << ",n_src," << nf.n_src() << '\n';
    os << "source_angles";
    for (double a : nf.source_angles) os << ',' << a;
    os << "\nreceiver_angles";
    for (double a : nf.receiver_angles) os << ',' << a;
    os << '\n';
    for (std::size_t r = 0; r < nf.n_rec(); ++r) {
        for (std::size_t c = 0; c < nf.n_src(); ++c) {
            if (c) os << ',';
            os << nf.at(r, c).real() << ',' << nf.at(r, c).imag();
        }
        os << '\n';
    }
    return os.str();
}

namespace forward_detail {

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) out.push_back(cell);
    return out;
}

inline double to_double(const std::string& s) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("near-field CSV: bad number '" + s + "'");
    return v;
}

}  // namespace forward_detail

inline NearFieldDataset nearfield_from_csv(const std::string& text) {
    using forward_detail::split_csv;
    using forward_detail::to_double;
    std::istringstream is(text);
    std::string line;
    NearFieldDataset nf;
    if (!std::getline(is, line)) throw std::invalid_argument("near-field CSV: empty input");
    const auto head = split_csv(line);
    if (head.size() != 8 || head[0] != "k" || head[2] != "R_C" || head[4] != "n_rec" || head[6] != "n_src")
        throw std::invalid_argument("near-field CSV: malformed header");
    nf.k = to_double(head[1]);
    nf.R_C = to_double(head[3]);
    const auto n_rec = static_cast<std::size_t>(std::stoul(head[5]));
    const auto n_src = static_cast<std::size_t>(std::stoul(head[7]));
    auto read_angles = [&](const char* tag, std::vector<double>& dst, std::size_t count) {
        if (!std::getline(is, line)) throw std::invalid_argument(std::string("near-field CSV: missing ") + tag);
        const auto cells = split_csv(line);
        if (cells.empty() || cells[0] != tag || cells.size() != count + 1)
            throw std::invalid_argument(std::string("near-field CSV: malformed ") + tag);
        for (std::size_t i = 1; i < cells.size(); ++i) dst.push_back(to_double(cells[i]));
    };
    read_angles("source_angles", nf.source_angles, n_src);
    read_angles("receiver_angles", nf.receiver_angles, n_rec);
    for (std::size_t r = 0; r < n_rec; ++r) {
        if (!std::getline(is, line)) throw std::invalid_argument("near-field CSV: missing data row");
        const auto cells = split_csv(line);
        if (cells.size() != 2 * n_src) throw std::invalid_argument("near-field CSV: wrong data row length");
        for (std::size_t c = 0; c < n_src; ++c) nf.values.emplace_back(to_double(cells[2 * c]), to_double(cells[2 * c + 1]));
    }
    nf.validate();
    return nf;
}

inline nlohmann::json to_json(const NearFieldDataset& nf) {
    nf.validate();
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (std::size_t r = 0; r < nf.n_rec(); ++r) {
        std::vector<double> rr, ii;
        for (std::size_t c = 0; c < nf.n_src(); ++c) {
            rr.push_back(nf.at(r, c).real());
            ii.push_back(nf.at(r, c).imag());
        }
        re.push_back(rr);
        im.push_back(ii);
    }
    return {{"format", "ctev-nearfield"},
            {"version", 1},
            {"k", nf.k},
            {"R_C", nf.R_C},
            {"layout", "values[receiver][source]"},
            {"source_angles", nf.source_angles},
            {"receiver_angles", nf.receiver_angles},
            {"values_re", re},
            {"values_im", im}};
}

inline NearFieldDataset nearfield_from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "ctev-nearfield") throw std::invalid_argument("near-field JSON: unknown format");
    NearFieldDataset nf;
    nf.k = j.at("k").get<double>();
    nf.R_C = j.at("R_C").get<double>();
    nf.source_angles = j.at("source_angles").get<std::vector<double>>();
    nf.receiver_angles = j.at("receiver_angles").get<std::vector<double>>();
    const auto re = j.at("values_re").get<std::vector<std::vector<double>>>();
    const auto im = j.at("values_im").get<std::vector<std::vector<double>>>();
    if (re.size() != nf.n_rec() || im.size() != nf.n_rec())
        throw std::invalid_argument("near-field JSON: row count mismatch");
    for (std::size_t r = 0; r < nf.n_rec(); ++r) {
        if (re[r].size() != nf.n_src() || im[r].size() != nf.n_src())
            throw std::invalid_argument("near-field JSON: column count mismatch");
        for (std::size_t c = 0; c < nf.n_src(); ++c) nf.values.emplace_back(re[r][c], im[r][c]);
    }
    nf.validate();
    return nf;
}

}  // namespace ctev
