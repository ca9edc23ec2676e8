/**
 * @file recon.hpp
 * @brief Boundary conductivity recovery from disk near-field data.
 *
 * Every operator acts diagonally on Fourier modes e^{i m theta} of the unit
 * circle:
 *   single layer to the circle R_C   a_m  = (i pi/2) J_m(k) H_m(k R_C)
 *   single layer on the boundary     V_m  = (i pi/2) J_m(k) H_m(k)
 *   double layer / adjoint           K_m  = (i pi/4) k (J_m H_m' + J_m' H_m)
 *   interior DtN at kappa = k sqrt n t_m  = V_m^{-1} (1/2 + K_m)
 * The exterior Neumann trace of the total field is (K_m - 1/2) f_m plus the
 * incident term; the incident point source at y contributes
 * c_m J_m(k r) with c_m = (i/4) H_m(k R_C) e^{-i m theta_y}.
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
#include "ctev/forward.hpp"
#include "ctev/medium.hpp"
#include "ctev/specfun.hpp"

namespace ctev {

/// Diagonal operator on modes -M..M; symbol[m + M] acts on e^{i m theta}.
struct ModalOperator {
    int M = 0;
    std::vector<cplx> symbol;

    [[nodiscard]] cplx at(int m) const { return symbol[static_cast<std::size_t>(m + M)]; }
};

/// Fourier coefficients on modes -M..M of a function on the unit circle.
struct LayerDensity {
    int M = 0;
    std::vector<cplx> coeffs;
    double residual = 0.0;   ///< relative data misfit ||A f - u^s|| / ||u^s||

    [[nodiscard]] cplx at(int m) const { return coeffs[static_cast<std::size_t>(m + M)]; }
};

using BoundaryFunction = LayerDensity;

namespace recon_detail {

template <class Symbol>
ModalOperator build(int M, Symbol sym) {
    if (M < 0) throw std::invalid_argument("modal operator: M must be >= 0");
    ModalOperator op{M, std::vector<cplx>(2 * static_cast<std::size_t>(M) + 1)};
    for (int m = 0; m <= M; ++m) op.symbol[M + m] = op.symbol[M - m] = sym(m);
    return op;
}

inline cplx synth(const LayerDensity& f, double theta) {
    cplx v = 0.0;
    for (int m = -f.M; m <= f.M; ++m) v += f.at(m) * std::exp(cplx(0.0, m * theta));
    return v;
}

// DFT coefficients on modes -M..M of equispaced samples.
inline std::vector<cplx> dft(const std::vector<cplx>& samples, const std::vector<double>& angles, int M) {
    const double n = static_cast<double>(samples.size());
    std::vector<cplx> c(2 * static_cast<std::size_t>(M) + 1);
    for (int m = -M; m <= M; ++m) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < samples.size(); ++j) s += samples[j] * std::exp(cplx(0.0, -m * angles[j]));
        c[static_cast<std::size_t>(m + M)] = s / n;
    }
    return c;
}

inline std::vector<cplx> column(const NearFieldDataset& nf, std::size_t src) {
    std::vector<cplx> col(nf.n_rec());
    for (std::size_t r = 0; r < nf.n_rec(); ++r) col[r] = nf.at(r, src);
    return col;
}

}  // namespace recon_detail

/// Single-layer map from the unit circle to the circle of radius R_C.
inline ModalOperator assemble_A_modal(double k, double R_C, int M) {
    if (!(k > 0.0)) throw std::invalid_argument("assemble_A_modal: k must be positive");
    if (!(R_C > 1.0)) throw std::invalid_argument("assemble_A_modal: R_C must exceed 1");
    const auto j = specfun::bessel_j_seq(M, cplx(k, 0.0));
    const auto h = specfun::hankel1_seq(M, cplx(k * R_C, 0.0));
    return recon_detail::build(M, [&](int m) { return cplx(0.0, 0.5 * std::numbers::pi) * j[m] * h[m]; });
}

/// Single layer V on the unit circle at wavenumber kappa.
inline ModalOperator single_layer_modal(cplx kappa, int M) {
    return recon_detail::build(M, [&](int m) {
        return cplx(0.0, 0.5 * std::numbers::pi) * specfun::bessel_j(m, kappa) * specfun::hankel1(m, kappa);
    });
}

/// Double layer K (equal to its adjoint K' on the circle) at wavenumber kappa.
inline ModalOperator double_layer_modal(cplx kappa, int M) {
    return recon_detail::build(M, [&](int m) {
        const auto J = specfun::bessel_j_pair(m, kappa);
        const auto H = specfun::hankel1_pair(m, kappa);
        return cplx(0.0, 0.25 * std::numbers::pi) * kappa * (J.value * H.deriv + J.deriv * H.value);
    });
}

/// Closed-form disk DtN symbol kappa J_m'(kappa) / J_m(kappa).
inline ModalOperator dtn_closed_form(cplx kappa, int M) {
    return recon_detail::build(M, [&](int m) {
        const auto J = specfun::bessel_j_pair(m, kappa);
        return kappa * J.deriv / J.value;
    });
}

/**
 * Interior DtN map T = V^{-1}(1/2 + K) at wavenumber k sqrt(n). Throws
 * dirichlet_eigenvalue_error when |J_m(k sqrt n)| < 1e-10 max(|J_m|, |kappa J_m'|)
 * for some |m| <= M.
 */
inline ModalOperator dtn_map(double k, cplx n, int M) {
    if (!(k > 0.0)) throw std::invalid_argument("dtn_map: k must be positive");
    const cplx kappa = k * std::sqrt(n);
    for (int m = 0; m <= M; ++m) {
        const auto J = specfun::bessel_j_pair(m, kappa);
        if (std::abs(J.value) < 1e-10 * std::max(std::abs(J.value), std::abs(kappa * J.deriv)))
            throw dirichlet_eigenvalue_error("dtn_map: k^2 n is numerically a Dirichlet eigenvalue (mode " +
                                             std::to_string(m) + ")");
    }
    const ModalOperator V = single_layer_modal(kappa, M);
    const ModalOperator K = double_layer_modal(kappa, M);
    return recon_detail::build(M, [&](int m) { return (0.5 + K.at(m)) / V.at(m); });
}

/// Largest usable mode for n equispaced samples.
inline int max_mode_for(std::size_t samples) { return std::max(0, static_cast<int>(samples) / 2 - 1); }

/**
 * Tikhonov-regularized single-layer densities, one per source:
 * f_m = conj(a_m) u_m / (alpha + |a_m|^2).
 */
inline std::vector<LayerDensity> solve_density(const NearFieldDataset& nf, double alpha) {
    nf.validate();
    if (!(alpha > 0.0)) throw std::invalid_argument("solve_density: alpha must be positive");
    const int M = max_mode_for(nf.n_rec());
    const ModalOperator A = assemble_A_modal(nf.k, nf.R_C, M);
    std::vector<LayerDensity> out;
    out.reserve(nf.n_src());
    for (std::size_t s = 0; s < nf.n_src(); ++s) {
        const auto col = recon_detail::column(nf, s);
        const auto uh = recon_detail::dft(col, nf.receiver_angles, M);
        LayerDensity f{M, std::vector<cplx>(uh.size())};
        for (int m = -M; m <= M; ++m) {
            const cplx a = A.at(m);
            f.coeffs[m + M] = std::conj(a) * uh[m + M] / (alpha + std::norm(a));
        }
        double num = 0.0, den = 0.0;
        for (std::size_t r = 0; r < nf.n_rec(); ++r) {
            cplx af = 0.0;
            for (int m = -M; m <= M; ++m) af += A.at(m) * f.at(m) * std::exp(cplx(0.0, m * nf.receiver_angles[r]));
            num += std::norm(af - col[r]);
            den += std::norm(col[r]);
        }
        f.residual = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
        out.push_back(std::move(f));
    }
    return out;
}

/// Single-layer potential of `f` at the exterior point (radius, theta), radius > 1.
inline cplx single_layer_eval(const LayerDensity& f, double k, double radius, double theta) {
    if (!(radius > 1.0)) throw std::invalid_argument("single_layer_eval: radius must exceed 1");
    const auto j = specfun::bessel_j_seq(f.M, cplx(k, 0.0));
    const auto h = specfun::hankel1_seq(f.M, cplx(k * radius, 0.0));
    cplx v = 0.0;
    for (int m = -f.M; m <= f.M; ++m)
        v += cplx(0.0, 0.5 * std::numbers::pi) * j[std::abs(m)] * h[std::abs(m)] * f.at(m) *
             std::exp(cplx(0.0, m * theta));
    return v;
}

/// Boundary trace of the point source (i/4) H_0(k |x - y|), |y| = R_C.
inline BoundaryFunction incident_trace(double k, double R_C, double theta_y, int M) {
    const auto j = specfun::bessel_j_seq(M, cplx(k, 0.0));
    const auto h = specfun::hankel1_seq(M, cplx(k * R_C, 0.0));
    BoundaryFunction g{M, std::vector<cplx>(2 * static_cast<std::size_t>(M) + 1)};
    for (int m = -M; m <= M; ++m)
        g.coeffs[m + M] = cplx(0.0, 0.25) * h[std::abs(m)] * std::exp(cplx(0.0, -m * theta_y)) * j[std::abs(m)];
    return g;
}

/// Total-field Dirichlet trace u^+ = V f + u^i on the unit circle.
inline BoundaryFunction exterior_dirichlet_trace(const LayerDensity& f, double k, double R_C, double theta_y) {
    const ModalOperator V = single_layer_modal(cplx(k, 0.0), f.M);
    BoundaryFunction u = incident_trace(k, R_C, theta_y, f.M);
    for (int m = -f.M; m <= f.M; ++m) u.coeffs[m + f.M] += V.at(m) * f.at(m);
    return u;
}

/// Total-field Neumann trace (K' - 1/2) f + d_nu u^i on the unit circle.
inline BoundaryFunction exterior_neumann_trace(const LayerDensity& f, double k, double R_C, double theta_y) {
    const int M = f.M;
    const ModalOperator Kp = double_layer_modal(cplx(k, 0.0), M);
    const auto h = specfun::hankel1_seq(M, cplx(k * R_C, 0.0));
    BoundaryFunction g{M, std::vector<cplx>(2 * static_cast<std::size_t>(M) + 1)};
    for (int m = -M; m <= M; ++m) {
        const int am = std::abs(m);
        const cplx c = cplx(0.0, 0.25) * h[am] * std::exp(cplx(0.0, -m * theta_y));
        g.coeffs[m + M] = (Kp.at(m) - 0.5) * f.at(m) + c * k * specfun::bessel_j_deriv(am, cplx(k, 0.0));
    }
    return g;
}

enum class EtaModel { pointwise, constant };

struct ReconstructionResult {
    std::vector<double> nodes;              ///< boundary angles
    std::vector<cplx> eta_direct;           ///< per node, averaged over sources
    std::vector<int> direct_counts;         ///< sources retained per node
    std::vector<std::vector<cplx>> eta_direct_per_source;
    cplx eta_direct_mean;                   ///< mean over nodes
    double eta_direct_spread = 0.0;         ///< max |eta_direct - mean|
    cplx eta_lsq;                           ///< constant model
    std::vector<cplx> eta_lsq_pointwise;    ///< pointwise model
    double residual_lsq = 0.0;              ///< functional at the constant minimizer
    double residual_lsq_pointwise = 0.0;
    EtaModel model = EtaModel::constant;
    double alpha = 0.0;
    double max_density_residual = 0.0;
};

/// Relative node floor for the direct quotient.
inline constexpr double kDirectFloor = 1e-6;

/**
 * Direct and least-squares conductivity estimates from near-field data,
 * assuming a constant index n. Both the constant and pointwise least-squares
 * solutions are always computed; `model` records which one the caller asked
 * for.
 */
inline ReconstructionResult recover_eta(const NearFieldDataset& nf, cplx n, double alpha,
                                        EtaModel model = EtaModel::constant) {
    const auto densities = solve_density(nf, alpha);
    const int M = densities.front().M;
    const ModalOperator T = dtn_map(nf.k, n, M);
    const std::vector<double>& nodes = nf.receiver_angles;
    const std::size_t nb = nodes.size();

    ReconstructionResult res;
    res.nodes = nodes;
    res.alpha = alpha;
    res.model = model;
    res.eta_direct.assign(nb, 0.0);
    res.direct_counts.assign(nb, 0);
    res.eta_lsq_pointwise.assign(nb, 0.0);
    std::vector<double> pw_den(nb, 0.0);
    std::vector<cplx> pw_num(nb, 0.0);
    std::vector<std::vector<cplx>> U, R;   // u^+ and (d_nu u^+ - T u^+) per source
    cplx num = 0.0;
    double den = 0.0;

    for (std::size_t s = 0; s < nf.n_src(); ++s) {
        const LayerDensity& f = densities[s];
        res.max_density_residual = std::max(res.max_density_residual, f.residual);
        const BoundaryFunction u = exterior_dirichlet_trace(f, nf.k, nf.R_C, nf.source_angles[s]);
        const BoundaryFunction du = exterior_neumann_trace(f, nf.k, nf.R_C, nf.source_angles[s]);
        BoundaryFunction tu{M, std::vector<cplx>(u.coeffs.size())};
        for (int m = -M; m <= M; ++m) tu.coeffs[m + M] = T.at(m) * u.at(m);

        std::vector<cplx> uv(nb), rv(nb);
        double umax = 0.0;
        for (std::size_t j = 0; j < nb; ++j) {
            uv[j] = recon_detail::synth(u, nodes[j]);
            rv[j] = recon_detail::synth(du, nodes[j]) - recon_detail::synth(tu, nodes[j]);
            umax = std::max(umax, std::abs(uv[j]));
        }
        std::vector<cplx> direct(nb, cplx(std::numeric_limits<double>::quiet_NaN(), 0.0));
        for (std::size_t j = 0; j < nb; ++j) {
            num += std::conj(uv[j]) * rv[j];
            den += std::norm(uv[j]);
            pw_num[j] += std::conj(uv[j]) * rv[j];
            pw_den[j] += std::norm(uv[j]);
            if (std::abs(uv[j]) < kDirectFloor * umax) continue;
            direct[j] = -rv[j] / uv[j];
            res.eta_direct[j] += direct[j];
            ++res.direct_counts[j];
        }
        res.eta_direct_per_source.push_back(std::move(direct));
        U.push_back(std::move(uv));
        R.push_back(std::move(rv));
    }
    if (den == 0.0) throw std::runtime_error("recover_eta: boundary trace vanishes identically");

    std::size_t used = 0;
    for (std::size_t j = 0; j < nb; ++j) {
        if (res.direct_counts[j] > 0) {
            res.eta_direct[j] /= static_cast<double>(res.direct_counts[j]);
            res.eta_direct_mean += res.eta_direct[j];
            ++used;
        } else {
            res.eta_direct[j] = cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
        }
        res.eta_lsq_pointwise[j] = pw_den[j] > 0.0 ? -pw_num[j] / pw_den[j] : cplx(0.0);
    }
    if (used == 0) throw std::runtime_error("recover_eta: every boundary node fell below the direct floor");
    res.eta_direct_mean /= static_cast<double>(used);
    for (std::size_t j = 0; j < nb; ++j)
        if (res.direct_counts[j] > 0)
            res.eta_direct_spread = std::max(res.eta_direct_spread, std::abs(res.eta_direct[j] - res.eta_direct_mean));

    res.eta_lsq = -num / den;
    for (std::size_t s = 0; s < U.size(); ++s) {
        for (std::size_t j = 0; j < nb; ++j) {
            res.residual_lsq += std::norm(R[s][j] + res.eta_lsq * U[s][j]);
            res.residual_lsq_pointwise += std::norm(R[s][j] + res.eta_lsq_pointwise[j] * U[s][j]);
        }
    }
    return res;
}

/**
 * Morozov discrepancy choice of alpha: the largest alpha (on a log scale in
 * [alpha_min, alpha_max]) whose relative data misfit ||A f - u^s||_F / ||u^s||_F
 * over all sources does not exceed tau * noise_level.
 */
inline double morozov_alpha(const NearFieldDataset& nf, double noise_level, double tau = 1.1, double alpha_min = 1e-16,
                            double alpha_max = 1e2) {
    if (!(noise_level > 0.0)) throw std::invalid_argument("morozov_alpha: noise level must be positive");
    if (!(tau >= 1.0)) throw std::invalid_argument("morozov_alpha: tau must be >= 1");
    std::vector<double> col_sq(nf.n_src(), 0.0);
    double total = 0.0;
    for (std::size_t s = 0; s < nf.n_src(); ++s) {
        for (std::size_t r = 0; r < nf.n_rec(); ++r) col_sq[s] += std::norm(nf.at(r, s));
        total += col_sq[s];
    }
    if (total == 0.0) throw std::invalid_argument("morozov_alpha: data vanish identically");
    auto misfit = [&](double a) {
        const auto fs = solve_density(nf, a);
        double sum = 0.0;
        for (std::size_t s = 0; s < fs.size(); ++s) sum += fs[s].residual * fs[s].residual * col_sq[s];
        return std::sqrt(sum / total);
    };
    const double target = tau * noise_level;
    double lo = std::log(alpha_min), hi = std::log(alpha_max);
    if (misfit(alpha_min) > target) return alpha_min;
    if (misfit(alpha_max) <= target) return alpha_max;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (misfit(std::exp(mid)) <= target)
            lo = mid;
        else
            hi = mid;
    }
    return std::exp(lo);
}

}  // namespace ctev
