/**
 * @file medium.hpp
 * @brief Scatterer geometry and material parameters.
 */
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ctev {

using cplx = std::complex<double>;

/// Unit disk (2D) or unit ball (3D).
enum class Geometry { disk, sphere };

inline std::string_view to_string(Geometry g) { return g == Geometry::disk ? "disk" : "sphere"; }

inline Geometry parse_geometry(std::string_view s) {
    if (s == "disk" || s == "circle") return Geometry::disk;
    if (s == "sphere") return Geometry::sphere;
    throw std::invalid_argument("unknown geometry '" + std::string(s) + "' (expected disk or sphere)");
}

/**
 * Refractive index and boundary conductivity.
 *
 * The index is either a complex constant or the absorbing form
 * n(k) = n1 + i n2 / k. A medium flagged physical additionally requires
 * Re(eta) >= 0 and Im(eta) >= 0.
 */
class Medium {
public:
    static Medium constant(cplx n, cplx eta = 0.0, bool physical = false) {
        Medium m;
        m.n_ = n;
        m.eta_ = eta;
        m.physical_ = physical;
        m.validate();
        return m;
    }

    static Medium absorbing(double n1, double n2, cplx eta = 0.0, bool physical = false) {
        Medium m;
        m.absorbing_ = true;
        m.n_ = n1;
        m.n2_ = n2;
        m.eta_ = eta;
        m.physical_ = physical;
        m.validate();
        return m;
    }

    /// n evaluated at wavenumber k.
    [[nodiscard]] cplx index(cplx k) const {
        if (!absorbing_) return n_;
        if (k == cplx(0.0)) throw std::invalid_argument("Medium::index: absorbing index is singular at k = 0");
        return n_ + cplx(0.0, n2_) / k;
    }

    /// Constant index, or n1 for the absorbing form.
    [[nodiscard]] cplx reference_index() const { return n_; }

    [[nodiscard]] cplx eta() const { return eta_; }
    [[nodiscard]] bool is_absorbing() const { return absorbing_; }
    [[nodiscard]] bool is_physical() const { return physical_; }
    [[nodiscard]] double n1() const { return n_.real(); }
    [[nodiscard]] double n2() const { return n2_; }

    /// True when n and eta are real (energy-conserving configuration).
    [[nodiscard]] bool is_real() const { return !absorbing_ && n_.imag() == 0.0 && eta_.imag() == 0.0; }

    [[nodiscard]] Medium with_eta(cplx eta) const {
        Medium m = *this;
        m.eta_ = eta;
        m.validate();
        return m;
    }

private:
    Medium() = default;

    void validate() const {
        if (!std::isfinite(n_.real()) || !std::isfinite(n_.imag()) || !std::isfinite(n2_) ||
            !std::isfinite(eta_.real()) || !std::isfinite(eta_.imag()))
            throw std::invalid_argument("Medium: non-finite parameter");
        if (!(n_.real() > 0.0)) throw std::invalid_argument("Medium: Re(n) must be positive");
        if (absorbing_) {
            if (!(n_.real() > 1.0)) throw std::invalid_argument("Medium: absorbing form requires n1 > 1");
            if (n2_ < 0.0) throw std::invalid_argument("Medium: absorbing form requires n2 >= 0");
        }
        if (physical_ && (eta_.real() < 0.0 || eta_.imag() < 0.0))
            throw std::invalid_argument("Medium: physical media require Re(eta) >= 0 and Im(eta) >= 0");
    }

    bool absorbing_ = false;
    cplx n_{1.0, 0.0};
    double n2_ = 0.0;
    cplx eta_{0.0, 0.0};
    bool physical_ = false;
};

}  // namespace ctev
