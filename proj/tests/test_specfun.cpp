#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "ctev/specfun.hpp"
#include "oracle_quad.hpp"

using cplx = std::complex<double>;
namespace sf = ctev::specfun;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

double rel(cplx got, cplx want) { return std::abs(got - want) / std::max(1e-300, std::abs(want)); }

// Frozen from the quad-precision series oracle in oracle_quad.hpp.
struct Frozen {
    const char* label;
    cplx got;
    cplx want;
};

}  // namespace

TEST(SpecfunFrozen, MatchesQuadSeriesOracle) {
    const Frozen cases[] = {
        {"J0(2.5)", sf::bessel_j(0, 2.5), {-4.83837764681979963273e-02, 0.0}},
        {"J3(1+2i)", sf::bessel_j(3, {1, 2}), {-2.81039666845767907672e-01, 1.71750620033902321271e-02}},
        {"J7(4-0.5i)", sf::bessel_j(7, {4, -0.5}), {1.19660970385873394283e-02, -1.08803327462344209151e-02}},
        {"H2(3+0.5i)", sf::hankel1(2, {3, 0.5}), {3.02518314562536882028e-01, -1.45508424892795589729e-01}},
        {"H0(0.7)", sf::hankel1(0, 0.7), {8.81200888607405295449e-01, -1.90664929337395116428e-01}},
        {"Y1(2+i)", sf::bessel_y(1, {2, 1}), {-1.63154378204725036411e-02, 5.99406841766853593757e-01}},
        {"J3'(1+i)", sf::bessel_j_deriv(3, {1, 1}), {2.59765834891113570594e-02, 1.23178504033355310498e-01}},
        {"j5(2+i)", sf::sph_bessel_j(5, {2, 1}), {-2.67274477192041182265e-03, 3.98143948877415041876e-03}},
        {"j0(3.3)", sf::sph_bessel_j(0, 3.3), {-4.78017254979540045731e-02, 0.0}},
        {"j2'(1.5+0.5i)", sf::sph_bessel_j_deriv(2, {1.5, 0.5}), {1.57083430397127019429e-01, 1.22945523941623232463e-02}},
    };
    for (const auto& c : cases) EXPECT_LT(rel(c.got, c.want), 1e-13) << c.label;
}

TEST(SpecfunOracle, CylindricalJAgreesOnGrid) {
    for (int n : {0, 1, 4, 10, 20})
        for (cplx z : {cplx(0.3, 0.0), cplx(5.0, 0.2), cplx(-2.0, 3.0), cplx(8.0, -1.0), cplx(0.0, 6.0)}) {
            const cplx want = oracle::to_cd(oracle::cyl_j(n, oracle::make(z.real(), z.imag())));
            EXPECT_LT(rel(sf::bessel_j(n, z), want), 1e-12) << "n=" << n << " z=" << z;
        }
}

TEST(SpecfunOracle, HankelAgreesOnGrid) {
    for (int n : {0, 1, 3, 8})
        for (cplx z : {cplx(0.4, 0.0), cplx(2.0, 0.5), cplx(6.0, 1.0), cplx(1.0, -0.5)}) {
            const cplx want = oracle::to_cd(oracle::hankel1(n, oracle::make(z.real(), z.imag())));
            EXPECT_LT(rel(sf::hankel1(n, z), want), 1e-11) << "n=" << n << " z=" << z;
        }
}

TEST(SpecfunOracle, SphericalJAgreesOnGrid) {
    for (int n : {0, 1, 2, 7, 15})
        for (cplx z : {cplx(0.05, 0.0), cplx(3.0, 0.0), cplx(4.0, 2.0), cplx(-1.0, 0.5), cplx(9.0, -1.0)}) {
            const cplx want = oracle::to_cd(oracle::sph_j(n, oracle::make(z.real(), z.imag())));
            EXPECT_LT(rel(sf::sph_bessel_j(n, z), want), 1e-12) << "n=" << n << " z=" << z;
        }
}

TEST(SpecfunClosedForm, SphericalOrderZero) {
    for (cplx z : {cplx(0.5, 0.0), cplx(3.0, 1.0), cplx(12.0, -0.5)}) {
        EXPECT_LT(rel(sf::sph_bessel_j(0, z), std::sin(z) / z), 1e-14);
        EXPECT_LT(rel(sf::sph_hankel1(0, z), -I * std::exp(I * z) / z), 1e-14);
        EXPECT_LT(rel(sf::sph_bessel_j(1, z), std::sin(z) / (z * z) - std::cos(z) / z), 1e-12);
    }
}

TEST(SpecfunIdentity, WronskiansInUpperHalfPlane) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> rad(0.2, 40.0), ang(-0.02, kPi + 0.02);
    for (int s = 0; s < 50; ++s) {
        const cplx z = std::polar(rad(rng), ang(rng));
        for (int p : {0, 1, 5, 20}) {
            const cplx wc = sf::bessel_j(p, z) * sf::hankel1_deriv(p, z) - sf::bessel_j_deriv(p, z) * sf::hankel1(p, z);
            EXPECT_LT(std::abs(wc - 2.0 * I / (kPi * z)) * std::abs(z), 1e-10) << z;
            const cplx ws = sf::sph_bessel_j(p, z) * sf::sph_hankel1_deriv(p, z) -
                            sf::sph_bessel_j_deriv(p, z) * sf::sph_hankel1(p, z);
            EXPECT_LT(std::abs(ws - I / (z * z)) * std::abs(z * z), 1e-10) << z;
        }
    }
}

TEST(SpecfunIdentity, ConjugateSymmetryOfJ) {
    for (cplx z : {cplx(1.0, 2.0), cplx(7.0, -3.0), cplx(0.1, 0.1)})
        for (int p : {0, 3, 11}) {
            EXPECT_LT(rel(sf::bessel_j(p, std::conj(z)), std::conj(sf::bessel_j(p, z))), 1e-14);
            EXPECT_LT(rel(sf::sph_bessel_j(p, std::conj(z)), std::conj(sf::sph_bessel_j(p, z))), 1e-14);
        }
}

TEST(SpecfunIdentity, SequenceMatchesScalarCalls) {
    const cplx z(4.5, 0.7);
    const auto seq = sf::bessel_j_seq(12, z);
    ASSERT_EQ(seq.size(), 13u);
    for (int p = 0; p <= 12; ++p) EXPECT_LT(rel(seq[p], sf::bessel_j(p, z)), 1e-14);
    const auto pair = sf::sph_hankel1_pair(3, z);
    EXPECT_LT(rel(pair.value, sf::sph_hankel1(3, z)), 1e-15);
    EXPECT_LT(rel(pair.deriv, sf::sph_hankel1_deriv(3, z)), 1e-15);
}

TEST(SpecfunIdentity, LargeArgumentAsymptotics) {
    const double x = 150.0;
    const cplx series = 1.0 - I / (8.0 * x) - 9.0 / (128.0 * x * x);
    const cplx want = std::sqrt(2.0 / (kPi * x)) * std::exp(I * (x - 0.25 * kPi)) * series;
    EXPECT_LT(rel(sf::hankel1(0, x), want), 1e-6);
}

TEST(SpecfunErrors, HankelPoleAtZero) {
    EXPECT_THROW(sf::hankel1(0, 0.0), ctev::pole_error);
    EXPECT_THROW(sf::sph_hankel1(2, 0.0), ctev::pole_error);
    EXPECT_THROW(sf::bessel_y(1, 0.0), ctev::pole_error);
    EXPECT_NO_THROW(sf::bessel_j(0, 0.0));
    EXPECT_DOUBLE_EQ(sf::sph_bessel_j(0, 0.0).real(), 1.0);
}

TEST(SpecfunErrors, RejectsBadArguments) {
    EXPECT_THROW(sf::bessel_j(-1, 1.0), std::invalid_argument);
    EXPECT_THROW(sf::bessel_j(sf::kMaxOrder + 1, 1.0), std::invalid_argument);
    EXPECT_THROW(sf::bessel_j(0, cplx(std::nan(""), 0.0)), std::invalid_argument);
}
