#include <gtest/gtest.h>

#include <numbers>

#include "ctev/forward.hpp"

using namespace ctev;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

double rel(cplx got, cplx want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

// Reference ratios computed at 30 digits from the same boundary system.
TEST(ModalRatio, FrozenHighPrecisionValues) {
    EXPECT_LT(rel(mie_lambda_sphere(0, 2.0, Medium::constant(3.0, 1.0)), {0.95287419713162605735, -0.21190790823465060322}), 1e-13);
    EXPECT_LT(rel(mie_lambda_sphere(3, 3.5, Medium::constant(2.0, {0.5, 0.2})), {0.57064107433679705513, -0.3979827883212107915}), 1e-13);
    EXPECT_LT(rel(mie_lambda_disk(2, 1.5, Medium::constant(2.0, 0.5)), {0.01342938777307873582, -0.11510447131679559204}), 1e-13);
    EXPECT_LT(rel(mie_lambda_disk(0, 5.0, Medium::constant(3.0)), {0.25217356991422193865, -0.43426036032654299652}), 1e-13);
    EXPECT_EQ(mie_lambda_disk(-2, 1.5, Medium::constant(2.0, 0.5)), mie_lambda_disk(2, 1.5, Medium::constant(2.0, 0.5)));
    EXPECT_EQ(mie_alpha_disk(1, 2.0, Medium::constant(2.0)), -mie_lambda_disk(1, 2.0, Medium::constant(2.0)));
}

TEST(ModalRatio, VanishesWithoutScatterer) {
    for (int p : {0, 1, 5}) {
        EXPECT_LT(std::abs(mie_lambda_sphere(p, 3.0, Medium::constant(1.0))), 1e-15);
        EXPECT_LT(std::abs(mie_lambda_disk(p, 3.0, Medium::constant(1.0))), 1e-15);
    }
}

TEST(ModalRatio, VanishesAtTransmissionEigenvalue) {
    EXPECT_LT(std::abs(mie_lambda_sphere(0, 4.443358060870908, Medium::constant(3.0))), 1e-13);
    EXPECT_LT(std::abs(mie_lambda_sphere(0, 4.415296718064716, Medium::constant(3.0, 0.25))), 1e-13);
}

TEST(ModalRatio, EnergyIdentityForRealParameters) {
    for (double k : {0.7, 3.1, 8.9})
        for (int p = 0; p < 12; ++p) {
            const Medium med = Medium::constant(2.5, 1.3);
            EXPECT_NEAR(std::abs(1.0 - 2.0 * mie_lambda_sphere(p, k, med)), 1.0, 1e-12);
            EXPECT_NEAR(std::abs(1.0 - 2.0 * mie_lambda_disk(p, k, med)), 1.0, 1e-12);
        }
}

TEST(ModalRatio, RejectsInvalidInput) {
    EXPECT_THROW(mie_lambda_sphere(0, 0.0, Medium::constant(2.0)), std::invalid_argument);
    EXPECT_THROW(mie_lambda_sphere(-1, 1.0, Medium::constant(2.0)), std::invalid_argument);
    EXPECT_THROW(modal_coefficients(Geometry::disk, -1.0, Medium::constant(2.0)), std::invalid_argument);
}

TEST(ModalCoefficients, TailIsNegligible) {
    const auto mc = modal_coefficients(Geometry::sphere, 6.0, Medium::constant(3.0, 0.5));
    EXPECT_GE(mc.truncation, truncation_order(6.0, Medium::constant(3.0, 0.5)));
    EXPECT_EQ(mc.values.size(), static_cast<std::size_t>(mc.truncation) + 1);
    double mx = 0.0;
    for (auto v : mc.values) mx = std::max(mx, std::abs(v));
    EXPECT_LE(std::abs(mc.values.back()), 1e-15 * mx);
    EXPECT_EQ(truncation_order(6.0, Medium::constant(3.0)), static_cast<int>(std::ceil(6.0 * std::sqrt(3.0))) + 15);
}

TEST(FarField, OperatorEigenvaluesAndMultiplicities) {
    const Medium med = Medium::constant(3.0, 1.0);
    const auto s = farfield_operator_eigs(Geometry::sphere, 2.0, med, 1e-14);
    ASSERT_GE(s.size(), 2u);
    EXPECT_EQ(s[0].order, 0);
    EXPECT_EQ(s[1].multiplicity, 3);
    EXPECT_LT(rel(s[0].eig, 4.0 * kPi * I / 2.0 * mie_lambda_sphere(0, 2.0, med)), 1e-15);
    const auto d = farfield_operator_eigs(Geometry::disk, 2.0, med, 1e-14);
    EXPECT_EQ(d[0].multiplicity, 1);
    EXPECT_EQ(d[1].multiplicity, 2);
    EXPECT_LT(rel(d[1].eig, 8.0 * kPi * I * mie_lambda_disk(1, 2.0, med)), 1e-15);
}

TEST(FarField, DiskEigenvaluesOnCircle) {
    const auto e = farfield_operator_eigs(Geometry::disk, 4.0, Medium::constant(2.0, 0.8), 1e-14);
    for (const auto& fe : e) EXPECT_NEAR(std::abs(fe.eig - 4.0 * kPi * I), 4.0 * kPi, 1e-10);
}

TEST(FarField, ReciprocityAndRotationInvariance) {
    const Medium med = Medium::constant(3.0, {0.4, 0.3});
    const Vec3 x = direction_from_angles(0.3, 1.1), y = direction_from_angles(2.0, -0.4);
    const Vec3 mx{-x[0], -x[1], -x[2]}, my{-y[0], -y[1], -y[2]};
    EXPECT_LT(rel(farfield_pattern_sphere(x, y, 4.0, med), farfield_pattern_sphere(my, mx, 4.0, med)), 1e-12);
    EXPECT_LT(rel(farfield_pattern_disk(0.2, 1.0, 4.0, med), farfield_pattern_disk(1.2, 2.0, 4.0, med)), 1e-12);
    EXPECT_EQ(farfield_pattern(0.2, 1.0, 4.0, med, Geometry::disk), farfield_pattern_disk(0.2, 1.0, 4.0, med));
}

TEST(FarField, SphereIsForwardPeaked) {
    const Medium med = Medium::constant(3.0);
    const double fwd = std::abs(farfield_pattern(0.0, 0.0, 5.0, med, Geometry::sphere));
    for (double a = 0.2; a <= kPi; a += 0.2) EXPECT_GT(fwd, std::abs(farfield_pattern(a, 0.0, 5.0, med, Geometry::sphere)));
}

TEST(FarField, PlaneWaveExpansion) {
    const Vec3 d = direction_from_angles(0.9, 0.2);
    const Vec3 x{0.3, -0.5, 0.6};
    const cplx exact = std::exp(I * 7.0 * (x[0] * d[0] + x[1] * d[1] + x[2] * d[2]));
    EXPECT_LT(std::abs(plane_wave_series_sphere(x, d, 7.0, 40) - exact), 1e-12);
}

TEST(Lsm, NormPeaksAtEigenvalue) {
    const Medium med = Medium::constant(3.0);
    const int P = static_cast<int>(std::ceil(4.44)) + 6;
    const double near = lsm_gnorm(4.443358 + 1e-3, 0.3, med, P);
    const double far = lsm_gnorm(4.443358 + 0.1, 0.3, med, P);
    EXPECT_GT(near / far, 100.0);
    EXPECT_TRUE(std::isinf(lsm_gnorm(4.443358060870908, 0.3, med, P)) || lsm_gnorm(4.443358060870908, 0.3, med, P) > 1e12);
    EXPECT_THROW(lsm_gnorm(4.0, 1.0, med, P), std::invalid_argument);
}

TEST(NearField, FrozenSeriesValues) {
    const auto nf = synth_nearfield(1.5, Medium::constant(2.0, 0.5), 2.0, 4, 4);
    EXPECT_LT(rel(nf.at(0, 0), {0.037152187626498021322, -0.015813638624968060344}), 1e-12);
    EXPECT_LT(rel(nf.at(1, 0), {0.00060599107349203233319, 0.025123162058267513983}), 1e-12);
}

TEST(NearField, SymmetricAndVanishingWithoutScatterer) {
    const auto nf = synth_nearfield(2.0, Medium::constant(2.0, {1.0, 0.5}), 2.5, 16, 16);
    for (std::size_t r = 0; r < 16; ++r)
        for (std::size_t c = 0; c < 16; ++c) EXPECT_LT(std::abs(nf.at(r, c) - nf.at(c, r)), 1e-15);
    const auto empty = synth_nearfield(2.0, Medium::constant(1.0), 2.5, 8, 8);
    for (cplx v : empty.values) EXPECT_LT(std::abs(v), 1e-15);
    EXPECT_THROW(synth_nearfield(2.0, Medium::constant(2.0), 0.9), std::invalid_argument);
}

TEST(NearField, NoiseIsSeededAndScaled) {
    const auto nf = synth_nearfield(1.5, Medium::constant(2.0, 0.5), 2.0, 8, 8);
    const auto a = add_noise(nf, 0.01, 42), b = add_noise(nf, 0.01, 42), c = add_noise(nf, 0.01, 43);
    EXPECT_EQ(a.values, b.values);
    EXPECT_NE(a.values, c.values);
    double ne = 0.0, nd = 0.0;
    for (std::size_t i = 0; i < nf.values.size(); ++i) {
        ne += std::norm(a.values[i] - nf.values[i]);
        nd += std::norm(nf.values[i]);
    }
    EXPECT_NEAR(std::sqrt(ne / nd), 0.01, 1e-12);
    EXPECT_EQ(add_noise(nf, 0.0, 1).values, nf.values);
    EXPECT_THROW(add_noise(nf, -1.0, 1), std::invalid_argument);
}

TEST(NearField, CsvAndJsonRoundTripExactly) {
    const auto nf = synth_nearfield(1.5, Medium::constant(2.0, {1.0, 0.5}), 2.0, 6, 5);
    const auto back = nearfield_from_csv(to_csv(nf));
    EXPECT_EQ(back.k, nf.k);
    EXPECT_EQ(back.R_C, nf.R_C);
    EXPECT_EQ(back.source_angles, nf.source_angles);
    EXPECT_EQ(back.receiver_angles, nf.receiver_angles);
    EXPECT_EQ(back.values, nf.values);
    const auto bj = nearfield_from_json(nlohmann::json::parse(to_json(nf).dump()));
    EXPECT_EQ(bj.values, nf.values);
    EXPECT_THROW(nearfield_from_csv("x,1\n"), std::invalid_argument);
    EXPECT_THROW(nearfield_from_json({{"format", "other"}}), std::invalid_argument);
}
