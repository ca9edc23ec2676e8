#include <gtest/gtest.h>

#include <numbers>

#include "ctev/dispersion.hpp"
#include "oracle_quad.hpp"

using namespace ctev;

namespace {

double rel(cplx got, cplx want) { return std::abs(got - want) / std::abs(want); }

// Ball determinant from the 2x2 boundary matrix, in quad precision.
cplx sphere_det_oracle(cplx k, double n, cplx eta, int p) {
    using namespace oracle;
    const cq kq = make(k.real(), k.imag());
    const cq ks = kq * sqrtq(n);
    const cq e = make(eta.real(), eta.imag());
    const cq a11 = sph_j(p, ks);
    const cq a12 = -sph_j(p, kq);
    const cq a21 = ks * derivative(sph_j, p, ks, 1e-9);
    const cq a22 = -kq * derivative(sph_j, p, kq, 1e-9) - e * sph_j(p, kq);
    return to_cd(a11 * a22 - a12 * a21);
}

std::vector<cplx> roots_of(const std::vector<EigenvalueRecord>& recs) {
    std::vector<cplx> out;
    for (const auto& r : recs) out.push_back(r.k);
    return table_order(out);
}

}  // namespace

TEST(Determinant, FrozenQuadOracleValues) {
    EXPECT_LT(rel(d_sphere(2.0, Medium::constant(3.0, 1.0), 0), {-4.27685758558895913731e-01, 0.0}), 1e-13);
    EXPECT_LT(rel(d_sphere({2.5, 0.3}, Medium::constant(3.0, 1.0), 1),
                  {-4.49299501508179053567e-01, 8.09391675415741377509e-02}),
              1e-13);
    EXPECT_LT(rel(d_disk(3.0, Medium::constant(3.0, 0.5), 2), {-8.40731877548844980349e-01, 0.0}), 1e-13);
    EXPECT_LT(rel(d_disk({2.0, 0.2}, Medium::constant(4.0, {1.0, 0.5}), 0),
                  {-2.52193550250685451951e-01, 1.00283701210946952700e-01}),
              1e-13);
}

TEST(Determinant, AgreesWithBoundaryMatrixOracle) {
    for (int p : {0, 1, 3})
        for (cplx k : {cplx(1.3, 0.0), cplx(4.0, 0.6), cplx(7.5, 2.0)})
            for (cplx eta : {cplx(0.0), cplx(0.5), cplx(2.0, -1.0)}) {
                const cplx got = d_sphere(k, Medium::constant(2.0, eta), p);
                EXPECT_LT(rel(got, sphere_det_oracle(k, 2.0, eta, p)), 1e-11) << p << ' ' << k << ' ' << eta;
            }
}

TEST(Determinant, TrigFormIsRescaledBesselForm) {
    const Medium med = Medium::constant(3.0, 0.7);
    for (cplx k : {cplx(0.9, 0.0), cplx(3.3, 1.1), cplx(6.0, -0.4)}) {
        const cplx ratio = d_sphere_trig(k, med) / (-k * k * std::sqrt(3.0) * d_sphere(k, med, 0));
        EXPECT_LT(std::abs(ratio - 1.0), 1e-12) << k;
    }
}

TEST(Determinant, ZeroWavenumberAndNegativeOrderRejected) {
    const Medium med = Medium::constant(3.0);
    EXPECT_THROW(d_sphere(0.0, med, 0), std::invalid_argument);
    EXPECT_THROW(d_disk(1.0, med, -1), std::invalid_argument);
    EXPECT_THROW(ScaledDeterminant(Geometry::disk, med, -2), std::invalid_argument);
}

TEST(Determinant, ScaledFormHasSameZeros) {
    const Medium med = Medium::constant(3.0);
    const ScaledDeterminant f(Geometry::sphere, med, 0);
    const cplx k0(4.443358060870908, 0.0);
    EXPECT_LT(std::abs(f(k0)), 1e-12);
    EXPECT_GT(std::abs(f({4.0, 0.0})), 1e-3);
}

TEST(ComputeItes, SphereTableEtaZero) {
    const auto ks = roots_of(compute_ites(Geometry::sphere, Medium::constant(3.0), {0.5, 10.0, -0.01, 10.0}, 0, 1e-10));
    const std::vector<cplx> want{{4.443358, 0.0}, {8.328578, 0.0}, {3.003079, 0.723476}, {6.305573, 0.787309},
                                 {9.598536, 0.669770}};
    ASSERT_EQ(ks.size(), want.size());
    for (std::size_t i = 0; i < ks.size(); ++i) EXPECT_LT(std::abs(ks[i] - want[i]), 1e-5) << i;
    EXPECT_NEAR(ks[0].real(), 4.443358060870908, 1e-10);
}

TEST(ComputeItes, DiskTableEtaZero) {
    const auto ks = roots_of(compute_ites(Geometry::disk, Medium::constant(3.0), {0.5, 10.0, -0.01, 10.0}, 0, 1e-10));
    const std::vector<cplx> want{{4.159236, 0.0}, {8.261173, 0.0}, {2.363421, 0.781661}, {5.646922, 0.735262},
                                 {8.814961, 0.318519}};
    ASSERT_EQ(ks.size(), want.size());
    for (std::size_t i = 0; i < ks.size(); ++i) EXPECT_LT(std::abs(ks[i] - want[i]), 1e-5) << i;
}

// Root locations computed independently at 40 digits.
TEST(ComputeItes, FrozenHighPrecisionRoots) {
    auto find_near = [](Geometry g, const Medium& m, int order, cplx guess) {
        const rootfind::SearchRect r{guess.real() - 0.2, guess.real() + 0.2, -0.01, guess.imag() + 0.2};
        const auto recs = compute_ites(g, m, r, order, 1e-12);
        cplx best(1e9);
        for (const auto& rec : recs)
            if (rec.order == order && std::abs(rec.k - guess) < std::abs(best - guess)) best = rec.k;
        return best;
    };
    EXPECT_LT(std::abs(find_near(Geometry::sphere, Medium::constant(3.0, 0.25), 0, 4.4152967) - 4.415296718064716), 1e-9);
    EXPECT_LT(std::abs(find_near(Geometry::disk, Medium::constant(3.0, 0.5), 0, 4.0977685) - 4.097768451472674), 1e-9);
    EXPECT_LT(std::abs(find_near(Geometry::sphere, Medium::constant(3.0, 1.0), 1, {4.5624, 0.2984}) -
                       cplx(4.562385933731231, 0.298414649662199)),
              1e-9);
    EXPECT_LT(std::abs(find_near(Geometry::disk, Medium::constant(3.0, {1.0, 0.5}), 2, {5.2458, 0.5806}) -
                       cplx(5.245780542125358, 0.580572045369852)),
              1e-9);
}

TEST(ComputeItes, DoubleRootAtPiForIndexFour) {
    const auto recs = compute_ites(Geometry::sphere, Medium::constant(4.0, 1.0), {1.0, 5.0, -0.01, 0.5}, 0, 1e-10);
    bool found = false;
    for (const auto& r : recs)
        if (std::abs(r.k - std::numbers::pi) < 1e-6) {
            found = true;
            EXPECT_EQ(r.multiplicity, 2);
        }
    EXPECT_TRUE(found);
}

TEST(ComputeItes, RecordsCarryMetadata) {
    const Medium med = Medium::constant(3.0, 0.5);
    const auto recs = compute_ites(Geometry::disk, med, {3.0, 5.0, 0.0, 0.5}, 2, 1e-10);
    ASSERT_FALSE(recs.empty());
    for (const auto& r : recs) {
        EXPECT_EQ(r.geometry, Geometry::disk);
        EXPECT_EQ(r.eta, cplx(0.5));
        EXPECT_LE(r.order, 2);
        EXPECT_LT(r.residual, 1e-10);
        EXPECT_TRUE(r.refined);
        EXPECT_LT(std::abs(d_disk(r.k, med, r.order)), 1e-8);
    }
}

TEST(ComputeItes, RectangleMustExcludeOrigin) {
    EXPECT_THROW(compute_ites(Geometry::sphere, Medium::constant(3.0), {-1.0, 1.0, -1.0, 1.0}, 0, 1e-10),
                 std::invalid_argument);
}

TEST(ComputeItes, AbsorbingRootsStayAboveLine) {
    const Medium med = Medium::absorbing(3.0, 0.05, 1.0);
    const auto recs = compute_ites(Geometry::sphere, med, {0.5, 10.0, -0.25, 10.0}, 0, 1e-10);
    ASSERT_FALSE(recs.empty());
    for (const auto& r : recs) EXPECT_GT(r.k.imag(), -0.05 / 2.0);
}

TEST(Tabulation, TableOrderPutsRealFirst) {
    const auto t = table_order({{3.0, 0.7}, {8.0, 0.0}, {4.0, 1e-12}, {1.0, 0.2}});
    EXPECT_EQ(t[0], cplx(4.0, 1e-12));
    EXPECT_EQ(t[1], cplx(8.0, 0.0));
    EXPECT_EQ(t[2], cplx(1.0, 0.2));
    EXPECT_EQ(t[3], cplx(3.0, 0.7));
}

TEST(Tabulation, TrackBranchesFollowsNearest) {
    const auto br = track_branches({1.0, 2.0}, {{2.1, 1.1, 7.0}, {1.15, 2.2}});
    ASSERT_EQ(br.size(), 2u);
    EXPECT_EQ(br[0][0], cplx(1.1));
    EXPECT_EQ(br[0][1], cplx(1.15));
    EXPECT_EQ(br[1][1], cplx(2.2));
    EXPECT_THROW(track_branches({1.0, 1.1}, {{1.05, 5.0}}), convergence_error);
    EXPECT_THROW(track_branches({1.0, 2.0}, {{1.0}}), convergence_error);
}

TEST(Tabulation, EocSequence) {
    const auto e = eoc_sequence({1.0, 0.5, 0.125, 0.0});
    EXPECT_DOUBLE_EQ(e[0], 1.0);
    EXPECT_DOUBLE_EQ(e[1], 2.0);
    EXPECT_TRUE(std::isinf(e[2]) && e[2] > 0);
    EXPECT_THROW(eoc_sequence({1.0}), std::invalid_argument);
    EXPECT_THROW(eoc_sequence({1.0, -1.0}), std::invalid_argument);
}

TEST(MediumModel, AbsorbingIndexAndValidation) {
    const Medium m = Medium::absorbing(3.0, 0.1);
    EXPECT_EQ(m.index(2.0), cplx(3.0, 0.05));
    EXPECT_THROW(static_cast<void>(m.index(0.0)), std::invalid_argument);
    EXPECT_FALSE(m.is_real());
    EXPECT_TRUE(Medium::constant(2.0, 0.3).is_real());
    EXPECT_THROW(Medium::constant(-1.0), std::invalid_argument);
    EXPECT_EQ(parse_geometry("circle"), Geometry::disk);
    EXPECT_THROW(parse_geometry("cube"), std::invalid_argument);
}
