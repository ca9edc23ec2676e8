#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "ctev/experiments.hpp"

using namespace ctev;
using nlohmann::json;

namespace {

ExperimentConfig parse(const json& j, const std::string& sub = "") { return parse_config(j, sub); }

std::string field_of(const json& j, const std::string& sub = "") {
    try {
        parse_config(j, sub);
    } catch (const config_error& e) {
        return e.field();
    }
    return "";
}

}  // namespace

TEST(Formatting, FixedAndComplex) {
    EXPECT_EQ(fmt6(4.4433580609), "4.443358");
    EXPECT_EQ(fmt6(-1e-9), "0.000000");
    EXPECT_EQ(fmt6(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(fmt6(std::nan("")), "nan");
    EXPECT_EQ(fmt_complex({3.003079, 0.723476}), "3.003079+0.723476i");
    EXPECT_EQ(fmt_complex({1.0, -0.5}), "1.000000-0.500000i");
    EXPECT_EQ(fmt_complex({8.328578, 1e-9}), "8.328578");
    EXPECT_EQ(fmt_sci(1234.5), "1.234500e+03");
}

TEST(Config, DefaultsAndComplexValues) {
    const auto c = parse({{"experiment", "ites"}, {"geometry", "circle"}, {"n", {2.0, 0.5}}, {"eta", 1}});
    EXPECT_EQ(c.geometry, Geometry::disk);
    EXPECT_EQ(c.n, cplx(2.0, 0.5));
    EXPECT_EQ(c.eta, cplx(1.0));
    EXPECT_EQ(c.rect.re_min, 0.5);
    EXPECT_EQ(c.rect.im_min, -0.01);
    EXPECT_EQ(c.max_order, 0);
    EXPECT_EQ(c.tol, 1e-10);
}

TEST(Config, EtaSequenceExpansion) {
    const auto c = parse({{"experiment", "eoc-ev"}, {"eta_sequence", {{"base", 0.5}, {"first", 0}, {"last", 8}}}});
    ASSERT_EQ(c.etas.size(), 9u);
    EXPECT_EQ(c.etas.front(), cplx(1.0));
    EXPECT_EQ(c.etas.back(), cplx(1.0 / 256.0));
    const auto d = parse({{"experiment", "recon"}, {"geometry", "disk"}, {"etas", {0.5, {1.0, 0.5}}}});
    EXPECT_EQ(d.etas[1], cplx(1.0, 0.5));
}

TEST(Config, ValidationErrorsNameTheField) {
    EXPECT_EQ(field_of({{"experiment", "eoc-ev"}, {"etas", json::array()}}), "eta_sequence");
    EXPECT_EQ(field_of({{"experiment", "eoc-ef"}}), "eta_sequence");
    EXPECT_EQ(field_of({{"experiment", "eoc-ev"}, {"eta_sequence", {{"base", 0.5}, {"first", 3}, {"last", 1}}}}),
              "eta_sequence");
    EXPECT_EQ(field_of({{"experiment", "iod"}, {"etas", json::array()}}), "etas");
    EXPECT_EQ(field_of({{"experiment", "nope"}}), "experiment");
    EXPECT_EQ(field_of({{"experiment", "ites"}}, "iod"), "experiment");
    EXPECT_EQ(field_of({{"experiment", "ites"}, {"geometry", "cube"}}), "geometry");
    EXPECT_EQ(field_of({{"experiment", "ites"}, {"n", -2}}), "n");
    EXPECT_EQ(field_of({{"experiment", "ites"}, {"rect", {{"re_min", -1}, {"re_max", 1}, {"im_min", -1}, {"im_max", 1}}}}),
              "rect");
    EXPECT_EQ(field_of({{"experiment", "ites"}, {"rect", {{"re_min", 2}, {"re_max", 1}, {"im_min", 0}, {"im_max", 1}}}}),
              "rect");
    EXPECT_EQ(field_of({{"experiment", "ites"}, {"rect", {{"re_min", 1}}}}), "rect.re_max");
    EXPECT_EQ(field_of({{"experiment", "ites"}, {"tol", 0}}), "tol");
    EXPECT_EQ(field_of({{"experiment", "ites"}, {"max_order", 500}}), "max_order");
    EXPECT_EQ(field_of({{"experiment", "recon"}, {"geometry", "sphere"}, {"etas", {0.5}}}), "geometry");
    EXPECT_EQ(field_of({{"experiment", "recon"}, {"geometry", "disk"}, {"etas", {0.5}}, {"R_C", 0.5}}), "R_C");
    EXPECT_EQ(field_of({{"experiment", "lsm"}, {"probe_offsets", {0.1, 0.01}}}), "probe_offsets");
    EXPECT_EQ(field_of({{"experiment", "absorbing"}, {"n1", 3}}), "n2_values");
    EXPECT_EQ(field_of({{"experiment", "iod"}, {"etas", {1}}, {"proximity", 2.0}}), "proximity");
    EXPECT_THROW(parse_config(json::array()), config_error);
}

TEST(Config, ShippedConfigsParse) {
    const std::filesystem::path dir = CTEV_CONFIG_DIR;
    int seen = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".json") continue;
        std::ifstream in(entry.path());
        const json j = json::parse(in);
        EXPECT_NO_THROW(parse_config(j)) << entry.path();
        ++seen;
    }
    EXPECT_GE(seen, 8);
}

TEST(Runners, ItesCsvLayout) {
    const auto c = parse({{"experiment", "ites"}, {"geometry", "sphere"}, {"n", 3}});
    const std::string csv = run_ites(c).csv();
    EXPECT_EQ(csv.rfind("order,re,im,residual,multiplicity\n", 0), 0u);
    EXPECT_NE(csv.find("0,4.443358,"), std::string::npos);
    EXPECT_NE(csv.find("0,3.003079,0.723476,"), std::string::npos);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
    EXPECT_EQ(csv, run_ites(c).csv());
}

TEST(Runners, LsmRatio) {
    const auto c = parse({{"experiment", "lsm"}, {"n", 3}, {"k_grid", {{"min", 4.3}, {"max", 4.6}, {"step", 0.1}}}});
    const auto r = run_lsm(c);
    EXPECT_EQ(r.k.size(), 4u);
    EXPECT_GT(r.ratio, 100.0);
    EXPECT_EQ(lsm_truncation(4.44, 6), 11);
}

TEST(Runners, AbsorbingRootsConverge) {
    const auto c = parse({{"experiment", "absorbing"},
                          {"geometry", "sphere"},
                          {"n1", 3},
                          {"eta", 1},
                          {"n2_values", {0.1, 0.05}},
                          {"rect", {{"re_min", 0.5}, {"re_max", 6}, {"im_min", -0.25}, {"im_max", 3}}}});
    const auto r = run_absorbing(c);
    EXPECT_FALSE(r.reference.empty());
    EXPECT_TRUE(r.all_in_region);
    EXPECT_TRUE(r.converging);
    EXPECT_EQ(r.rows.front().n2, 0.1);
}

TEST(Runners, ReconNoiselessCases) {
    const auto c = parse({{"experiment", "recon"}, {"geometry", "disk"}, {"n", 2}, {"etas", {0.5, {1.0, 0.5}}}});
    const auto run = run_recon(c, 1);
    EXPECT_LT(run.dtn_max_rel_diff, 1e-10);
    ASSERT_EQ(run.cases.size(), 2u);
    for (const auto& rc : run.cases) {
        EXPECT_LT(rc.err_direct, 1e-2);
        EXPECT_LT(rc.err_lsq, 1e-2);
    }
    const json j = to_json(run.cases[0].result);
    EXPECT_TRUE(j.contains("eta_lsq"));
}
