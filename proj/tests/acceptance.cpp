// Acceptance gates 1-8: one PASS/FAIL line each; exit code 0 only when all pass.

#include <chrono>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include "ctev/ctev.hpp"

using namespace ctev;
using nlohmann::json;

namespace {

struct Outcome {
    bool ok = false;
    std::string detail;
};

std::string sci(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

std::vector<cplx> ites_roots(const std::string& geometry, double n, double eta) {
    const auto c = parse_config({{"experiment", "ites"}, {"geometry", geometry}, {"n", n}, {"eta", eta},
                                 {"rect", {{"re_min", 0.5}, {"re_max", 10}, {"im_min", -0.01}, {"im_max", 10}}}});
    std::vector<cplx> out;
    for (const auto& r : run_ites(c).records) out.push_back(r.k);
    return out;
}

Outcome eigenvalue_table(const std::string& geometry, const std::vector<cplx>& want) {
    const auto got = ites_roots(geometry, 3.0, 0.0);
    const double err = verify_detail::match_roots(got, want);
    return {got.size() == 5 && err <= 1e-5, std::to_string(got.size()) + " roots, max error " + sci(err)};
}

json eta_sequence() { return {{"base", 0.5}, {"first", 0}, {"last", 8}}; }

Outcome eoc_eigenvalues() {
    double worst = 0.0;
    for (const auto& [g, want] : {std::pair{"sphere", &golden::eoc_sphere()}, std::pair{"disk", &golden::eoc_disk()}}) {
        const auto c = parse_config({{"experiment", "eoc-ev"}, {"geometry", g}, {"n", 3}, {"eta_sequence", eta_sequence()}});
        worst = std::max(worst, verify_detail::max_table_diff(run_eoc_ev(c).eoc, *want));
    }
    return {worst <= 0.02, "max entry difference " + sci(worst)};
}

Outcome eoc_eigenfunctions() {
    double worst = 0.0;
    for (const auto& [g, want] :
         {std::pair{"sphere", &golden::eoc_ef_sphere()}, std::pair{"disk", &golden::eoc_ef_disk()}}) {
        const auto c = parse_config({{"experiment", "eoc-ef"}, {"geometry", g}, {"n", 3}, {"eta_sequence", eta_sequence()}});
        const auto r = run_eoc_ef(c);
        std::vector<std::vector<double>> table;
        for (std::size_t s = 0; s < r.selected.size(); ++s) {
            table.push_back(r.eoc_w[s]);
            table.push_back(r.eoc_v[s]);
        }
        worst = std::max(worst, verify_detail::max_table_diff(table, *want));
    }
    return {worst <= 0.02, "max entry difference " + sci(worst)};
}

Outcome iod_tables() {
    int bad = 0;
    bool pi_detected = false;
    for (const auto& row : golden::iod_tables()) {
        const auto c = parse_config({{"experiment", "iod"}, {"geometry", std::string(to_string(row.geometry))}, {"n", 4},
                                     {"etas", {row.eta}}, {"k_grid", {{"min", 1}, {"max", 5}, {"step", 0.01}}}});
        const auto r = run_iod(c);
        const auto& d = r.rows.front().detections;
        bool ok = d.size() == row.ks.size();
        for (std::size_t i = 0; ok && i < d.size(); ++i) ok = std::abs(d[i] - row.ks[i]) <= 0.01 + 1e-9;
        if (!ok) ++bad;
        if (row.geometry == Geometry::sphere)
            for (double k : d) pi_detected = pi_detected || std::abs(k - std::numbers::pi) <= 0.01;
    }
    bool pi_root = false;
    for (cplx k : ites_roots("sphere", 4.0, 1.0)) pi_root = pi_root || std::abs(k - std::numbers::pi) < 1e-6;
    return {bad == 0 && pi_root && !pi_detected,
            std::to_string(6 - bad) + "/6 rows match; pi in ites: " + (pi_root ? "yes" : "no") +
                ", pi in iod: " + (pi_detected ? "yes" : "no")};
}

Outcome reconstruction() {
    const auto c = parse_config({{"experiment", "recon"}, {"geometry", "disk"}, {"n", 2}, {"k", 1.5}, {"R_C", 2},
                                 {"n_src", 64}, {"n_rec", 64}, {"etas", {0.5, {1.0, 0.5}}}});
    const auto run = run_recon(c);
    double worst = 0.0;
    for (const auto& rc : run.cases) worst = std::max({worst, rc.err_direct, rc.err_lsq});
    return {worst < 1e-2 && run.dtn_max_rel_diff < 1e-10,
            "max eta error " + sci(worst) + ", DtN symbol difference " + sci(run.dtn_max_rel_diff)};
}

Outcome lsm() {
    const auto c = parse_config({{"experiment", "lsm"}, {"geometry", "sphere"}, {"n", 3}, {"eta", 0}, {"z_radius", 0.3},
                                 {"k_star", 4.443358}, {"probe_offsets", {1e-3, 0.1}},
                                 {"k_grid", {{"min", 4.4}, {"max", 4.5}, {"step", 0.01}}}});
    const auto r = run_lsm(c);
    return {r.ratio > 100.0, "squared-norm near/far ratio " + sci(r.ratio) + " (norm ratio " + sci(std::sqrt(r.ratio)) + ")"};
}

Outcome property_suite() {
    int failed = 0;
    std::string names;
    const auto checks = run_property_suite();
    for (const auto& ch : checks)
        if (!ch.passed) {
            ++failed;
            names += " " + ch.name;
        }
    return {failed == 0, std::to_string(checks.size() - failed) + "/" + std::to_string(checks.size()) + " checks pass" +
                             (failed ? " (failing:" + names + ")" : "")};
}

}  // namespace

int main() {
    struct Gate {
        int id;
        const char* name;
        double limit_s;
        std::function<Outcome()> run;
    };
    const std::vector<Gate> gates{
        {1, "sphere eigenvalues", 10, [] { return eigenvalue_table("sphere", golden::sphere_n3()); }},
        {2, "circle eigenvalues", 10, [] { return eigenvalue_table("disk", golden::disk_n3()); }},
        {3, "eigenvalue EOC tables", 60, eoc_eigenvalues},
        {4, "eigenfunction EOC tables", 60, eoc_eigenfunctions},
        {5, "inside-outside duality tables", 120, iod_tables},
        {6, "conductivity reconstruction", 30, reconstruction},
        {7, "LSM blow-up", 5, lsm},
        {8, "property suite", 120, property_suite},
    };
    int failures = 0;
    for (const auto& g : gates) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = g.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool ok = o.ok && s < g.limit_s;
        failures += ok ? 0 : 1;
        std::ostringstream t;
        t.precision(2);
        t << std::fixed << s;
        std::cout << (ok ? "PASS" : "FAIL") << " criterion " << g.id << " (" << g.name << "): " << o.detail << "; "
                  << t.str() << " s (limit " << g.limit_s << " s)" << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
