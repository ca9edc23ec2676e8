/**
 * @file experiments.hpp
 * @brief Experiment configurations and runners behind the command-line tool.
 *
 * Configurations are JSON objects. Complex numbers are written either as a
 * plain number or as a two-element array [re, im].
 */
#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctev/dispersion.hpp"
#include "ctev/eigenpairs.hpp"
#include "ctev/forward.hpp"
#include "ctev/iod.hpp"
#include "ctev/medium.hpp"
#include "ctev/recon.hpp"
#include "ctev/rootfind.hpp"

namespace ctev {

inline constexpr const char* kVersion = "1.0.0";

/// Thrown for malformed or out-of-range configuration fields.
class config_error : public std::invalid_argument {
public:
    config_error(const std::string& field, const std::string& msg)
        : std::invalid_argument("config field '" + field + "': " + msg), field_(field) {}
    [[nodiscard]] const std::string& field() const { return field_; }

private:
    std::string field_;
};

// ---------------------------------------------------------------------------
// Formatting

inline std::string fmt6(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s(buf);
    if (s == "-0.000000") s = "0.000000";
    return s;
}

inline std::string fmt_sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

/// "a+bi" with 6 decimals, or "a" when |Im| < 5e-7.
inline std::string fmt_complex(cplx z) {
    if (std::abs(z.imag()) < 5e-7) return fmt6(z.real());
    return fmt6(z.real()) + (z.imag() < 0 ? "-" : "+") + fmt6(std::abs(z.imag())) + "i";
}

// ---------------------------------------------------------------------------
// Configuration

struct KGrid {
    double min = 1.0;
    double max = 5.0;
    double step = 0.01;
};

struct ExperimentConfig {
    std::string experiment;
    Geometry geometry = Geometry::sphere;
    cplx n{3.0, 0.0};
    cplx eta{0.0, 0.0};
    std::vector<cplx> etas;                ///< explicit eta list (iod, recon truth values)
    rootfind::SearchRect rect{0.5, 10.0, -0.01, 10.0};
    int max_order = 0;
    double tol = 1e-10;
    KGrid k_grid;
    double floor = 1e-8;
    double proximity = 0.1;
    double k = 1.5;
    double R_C = 2.0;
    int n_src = 64;
    int n_rec = 64;
    double alpha = 1e-10;
    double noise = 0.0;
    double morozov_tau = 1.1;
    double z_radius = 0.3;
    double k_star = 4.443358;
    std::vector<double> probe_offsets{1e-3, 0.1};
    int lsm_extra_orders = 6;
    double n1 = 3.0;
    std::vector<double> n2_values;
    int quad_order = 64;
    nlohmann::json raw;
};

namespace config_detail {

inline cplx parse_complex(const nlohmann::json& j, const std::string& field) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw config_error(field, "expected a number or [re, im]");
}

inline double get_double(const nlohmann::json& j, const std::string& key, double def) {
    if (!j.contains(key)) return def;
    if (!j[key].is_number()) throw config_error(key, "expected a number");
    const double v = j[key].get<double>();
    if (!std::isfinite(v)) throw config_error(key, "must be finite");
    return v;
}

inline int get_int(const nlohmann::json& j, const std::string& key, int def) {
    if (!j.contains(key)) return def;
    if (!j[key].is_number_integer()) throw config_error(key, "expected an integer");
    return j[key].get<int>();
}

inline void require(bool ok, const std::string& field, const std::string& msg) {
    if (!ok) throw config_error(field, msg);
}

inline std::vector<cplx> parse_eta_sequence(const nlohmann::json& seq) {
    require(seq.is_object(), "eta_sequence", "expected an object {base, first, last}");
    const double base = get_double(seq, "base", 0.5);
    const int first = get_int(seq, "first", 0);
    const int last = get_int(seq, "last", 8);
    require(base > 0.0 && base < 1.0, "eta_sequence.base", "must lie in (0, 1)");
    require(first >= 0 && last >= first, "eta_sequence", "requires 0 <= first <= last");
    std::vector<cplx> out;
    for (int i = first; i <= last; ++i) out.emplace_back(std::pow(base, i), 0.0);
    return out;
}

}  // namespace config_detail

inline const std::vector<std::string>& experiment_ids() {
    static const std::vector<std::string> ids{"ites", "eoc-ev", "eoc-ef", "iod", "recon", "lsm", "absorbing", "verify"};
    return ids;
}

/// Parses and validates a configuration; `subcommand` overrides a missing experiment id.
inline ExperimentConfig parse_config(const nlohmann::json& j, const std::string& subcommand = "") {
    using namespace config_detail;
    if (!j.is_object()) throw config_error("<root>", "expected a JSON object");
    ExperimentConfig c;
    c.raw = j;
    c.experiment = j.value("experiment", subcommand);
    if (!subcommand.empty() && c.experiment != subcommand)
        throw config_error("experiment", "config is for '" + c.experiment + "' but subcommand is '" + subcommand + "'");
    const auto& ids = experiment_ids();
    if (std::find(ids.begin(), ids.end(), c.experiment) == ids.end())
        throw config_error("experiment", "unknown experiment id '" + c.experiment + "'");

    if (j.contains("geometry")) {
        require(j["geometry"].is_string(), "geometry", "expected \"disk\" or \"sphere\"");
        try {
            c.geometry = parse_geometry(j["geometry"].get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw config_error("geometry", e.what());
        }
    }
    if (j.contains("n")) c.n = parse_complex(j["n"], "n");
    require(c.n.real() > 0.0, "n", "Re(n) must be positive");
    if (j.contains("eta")) c.eta = parse_complex(j["eta"], "eta");
    if (j.contains("eta_sequence")) {
        c.etas = parse_eta_sequence(j["eta_sequence"]);
    } else if (j.contains("etas")) {
        require(j["etas"].is_array(), "etas", "expected an array");
        for (std::size_t i = 0; i < j["etas"].size(); ++i)
            c.etas.push_back(parse_complex(j["etas"][i], "etas[" + std::to_string(i) + "]"));
    }
    if (j.contains("rect")) {
        const auto& r = j["rect"];
        require(r.is_object(), "rect", "expected {re_min, re_max, im_min, im_max}");
        for (const char* key : {"re_min", "re_max", "im_min", "im_max"})
            require(r.contains(key) && r[key].is_number(), std::string("rect.") + key, "missing or not a number");
        c.rect = {r["re_min"].get<double>(), r["re_max"].get<double>(), r["im_min"].get<double>(),
                  r["im_max"].get<double>()};
        try {
            c.rect.validate();
        } catch (const std::invalid_argument& e) {
            throw config_error("rect", e.what());
        }
        require(!c.rect.contains(cplx(0.0)) || c.experiment == "verify", "rect", "must exclude k = 0");
    }
    c.max_order = get_int(j, "max_order", c.max_order);
    require(c.max_order >= 0 && c.max_order <= kMaxModalOrder, "max_order", "must lie in [0, 200]");
    c.tol = get_double(j, "tol", c.tol);
    require(c.tol > 0.0, "tol", "must be positive");
    if (j.contains("k_grid")) {
        const auto& g = j["k_grid"];
        require(g.is_object(), "k_grid", "expected {min, max, step}");
        c.k_grid = {get_double(g, "min", 1.0), get_double(g, "max", 5.0), get_double(g, "step", 0.01)};
        require(c.k_grid.min > 0.0 && c.k_grid.max >= c.k_grid.min, "k_grid", "requires 0 < min <= max");
        require(c.k_grid.step > 0.0, "k_grid.step", "must be positive");
    }
    c.floor = get_double(j, "floor", c.floor);
    require(c.floor >= 0.0 && c.floor < 1.0, "floor", "must lie in [0, 1)");
    c.proximity = get_double(j, "proximity", c.proximity);
    require(c.proximity > 0.0 && c.proximity < 0.25 * std::numbers::pi, "proximity", "must lie in (0, pi/4)");
    c.k = get_double(j, "k", c.k);
    require(c.k > 0.0, "k", "must be positive");
    c.R_C = get_double(j, "R_C", c.R_C);
    require(c.R_C > 1.0, "R_C", "must exceed 1 (measurement curve encloses the scatterer)");
    c.n_src = get_int(j, "n_src", c.n_src);
    c.n_rec = get_int(j, "n_rec", c.n_rec);
    require(c.n_src >= 1, "n_src", "must be at least 1");
    require(c.n_rec >= 4, "n_rec", "must be at least 4");
    c.alpha = get_double(j, "alpha", c.alpha);
    require(c.alpha > 0.0, "alpha", "must be positive");
    c.noise = get_double(j, "noise", c.noise);
    require(c.noise >= 0.0, "noise", "must be >= 0");
    c.morozov_tau = get_double(j, "morozov_tau", c.morozov_tau);
    require(c.morozov_tau >= 1.0, "morozov_tau", "must be >= 1");
    c.z_radius = get_double(j, "z_radius", c.z_radius);
    require(c.z_radius >= 0.0 && c.z_radius < 1.0, "z_radius", "must lie in [0, 1)");
    c.k_star = get_double(j, "k_star", c.k_star);
    if (j.contains("probe_offsets")) {
        require(j["probe_offsets"].is_array() && j["probe_offsets"].size() == 2, "probe_offsets",
                "expected [near, far]");
        c.probe_offsets = j["probe_offsets"].get<std::vector<double>>();
        require(c.probe_offsets[0] > 0.0 && c.probe_offsets[1] > c.probe_offsets[0], "probe_offsets",
                "requires 0 < near < far");
    }
    c.lsm_extra_orders = get_int(j, "lsm_extra_orders", c.lsm_extra_orders);
    require(c.lsm_extra_orders >= 0, "lsm_extra_orders", "must be >= 0");
    c.n1 = get_double(j, "n1", c.n1);
    if (j.contains("n2_values")) {
        require(j["n2_values"].is_array(), "n2_values", "expected an array");
        c.n2_values = j["n2_values"].get<std::vector<double>>();
        for (double v : c.n2_values) require(v >= 0.0, "n2_values", "entries must be >= 0");
    }
    c.quad_order = get_int(j, "quad_order", c.quad_order);
    require(c.quad_order >= 2, "quad_order", "must be at least 2");

    if (c.experiment == "eoc-ev" || c.experiment == "eoc-ef") {
        require(j.contains("eta_sequence") || j.contains("etas"), "eta_sequence", "required for " + c.experiment);
        require(c.etas.size() >= 2, "eta_sequence", "needs at least two values");
    }
    if (c.experiment == "iod" || c.experiment == "recon")
        require(!c.etas.empty(), "etas", "must be a non-empty list");
    if (c.experiment == "iod") require(c.n.imag() == 0.0, "n", "must be real for phase curves");
    if (c.experiment == "absorbing") {
        require(c.n1 > 1.0, "n1", "must exceed 1");
        require(!c.n2_values.empty(), "n2_values", "must be a non-empty list");
        require(c.eta.imag() == 0.0, "eta", "must be real");
    }
    if (c.experiment == "recon") require(c.geometry == Geometry::disk, "geometry", "reconstruction is disk only");
    if (c.experiment == "lsm") require(c.geometry == Geometry::sphere, "geometry", "lsm is sphere only");
    return c;
}

// ---------------------------------------------------------------------------
// Results

struct ItesResult {
    std::vector<EigenvalueRecord> records;
    std::string csv() const {
        std::ostringstream os;
        os << "order,re,im,residual,multiplicity\n";
        for (const auto& r : records)
            os << r.order << ',' << fmt6(r.k.real()) << ',' << fmt6(r.k.imag()) << ',' << fmt_sci(r.residual) << ','
               << r.multiplicity << '\n';
        return os.str();
    }
};

inline ItesResult run_ites(const ExperimentConfig& c) {
    return {compute_ites(c.geometry, Medium::constant(c.n, c.eta), c.rect, c.max_order, c.tol)};
}

/// Order-0 roots in table order at each eta, tracked from eta = 0.
struct EtaBranches {
    std::vector<double> etas;                    ///< as configured (typically decreasing)
    std::vector<cplx> reference;                 ///< eta = 0 roots, table order
    std::vector<std::vector<cplx>> k;            ///< [branch][eta index]
};

inline EtaBranches track_eta_branches(Geometry g, cplx n, const std::vector<cplx>& etas,
                                      const rootfind::SearchRect& rect, double tol) {
    EtaBranches eb;
    std::vector<cplx> ref;
    for (const auto& r : compute_ites(g, Medium::constant(n, 0.0), rect, 0, tol)) ref.push_back(r.k);
    eb.reference = table_order(ref);
    std::vector<std::size_t> idx(etas.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    // Follow branches from the smallest eta upwards.
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return std::abs(etas[a]) < std::abs(etas[b]); });
    std::vector<std::vector<cplx>> steps;
    for (std::size_t i : idx) {
        std::vector<cplx> ks;
        for (const auto& r : compute_ites(g, Medium::constant(n, etas[i]), rect, 0, tol)) ks.push_back(r.k);
        steps.push_back(std::move(ks));
    }
    const auto tracked = track_branches(eb.reference, steps);
    eb.k.assign(eb.reference.size(), std::vector<cplx>(etas.size()));
    for (std::size_t b = 0; b < tracked.size(); ++b)
        for (std::size_t s = 0; s < idx.size(); ++s) eb.k[b][idx[s]] = tracked[b][s];
    for (cplx e : etas) eb.etas.push_back(e.real());
    return eb;
}

struct EocEvResult {
    EtaBranches branches;
    std::vector<std::vector<double>> errors;   ///< [branch][eta]
    std::vector<std::vector<double>> eoc;      ///< [branch][eta - 1]

    std::string csv() const {
        std::ostringstream os;
        os << "eta";
        for (std::size_t b = 0; b < eoc.size(); ++b) os << ",EOC" << b + 1;
        os << '\n';
        for (std::size_t i = 0; i < branches.etas.size(); ++i) {
            os << fmt6(branches.etas[i]);
            for (std::size_t b = 0; b < eoc.size(); ++b) os << ',' << (i == 0 ? std::string() : fmt6(eoc[b][i - 1]));
            os << '\n';
        }
        return os.str();
    }

    std::string branches_csv() const {
        std::ostringstream os;
        os << "branch,eta,re,im,error\n";
        for (std::size_t b = 0; b < branches.k.size(); ++b) {
            os << b + 1 << ',' << fmt6(0.0) << ',' << fmt6(branches.reference[b].real()) << ','
               << fmt6(branches.reference[b].imag()) << ',' << fmt_sci(0.0) << '\n';
            for (std::size_t i = 0; i < branches.etas.size(); ++i)
                os << b + 1 << ',' << fmt6(branches.etas[i]) << ',' << fmt6(branches.k[b][i].real()) << ','
                   << fmt6(branches.k[b][i].imag()) << ',' << fmt_sci(errors[b][i]) << '\n';
        }
        return os.str();
    }
};

inline EocEvResult run_eoc_ev(const ExperimentConfig& c) {
    EocEvResult res;
    res.branches = track_eta_branches(c.geometry, c.n, c.etas, c.rect, c.tol);
    for (std::size_t b = 0; b < res.branches.k.size(); ++b) {
        std::vector<double> e;
        for (cplx k : res.branches.k[b]) e.push_back(std::abs(k - res.branches.reference[b]));
        res.eoc.push_back(eoc_sequence(e));
        res.errors.push_back(std::move(e));
    }
    return res;
}

/// Index of the first real and first complex branch in table order.
inline std::vector<std::size_t> eigenfunction_branches(const std::vector<cplx>& reference) {
    std::optional<std::size_t> re, cx;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        const bool real = std::abs(reference[i].imag()) < 1e-8;
        if (real && !re) re = i;
        if (!real && !cx) cx = i;
    }
    std::vector<std::size_t> out;
    if (re) out.push_back(*re);
    if (cx) out.push_back(*cx);
    return out;
}

struct EocEfResult {
    EtaBranches branches;
    std::vector<std::size_t> selected;                 ///< branch indices
    std::vector<std::vector<double>> err_w, err_v;     ///< [selected][eta]
    std::vector<std::vector<double>> eoc_w, eoc_v;     ///< [selected][eta - 1]

    std::string csv() const {
        std::ostringstream os;
        os << "eta";
        for (std::size_t s = 0; s < selected.size(); ++s)
            os << ",EOCw_branch" << selected[s] + 1 << ",EOCv_branch" << selected[s] + 1;
        os << '\n';
        for (std::size_t i = 0; i < branches.etas.size(); ++i) {
            os << fmt6(branches.etas[i]);
            for (std::size_t s = 0; s < selected.size(); ++s) {
                if (i == 0)
                    os << ",,";
                else
                    os << ',' << fmt6(eoc_w[s][i - 1]) << ',' << fmt6(eoc_v[s][i - 1]);
            }
            os << '\n';
        }
        return os.str();
    }
};

inline EocEfResult run_eoc_ef(const ExperimentConfig& c) {
    EocEfResult res;
    res.branches = track_eta_branches(c.geometry, c.n, c.etas, c.rect, c.tol);
    res.selected = eigenfunction_branches(res.branches.reference);
    for (std::size_t b : res.selected) {
        const cplx k0 = res.branches.reference[b];
        const auto w0 = RadialEigenfunction::make(c.geometry, k0, c.n, Component::w);
        const auto v0 = RadialEigenfunction::make(c.geometry, k0, c.n, Component::v);
        std::vector<double> ew, ev;
        for (cplx k : res.branches.k[b]) {
            ew.push_back(l2_error(RadialEigenfunction::make(c.geometry, k, c.n, Component::w), w0, c.quad_order));
            ev.push_back(l2_error(RadialEigenfunction::make(c.geometry, k, c.n, Component::v), v0, c.quad_order));
        }
        res.eoc_w.push_back(eoc_eigfun(ew));
        res.eoc_v.push_back(eoc_eigfun(ev));
        res.err_w.push_back(std::move(ew));
        res.err_v.push_back(std::move(ev));
    }
    return res;
}

struct IodRow {
    double eta = 0.0;
    PhaseCurve curve;
    std::vector<double> detections;
    std::vector<EigenvalueRecord> roots;   ///< real roots of orders 0..max_order on the k grid
    std::vector<double> unmatched;         ///< detections farther than max(step, 0.01) from every root
    std::vector<double> missed;            ///< roots with no detection within max(step, 0.01)
};

struct IodResult {
    std::vector<IodRow> rows;

    std::string detections_csv() const {
        std::ostringstream os;
        os << "eta,detections\n";
        for (const auto& r : rows) {
            os << fmt6(r.eta) << ',';
            for (std::size_t i = 0; i < r.detections.size(); ++i) os << (i ? ";" : "") << fmt6(r.detections[i]);
            os << '\n';
        }
        return os.str();
    }
};

inline IodRow run_iod_row(const ExperimentConfig& c, double eta) {
    IodRow row;
    row.eta = eta;
    const Medium med = Medium::constant(c.n, eta);
    row.curve = phase_curves(c.geometry, med, c.k_grid.min, c.k_grid.max, c.k_grid.step, c.floor);
    row.detections = detect_ites(row.curve, c.proximity);
    const rootfind::SearchRect rect{c.k_grid.min, c.k_grid.max, -kRealAxisShift, 0.5};
    for (const auto& r : compute_ites(c.geometry, med, rect, c.max_order, c.tol))
        if (std::abs(r.k.imag()) < 1e-6) row.roots.push_back(r);
    const double slack = std::max(c.k_grid.step, 0.01) + 1e-9;
    for (double d : row.detections) {
        const bool near = std::any_of(row.roots.begin(), row.roots.end(),
                                      [&](const EigenvalueRecord& r) { return std::abs(r.k.real() - d) <= slack; });
        if (!near) row.unmatched.push_back(d);
    }
    for (const auto& r : row.roots) {
        const bool hit = std::any_of(row.detections.begin(), row.detections.end(),
                                     [&](double d) { return std::abs(r.k.real() - d) <= slack; });
        if (!hit) row.missed.push_back(r.k.real());
    }
    return row;
}

inline IodResult run_iod(const ExperimentConfig& c) {
    IodResult res;
    for (cplx eta : c.etas) res.rows.push_back(run_iod_row(c, eta.real()));
    return res;
}

struct ReconCase {
    cplx eta_true;
    double alpha = 0.0;
    NearFieldDataset data;
    ReconstructionResult result;
    double err_direct = 0.0;   ///< max over nodes of |eta_direct - eta_true|
    double err_lsq = 0.0;
};

struct ReconRun {
    ModalOperator dtn_integral, dtn_closed;
    double dtn_max_rel_diff = 0.0;
    std::vector<ReconCase> cases;
};

inline nlohmann::json to_json(const ReconstructionResult& r) {
    nlohmann::json nodes = nlohmann::json::array();
    for (std::size_t j = 0; j < r.nodes.size(); ++j)
        nodes.push_back({{"theta", r.nodes[j]},
                         {"eta_direct", {r.eta_direct[j].real(), r.eta_direct[j].imag()}},
                         {"eta_lsq_pointwise", {r.eta_lsq_pointwise[j].real(), r.eta_lsq_pointwise[j].imag()}},
                         {"sources_used", r.direct_counts[j]}});
    return {{"alpha", r.alpha},
            {"model", r.model == EtaModel::constant ? "constant" : "pointwise"},
            {"eta_direct_mean", {r.eta_direct_mean.real(), r.eta_direct_mean.imag()}},
            {"eta_direct_spread", r.eta_direct_spread},
            {"eta_lsq", {r.eta_lsq.real(), r.eta_lsq.imag()}},
            {"residual_lsq", r.residual_lsq},
            {"residual_lsq_pointwise", r.residual_lsq_pointwise},
            {"max_density_residual", r.max_density_residual},
            {"nodes", nodes}};
}

inline ReconRun run_recon(const ExperimentConfig& c, unsigned long long seed = 0) {
    ReconRun run;
    const int M = max_mode_for(static_cast<std::size_t>(c.n_rec));
    run.dtn_integral = dtn_map(c.k, c.n, M);
    run.dtn_closed = dtn_closed_form(c.k * std::sqrt(c.n), M);
    for (int m = -M; m <= M; ++m)
        run.dtn_max_rel_diff = std::max(run.dtn_max_rel_diff, std::abs(run.dtn_integral.at(m) - run.dtn_closed.at(m)) /
                                                                  std::max(1.0, std::abs(run.dtn_closed.at(m))));
    for (std::size_t i = 0; i < c.etas.size(); ++i) {
        ReconCase rc;
        rc.eta_true = c.etas[i];
        rc.data = synth_nearfield(c.k, Medium::constant(c.n, rc.eta_true), c.R_C, c.n_src, c.n_rec);
        rc.alpha = c.alpha;
        if (c.noise > 0.0) {
            rc.data = add_noise(rc.data, c.noise, seed + i);
            rc.alpha = morozov_alpha(rc.data, c.noise, c.morozov_tau);
        }
        rc.result = recover_eta(rc.data, c.n, rc.alpha, EtaModel::constant);
        for (std::size_t j = 0; j < rc.result.nodes.size(); ++j)
            if (rc.result.direct_counts[j] > 0)
                rc.err_direct = std::max(rc.err_direct, std::abs(rc.result.eta_direct[j] - rc.eta_true));
        rc.err_lsq = std::abs(rc.result.eta_lsq - rc.eta_true);
        run.cases.push_back(std::move(rc));
    }
    return run;
}

struct LsmResult {
    std::vector<double> k;
    std::vector<double> gnorm_sq;
    double near_min = 0.0;    ///< min of ||g||^2 at k* +- near offset
    double far_max = 0.0;     ///< max of ||g||^2 at k* +- far offset
    double ratio = 0.0;

    std::string csv() const {
        std::ostringstream os;
        os << "k,gnorm_sq\n";
        for (std::size_t i = 0; i < k.size(); ++i) os << fmt6(k[i]) << ',' << fmt_sci(gnorm_sq[i]) << '\n';
        return os.str();
    }
};

/// Modal truncation used by the lsm experiment: ceil(k) + extra.
inline int lsm_truncation(double k, int extra) { return static_cast<int>(std::ceil(k)) + extra; }

inline LsmResult run_lsm(const ExperimentConfig& c) {
    LsmResult res;
    const Medium med = Medium::constant(c.n, c.eta);
    auto g = [&](double k) { return lsm_gnorm(k, c.z_radius, med, lsm_truncation(k, c.lsm_extra_orders)); };
    const auto count = static_cast<std::size_t>(std::llround((c.k_grid.max - c.k_grid.min) / c.k_grid.step)) + 1;
    for (std::size_t i = 0; i < count; ++i) {
        const double k = c.k_grid.min + static_cast<double>(i) * c.k_grid.step;
        res.k.push_back(k);
        res.gnorm_sq.push_back(g(k));
    }
    const double dn = c.probe_offsets[0], df = c.probe_offsets[1];
    res.near_min = std::min(g(c.k_star - dn), g(c.k_star + dn));
    res.far_max = std::max(g(c.k_star - df), g(c.k_star + df));
    res.ratio = res.near_min / res.far_max;
    return res;
}

struct AbsorbingRow {
    double n2 = 0.0;
    double delta = 0.0;   ///< n2 / (n1 - 1)
    std::vector<EigenvalueRecord> roots;
    std::vector<cplx> nearest_reference;
    std::vector<double> distance;
};

struct AbsorbingResult {
    std::vector<cplx> reference;   ///< n2 = 0 roots
    std::vector<AbsorbingRow> rows;
    bool all_in_region = true;
    bool converging = true;   ///< per reference root, distance to nearest absorbing root decreases with n2

    std::string csv() const {
        std::ostringstream os;
        os << "n2,order,re,im,ref_re,ref_im,distance,minus_delta\n";
        for (const auto& r : rows)
            for (std::size_t i = 0; i < r.roots.size(); ++i)
                os << fmt6(r.n2) << ',' << r.roots[i].order << ',' << fmt6(r.roots[i].k.real()) << ','
                   << fmt6(r.roots[i].k.imag()) << ',' << fmt6(r.nearest_reference[i].real()) << ','
                   << fmt6(r.nearest_reference[i].imag()) << ',' << fmt_sci(r.distance[i]) << ',' << fmt6(-r.delta)
                   << '\n';
        return os.str();
    }
};

inline AbsorbingResult run_absorbing(const ExperimentConfig& c) {
    AbsorbingResult res;
    for (const auto& r : compute_ites(c.geometry, Medium::absorbing(c.n1, 0.0, c.eta), c.rect, c.max_order, c.tol))
        res.reference.push_back(r.k);
    std::vector<double> n2 = c.n2_values;
    std::sort(n2.begin(), n2.end(), std::greater<>());
    // For each reference root, distance to the closest absorbing root at each n2.
    std::vector<std::vector<double>> ref_dist(res.reference.size());
    for (double v : n2) {
        AbsorbingRow row;
        row.n2 = v;
        row.delta = v / (c.n1 - 1.0);
        row.roots = compute_ites(c.geometry, Medium::absorbing(c.n1, v, c.eta), c.rect, c.max_order, c.tol);
        for (const auto& r : row.roots) {
            if (!(r.k.imag() > -row.delta)) res.all_in_region = false;
            cplx best = 0.0;
            double bd = std::numeric_limits<double>::infinity();
            for (cplx ref : res.reference)
                if (std::abs(ref - r.k) < bd) {
                    bd = std::abs(ref - r.k);
                    best = ref;
                }
            row.nearest_reference.push_back(best);
            row.distance.push_back(bd);
        }
        for (std::size_t i = 0; i < res.reference.size(); ++i) {
            double bd = std::numeric_limits<double>::infinity();
            for (const auto& r : row.roots) bd = std::min(bd, std::abs(r.k - res.reference[i]));
            ref_dist[i].push_back(bd);
        }
        res.rows.push_back(std::move(row));
    }
    for (const auto& d : ref_dist)
        for (std::size_t s = 1; s < d.size(); ++s)
            if (!(d[s] < d[s - 1])) res.converging = false;
    return res;
}

}  // namespace ctev
