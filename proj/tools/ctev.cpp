// Command-line front end: ctev <subcommand> --config <path> [--out <dir>] [--seed <int>]

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ctev/ctev.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + p.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

class OutputDir {
public:
    explicit OutputDir(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

    void write(const std::string& name, const std::string& content) {
        std::ofstream out(dir_ / name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
        out << content;
        files_.push_back({{"name", name}, {"sha256", sha256_hex(content)}});
    }

    void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

    [[nodiscard]] const json& files() const { return files_; }
    [[nodiscard]] const fs::path& path() const { return dir_; }

private:
    fs::path dir_;
    json files_ = json::array();
};

json cjson(ctev::cplx z) { return json::array({z.real(), z.imag()}); }

std::string eta_tag(double eta) {
    std::string s = ctev::fmt6(eta);
    while (s.size() > 1 && s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
    for (char& ch : s)
        if (ch == '.') ch = 'p';
    return s;
}

bool cmd_ites(const ctev::ExperimentConfig& c, OutputDir& out, json& summary) {
    const auto r = ctev::run_ites(c);
    out.write("ites.csv", r.csv());
    json roots = json::array();
    for (const auto& e : r.records)
        roots.push_back({{"order", e.order}, {"k", cjson(e.k)}, {"display", ctev::fmt_complex(e.k)},
                         {"residual", e.residual}, {"multiplicity", e.multiplicity}, {"refined", e.refined}});
    summary["roots"] = roots;
    for (const auto& e : r.records) std::cout << e.order << "  " << ctev::fmt_complex(e.k) << '\n';
    return std::all_of(r.records.begin(), r.records.end(), [](const auto& e) { return e.refined; });
}

bool cmd_eoc_ev(const ctev::ExperimentConfig& c, OutputDir& out, json& summary) {
    const auto r = ctev::run_eoc_ev(c);
    out.write("eoc_ev.csv", r.csv());
    out.write("eoc_ev_branches.csv", r.branches_csv());
    json ref = json::array();
    for (auto k : r.branches.reference) ref.push_back(ctev::fmt_complex(k));
    summary["reference"] = ref;
    summary["eoc"] = r.eoc;
    std::cout << r.csv();
    return true;
}

bool cmd_eoc_ef(const ctev::ExperimentConfig& c, OutputDir& out, json& summary) {
    const auto r = ctev::run_eoc_ef(c);
    out.write("eoc_ef.csv", r.csv());
    json sel = json::array();
    for (auto b : r.selected) sel.push_back(ctev::fmt_complex(r.branches.reference[b]));
    summary["branches"] = sel;
    summary["eoc_w"] = r.eoc_w;
    summary["eoc_v"] = r.eoc_v;
    summary["sq_error_w"] = r.err_w;
    summary["sq_error_v"] = r.err_v;
    std::cout << r.csv();
    return true;
}

bool cmd_iod(const ctev::ExperimentConfig& c, OutputDir& out, json& summary) {
    const auto r = ctev::run_iod(c);
    out.write("iod_detections.csv", r.detections_csv());
    json rows = json::array();
    bool ok = true;
    for (const auto& row : r.rows) {
        const std::string tag = eta_tag(row.eta);
        out.write("phase_curves_eta_" + tag + ".csv", ctev::phase_curve_csv(row.curve));
        out.write("envelope_eta_" + tag + ".csv", ctev::envelope_csv(row.curve));
        json roots = json::array();
        for (const auto& e : row.roots)
            roots.push_back({{"order", e.order}, {"k", e.k.real()}, {"multiplicity", e.multiplicity}});
        rows.push_back({{"eta", row.eta},
                        {"detections", row.detections},
                        {"roots", roots},
                        {"unmatched_detections", row.unmatched},
                        {"undetected_roots", row.missed}});
        ok = ok && row.unmatched.empty();
        std::cout << "eta=" << ctev::fmt6(row.eta) << ':';
        for (double d : row.detections) std::cout << ' ' << std::fixed << std::setprecision(2) << d;
        std::cout << '\n';
    }
    summary["rows"] = rows;
    return ok;
}

bool cmd_recon(const ctev::ExperimentConfig& c, OutputDir& out, json& summary, unsigned long long seed) {
    const auto run = ctev::run_recon(c, seed);
    json cases = json::array();
    bool ok = run.dtn_max_rel_diff < 1e-10;
    for (std::size_t i = 0; i < run.cases.size(); ++i) {
        const auto& rc = run.cases[i];
        const std::string tag = std::to_string(i);
        out.write("nearfield_" + tag + ".csv", ctev::to_csv(rc.data));
        out.write_json("nearfield_" + tag + ".json", ctev::to_json(rc.data));
        json rj = ctev::to_json(rc.result);
        rj["eta_true"] = cjson(rc.eta_true);
        rj["max_abs_error_direct"] = rc.err_direct;
        rj["abs_error_lsq"] = rc.err_lsq;
        out.write_json("recon_" + tag + ".json", rj);
        cases.push_back({{"eta_true", cjson(rc.eta_true)},
                         {"alpha", rc.alpha},
                         {"eta_direct_mean", cjson(rc.result.eta_direct_mean)},
                         {"eta_lsq", cjson(rc.result.eta_lsq)},
                         {"max_abs_error_direct", rc.err_direct},
                         {"abs_error_lsq", rc.err_lsq}});
        std::cout << "eta_true=" << ctev::fmt_complex(rc.eta_true) << "  direct=" << ctev::fmt_complex(rc.result.eta_direct_mean)
                  << "  lsq=" << ctev::fmt_complex(rc.result.eta_lsq) << "  alpha=" << rc.alpha << '\n';
    }
    summary["dtn_max_rel_diff"] = run.dtn_max_rel_diff;
    summary["noise"] = c.noise;
    summary["seed"] = seed;
    summary["cases"] = cases;
    return ok;
}

bool cmd_lsm(const ctev::ExperimentConfig& c, OutputDir& out, json& summary) {
    const auto r = ctev::run_lsm(c);
    out.write("lsm.csv", r.csv());
    summary["k_star"] = c.k_star;
    summary["probe_offsets"] = c.probe_offsets;
    summary["near_min_gnorm_sq"] = r.near_min;
    summary["far_max_gnorm_sq"] = r.far_max;
    summary["ratio"] = r.ratio;
    std::cout << "ratio " << r.ratio << '\n';
    return true;
}

bool cmd_absorbing(const ctev::ExperimentConfig& c, OutputDir& out, json& summary) {
    const auto r = ctev::run_absorbing(c);
    out.write("absorbing.csv", r.csv());
    json ref = json::array();
    for (auto k : r.reference) ref.push_back(ctev::fmt_complex(k));
    summary["reference"] = ref;
    summary["all_in_region"] = r.all_in_region;
    summary["converging"] = r.converging;
    std::cout << r.csv();
    return r.all_in_region && r.converging;
}

bool cmd_verify(OutputDir& out, json& summary, unsigned long long seed) {
    const auto checks = ctev::run_property_suite(seed);
    json list = json::array();
    std::ostringstream csv;
    csv << "check,passed,seconds,detail\n";
    bool ok = true;
    for (const auto& ch : checks) {
        ok = ok && ch.passed;
        list.push_back({{"name", ch.name}, {"passed", ch.passed}, {"detail", ch.detail}});
        csv << ch.name << ',' << (ch.passed ? 1 : 0) << ',' << ctev::fmt6(ch.seconds) << ",\"" << ch.detail << "\"\n";
        std::cout << (ch.passed ? "PASS " : "FAIL ") << ch.name << "  " << ch.detail << '\n';
    }
    out.write("verify.csv", csv.str());
    summary["checks"] = list;
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conductive transmission eigenvalue laboratory"};
    app.require_subcommand(1);
    std::string config_path;
    std::string out_dir = "out";
    unsigned long long seed = 0;
    std::map<std::string, std::string> help{
        {"ites", "eigenvalue tables"},
        {"eoc-ev", "eigenvalue convergence orders"},
        {"eoc-ef", "eigenfunction convergence orders"},
        {"iod", "phase curves and inside-outside duality detections"},
        {"recon", "synthetic near-field data and conductivity recovery"},
        {"lsm", "far-field equation solution norm sweep"},
        {"absorbing", "eigenvalues for absorbing media"},
        {"verify", "property suite and golden tables"}};
    for (const auto& id : ctev::experiment_ids()) {
        auto* sub = app.add_subcommand(id, help[id]);
        sub->add_option("--config", config_path, "JSON configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "seed for noise generation");
    }
    CLI11_PARSE(app, argc, argv);
    const std::string cmd = app.get_subcommands().front()->get_name();

    try {
        const std::string raw = read_file(config_path);
        json j;
        try {
            j = json::parse(raw);
        } catch (const json::parse_error& e) {
            throw ctev::config_error("<root>", std::string("invalid JSON: ") + e.what());
        }
        const ctev::ExperimentConfig cfg = ctev::parse_config(j, cmd);
        OutputDir out(out_dir);
        json summary;
        bool ok = false;
        if (cmd == "ites") ok = cmd_ites(cfg, out, summary);
        else if (cmd == "eoc-ev") ok = cmd_eoc_ev(cfg, out, summary);
        else if (cmd == "eoc-ef") ok = cmd_eoc_ef(cfg, out, summary);
        else if (cmd == "iod") ok = cmd_iod(cfg, out, summary);
        else if (cmd == "recon") ok = cmd_recon(cfg, out, summary, seed);
        else if (cmd == "lsm") ok = cmd_lsm(cfg, out, summary);
        else if (cmd == "absorbing") ok = cmd_absorbing(cfg, out, summary);
        else if (cmd == "verify") ok = cmd_verify(out, summary, seed == 0 ? 20240601ULL : seed);
        out.write_json("summary.json", summary);
        json manifest{{"tool", "ctev"},
                      {"version", ctev::kVersion},
                      {"subcommand", cmd},
                      {"config_path", config_path},
                      {"config_sha256", sha256_hex(raw)},
                      {"seed", seed},
                      {"status", ok ? "ok" : "failed"},
                      {"outputs", out.files()}};
        std::ofstream(out.path() / "manifest.json") << manifest.dump(2) << '\n';
        return ok ? 0 : 1;
    } catch (const ctev::config_error& e) {
        std::cerr << "ctev " << cmd << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "ctev " << cmd << " (" << config_path << "): " << e.what() << '\n';
        return 3;
    }
}
