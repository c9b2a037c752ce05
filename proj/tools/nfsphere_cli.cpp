// nfsphere: command-line front end.
//
//   nfsphere <command> [--config PATH] [--override K=V]... [--out DIR] [--threads N]
//
// Exit codes: 0 ok, 2 configuration error, 3 numerical failure,
// 4 instability abort.

#include <CLI11.hpp>
#include <json.hpp>

#include <boost/crc.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "config.hpp"
#include "nfsphere/amplitude.hpp"
#include "nfsphere/bifurcation.hpp"
#include "nfsphere/delaysim.hpp"
#include "nfsphere/mesh.hpp"
#include "nfsphere/normalform.hpp"
#include "nfsphere/parallel.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nfs;
using namespace nfs::cli;

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumerical = 3, kInstability = 4 };

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json cjson(cdouble z) { return json::array({z.real(), z.imag()}); }

// Collects artifacts, writes each one atomically and records its checksum.
class Output {
public:
    explicit Output(fs::path dir) : dir_(std::move(dir)) {}

    void write(const std::string& name, const std::string& content) {
        fs::create_directories(dir_);
        const fs::path dst = dir_ / name, tmp = dir_ / (name + ".tmp");
        {
            std::ofstream os(tmp, std::ios::binary);
            if (!os) throw std::runtime_error("cannot write " + tmp.string());
            os << content;
        }
        fs::rename(tmp, dst);
        boost::crc_32_type crc;
        crc.process_bytes(content.data(), content.size());
        char hex[16];
        std::snprintf(hex, sizeof hex, "%08x", crc.checksum());
        artifacts_.push_back({{"file", name}, {"bytes", content.size()}, {"crc32", hex}});
    }
    void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }
    void record_file(const std::string& name) {
        std::ifstream in(dir_ / name, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        const std::string s = ss.str();
        boost::crc_32_type crc;
        crc.process_bytes(s.data(), s.size());
        char hex[16];
        std::snprintf(hex, sizeof hex, "%08x", crc.checksum());
        artifacts_.push_back({{"file", name}, {"bytes", s.size()}, {"crc32", hex}});
    }
    const json& artifacts() const { return artifacts_; }
    const fs::path& dir() const { return dir_; }

private:
    fs::path dir_;
    json artifacts_ = json::array();
};

// ---- hopf helpers ----------------------------------------------------------

HopfPoint select_hopf(const RunConfig& c, const QuadratureRule& rule, std::vector<HopfPoint>* all = nullptr) {
    auto pts = hopf_points_at_eta_e(c.model, c.run.l, c.run.eta_e, c.run.omega_lo, c.run.omega_hi, c.run.scan, rule);
    if (all) *all = pts;
    if (pts.empty()) throw SingularityError("no Hopf point of this degree in the frequency range");
    std::size_t best = 0;
    if (c.run.omega > 0)
        for (std::size_t i = 1; i < pts.size(); ++i)
            if (std::abs(pts[i].omega - c.run.omega) < std::abs(pts[best].omega - c.run.omega)) best = i;
    return pts[best];
}

json hopf_json(const HopfPoint& h) {
    return {{"l", h.l}, {"omega", h.omega}, {"eta_e", h.eta_e}, {"eta_i", h.eta_i}};
}

// ---- commands --------------------------------------------------------------

void cmd_mesh(const RunConfig& c, Output& out) {
    SphereMesh mesh = build_mesh(c.refinement);
    std::ostringstream os;
    write_mesh(os, mesh);
    out.write("mesh.txt", os.str());
}

void cmd_laplace(const RunConfig& c, Output& out) {
    std::ostringstream os;
    os << "n,m,l,order,quotient,error_norm\n";
    for (int n : c.run.refinements) {
        SphereMesh mesh = build_mesh(n);
        LaplaceSolver solver(mesh, discrete_laplacian(mesh));
        for (int l : c.run.degrees) {
            if (std::abs(c.run.order) > l) throw ConfigError("run.order must satisfy |order| <= l");
            EigenTestResult r = solver.eigentest(l, c.run.order);
            os << n << ',' << mesh.size() << ',' << l << ',' << c.run.order << ',' << num(r.quotient) << ','
               << num(r.error_norm) << '\n';
        }
    }
    out.write("table1.csv", os.str());
}

void cmd_spectrum(const RunConfig& c, Output& out, const QuadratureRule& rule) {
    std::ostringstream os;
    os << "l,re,im,v_e_re,v_e_im,v_i_re,v_i_im,residual\n";
    json summary = json::array();
    for (int l = 0; l <= c.run.l_max; ++l) {
        RootSearch rs = find_roots(c.model, l, c.run.region, c.run.density, rule);
        for (const auto& e : rs.roots)
            os << l << ',' << num(e.lambda.real()) << ',' << num(e.lambda.imag()) << ',' << num(e.v(0).real()) << ','
               << num(e.v(0).imag()) << ',' << num(e.v(1).real()) << ',' << num(e.v(1).imag()) << ','
               << num(e.residual) << '\n';
        summary.push_back({{"l", l},
                           {"roots", rs.roots.size()},
                           {"winding", rs.winding},
                           {"failed_seeds", rs.failed_seeds},
                           {"count_mismatch", rs.count_mismatch}});
    }
    out.write("spectrum.csv", os.str());
    out.write_json("spectrum.json", summary);
}

void cmd_bifdiag(const RunConfig& c, Output& out, const QuadratureRule& rule) {
    BifurcationDiagram d = trace_diagram(c.model, c.run.l_max, c.run.omega_grid.values(), c.run.eta_e_grid.values(),
                                         c.run.window, rule);
    std::ostringstream os;
    os << "l,kind,curve,eta_e,eta_i,omega\n";
    for (std::size_t k = 0; k < d.curves.size(); ++k) {
        const Curve& cv = d.curves[k];
        for (const auto& p : cv.points)
            os << cv.l << ',' << (cv.kind == CurveKind::Fold ? "fold" : "hopf") << ',' << k << ',' << num(p.eta_e)
               << ',' << num(p.eta_i) << ',' << num(p.omega) << '\n';
    }
    out.write("bifdiag.csv", os.str());
    out.write_json("bifdiag.json", {{"curves", d.curves.size()}, {"failures", d.failures}});
}

void cmd_hopf(const RunConfig& c, Output& out, const QuadratureRule& rule) {
    std::vector<HopfPoint> all;
    HopfPoint h = select_hopf(c, rule, &all);
    EigenSolution e = critical_eigen(h.params, h.l, h.omega, rule);
    json pts = json::array();
    for (const auto& p : all) pts.push_back(hopf_json(p));
    out.write_json("hopf.json", {{"selected", hopf_json(h)},
                                 {"eigenvector", {cjson(e.v(0)), cjson(e.v(1))}},
                                 {"residual", e.residual},
                                 {"all", pts}});
}

void cmd_nfc(const RunConfig& c, Output& out, const QuadratureRule& rule) {
    HopfPoint h = select_hopf(c, rule);
    EigenSolution e = critical_eigen(h.params, h.l, h.omega, rule);
    NormalFormResult nf = compute_normal_form(h.params, e, c.run.export_terms, rule);
    json g = json::object();
    const auto& names = coefficient_formulas(h.l);
    for (std::size_t k = 0; k < nf.coeffs.g.size(); ++k) g[names[k].name] = cjson(nf.coeffs.g[k]);
    json j = {{"hopf", hopf_json(h)}, {"eigenvector", {cjson(e.v(0)), cjson(e.v(1))}}, {"g", g}};
    if (nf.coeffs.lyapunov_l1) j["lyapunov_l1"] = *nf.coeffs.lyapunov_l1;
    if (h.l == 1) {
        BranchVerdict v = branch_stability_l1(c.run.mu, nf.coeffs.g[0], nf.coeffs.g[1]);
        json rot = json::array(), st = json::array();
        for (auto z : v.rotating) rot.push_back(cjson(z));
        for (auto z : v.standing) st.push_back(cjson(z));
        j["branches"] = {{"mu", cjson(c.run.mu)},
                         {"rotating", {{"eigenvalues", rot}, {"stable", v.rotating_stable}}},
                         {"standing", {{"eigenvalues", st}, {"stable", v.standing_stable}}}};
    }
    if (c.run.export_terms) {
        json t = json::array();
        for (const auto& term : nf.terms)
            t.push_back({{"label", term.label},
                         {"degree", term.degree},
                         {"frequency", cjson(term.frequency)},
                         {"coefficient", {cjson(term.coefficient(0)), cjson(term.coefficient(1))}}});
        j["center_manifold_terms"] = t;
    }
    out.write_json("nfc.json", j);
}

void cmd_amplitude(const RunConfig& c, Output& out) {
    const auto& r = c.run;
    if (r.family_points < 2) throw ConfigError("run.family_points must be >= 2");
    std::ostringstream os;
    os << "kind,r_m1,r_0,r_1,psi,residual\n";
    json spectra = json::object();
    for (WaveKind kind : {WaveKind::Rotating, WaveKind::Standing}) {
        const bool rot = kind == WaveKind::Rotating;
        const double rmax = rot ? rotating_r1_max(r.mu, r.g11) : standing_r1_max(r.mu, r.g11, r.g12);
        for (int k = 0; k < r.family_points; ++k) {
            const double r1 = rmax * k / (r.family_points - 1);
            AmplitudeState s = rot ? rotating_wave_family(r1, r.mu, r.g11, r.g12)
                                   : standing_wave_family(r1, r.mu, r.g11, r.g12);
            // Endpoints sit on coordinate axes; use the rho form there.
            double res;
            if (s.r[0] < kOnAxis || s.r[2] < kOnAxis) {
                auto rho = rho_of(s);
                auto d = rho_rhs(rho[0], rho[1], r.mu, r.g11, r.g12);
                res = std::hypot(d[0], d[1]);
            } else {
                res = amp_rhs(s, r.mu, r.g11, r.g12).norm();
            }
            os << (rot ? "rotating" : "standing") << ',' << num(s.r[0]) << ',' << num(s.r[1]) << ',' << num(s.r[2])
               << ',' << num(s.psi) << ',' << num(res) << '\n';
        }
        json fam = json::array();
        for (auto z : family_spectrum(kind, r.mu, r.g11, r.g12)) fam.push_back(cjson(z));
        AmplitudeState mid = rot ? rotating_wave_family(rmax / 2, r.mu, r.g11, r.g12)
                                 : standing_wave_family(rmax / 2, r.mu, r.g11, r.g12);
        json fd = json::array();
        for (auto z : fd_spectrum(mid, r.mu, r.g11, r.g12)) fd.push_back(cjson(z));
        spectra[rot ? "rotating" : "standing"] = {{"closed_form", fam}, {"fd_at_midpoint", fd}};
    }
    BranchVerdict v = branch_stability_l1(r.mu, r.g11, r.g12);
    spectra["rotating"]["stable"] = v.rotating_stable;
    spectra["standing"]["stable"] = v.standing_stable;
    out.write("families.csv", os.str());
    out.write_json("spectra.json", spectra);
}

void cmd_simulate(const RunConfig& c, Output& out) {
    SimConfig sc = c.sim_config();
    sc.validate();
    SphereMesh mesh = build_mesh(c.refinement);
    Simulator sim(mesh, sc);
    sim.seed();
    if (!c.run.resume.empty()) sim.load_checkpoint(c.run.resume);
    const std::vector<int> probes = choose_probes(mesh, sc.probe_count);
    std::ostringstream probe_os, snap_os;
    probe_os << "t";
    for (std::size_t k = 0; k < probes.size(); ++k) probe_os << ",u_e_" << probes[k];
    for (std::size_t k = 0; k < probes.size(); ++k) probe_os << ",u_i_" << probes[k];
    probe_os << '\n';
    std::vector<double> times, mean_e;
    std::vector<Vec3> dip;
    fs::create_directories(out.dir());
    const std::string ckpt = (out.dir() / "checkpoint.bin").string();
    bool wrote_ckpt = false;
    auto record = [&](const Simulator& s) {
        probe_os << num(s.time());
        for (int j : probes) probe_os << ',' << num(s.u(0)(j));
        for (int j : probes) probe_os << ',' << num(s.u(1)(j));
        probe_os << '\n';
        double mu, sd;
        spatial_moments(mesh, s.u(0), mu, sd);
        times.push_back(s.time());
        mean_e.push_back(mu);
        dip.push_back(dipole(mesh, s.u(0)));
        if (sc.snapshot_every > 0 && s.steps() % sc.snapshot_every == 0) {
            snap_os << num(s.time()) << '\n';
            for (int j = 0; j < mesh.size(); ++j) {
                const Vec3& r = mesh.centroids[j];
                snap_os << num(r.x()) << ',' << num(r.y()) << ',' << num(r.z()) << ',' << num(s.u(0)(j)) << ','
                        << num(s.u(1)(j)) << '\n';
            }
        }
        if (c.run.checkpoint_every > 0 && s.steps() % c.run.checkpoint_every == 0) {
            s.save_checkpoint(ckpt);
            wrote_ckpt = true;
        }
    };
    record(sim);
    try {
        sim.run_until(sc.t_end, record);
    } catch (const InstabilityError&) {
        out.write("probes.csv", probe_os.str());
        throw;
    }
    out.write("probes.csv", probe_os.str());
    out.write("snapshots.csv", snap_os.str());
    if (wrote_ckpt) out.record_file("checkpoint.bin");

    // Diagnostics over the second half of the run.
    const std::size_t half = times.size() / 2;
    std::vector<double> th(times.begin() + half, times.end()), mh(mean_e.begin() + half, mean_e.end());
    std::vector<Vec3> dh(dip.begin() + half, dip.end());
    double mu, sd;
    spatial_moments(mesh, sim.u(0), mu, sd);
    json diag = {{"t_final", sim.time()},
                 {"steps", sim.steps()},
                 {"final_mean_e", mu},
                 {"final_std_e", sd},
                 {"period_of_mean_e", dominant_period(th, mh)}};
    json power = json::array();
    for (int l = 0; l <= 4; ++l) power.push_back(harmonic_power(mesh, sim.u(0), l));
    diag["harmonic_power_e"] = power;
    if (dh.size() >= 3) {
        try {
            RotationFit f = fit_rotation(th, dh);
            diag["rotation"] = {{"axis", {f.axis.x(), f.axis.y(), f.axis.z()}},
                                {"axis_angle_to_z", f.axis_angle_to_z},
                                {"mean_speed", f.mean_speed},
                                {"speed_spread", f.speed_spread},
                                {"amplitude_spread", f.amplitude_spread}};
        } catch (const std::domain_error&) {
            diag["rotation"] = nullptr;
        }
    }
    out.write_json("summary.json", diag);
}

const std::set<std::string> kCommands = {"mesh",      "laplace-test", "spectrum", "bifdiag",
                                         "hopf-point", "nfc",          "amplitude", "simulate"};

std::string timestamp() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Delayed neural fields on the sphere: spectra, normal forms, simulation"};
    std::string command, config_path, out_dir = "out";
    std::vector<std::string> overrides;
    int threads = 0;
    app.add_option("command", command, "mesh | laplace-test | spectrum | bifdiag | hopf-point | nfc | amplitude | simulate")
        ->required();
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--override", overrides, "key.path=value, repeatable")->take_all();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "OpenMP threads (0 = default)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: config: " << e.what() << '\n';
        return kConfig;
    }
    if (!kCommands.count(command)) {
        std::cerr << "error: config: unknown command '" << command << "'\n";
        return kConfig;
    }
    RunConfig cfg;
    try {
        cfg = config_path.empty() ? load_config("", overrides) : load_config_file(config_path, overrides);
        if (threads < 0) throw ConfigError("--threads must be >= 0");
    } catch (const ConfigError& e) {
        std::cerr << "error: config: " << e.what() << '\n';
        return kConfig;
    }
    set_threads(threads);
    Output out{fs::path(out_dir)};
    try {
        const QuadratureRule rule = cfg.run.quadrature_nodes == kDefaultQuadratureNodes
                                        ? default_rule()
                                        : angular_rule(cfg.run.quadrature_nodes);
        if (command == "mesh") cmd_mesh(cfg, out);
        else if (command == "laplace-test") cmd_laplace(cfg, out);
        else if (command == "spectrum") cmd_spectrum(cfg, out, rule);
        else if (command == "bifdiag") cmd_bifdiag(cfg, out, rule);
        else if (command == "hopf-point") cmd_hopf(cfg, out, rule);
        else if (command == "nfc") cmd_nfc(cfg, out, rule);
        else if (command == "amplitude") cmd_amplitude(cfg, out);
        else cmd_simulate(cfg, out);
    } catch (const ConfigError& e) {
        std::cerr << "error: config: " << e.what() << '\n';
        return kConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: config: " << e.what() << '\n';
        return kConfig;
    } catch (const InstabilityError& e) {
        std::cerr << "error: instability: " << e.what() << '\n';
        return kInstability;
    } catch (const std::exception& e) {
        std::cerr << "error: numerical: " << e.what() << '\n';
        return kNumerical;
    }
    json manifest = {{"command", command},
                     {"config", to_json(cfg)},
                     {"artifacts", out.artifacts()},
                     {"threads", max_threads()},
                     {"created", timestamp()}};
    out.write_json("manifest.json", manifest);
    std::cout << "ok " << command << ' ' << out.dir().string() << '\n';
    return kOk;
}
