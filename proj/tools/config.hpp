// Run configuration for the nfsphere command line: JSON with sections
// model / mesh / run, dotted-path overrides, strict key checking.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nfsphere/bifurcation.hpp"
#include "nfsphere/delaysim.hpp"

namespace nfs::cli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Grid {
    double lo = 0.0;
    double hi = 1.0;
    int count = 2;
    std::vector<double> values() const;
    bool operator==(const Grid&) const = default;
};

struct RunSection {
    int l = 0;
    int l_max = 4;
    double eta_e = 0.0;
    double omega = 0.0;  // > 0 selects the Hopf point closest to this frequency
    double omega_lo = 0.05;
    double omega_hi = 3.0;
    int scan = 400;
    int quadrature_nodes = kDefaultQuadratureNodes;
    bool export_terms = false;

    Region region;
    int density = 12;

    Window window;
    Grid omega_grid{0.01, 3.0, 300};
    Grid eta_e_grid{0.0, 8.0, 161};

    std::vector<int> refinements{2, 3, 4, 5};
    std::vector<int> degrees{1, 2, 3};
    int order = 0;

    cdouble mu{0.1, 0.0};
    cdouble g11{-0.81, 0.0};
    cdouble g12{-0.405, 0.0};
    int family_points = 41;

    double dt = 0.05;
    int spline_ratio = 1;
    double t_end = 100.0;
    std::vector<HistoryMode> history;
    int snapshot_every = 20;
    int probe_count = 8;
    bool force_general_kernels = false;
    long checkpoint_every = 0;
    std::string resume;

    unsigned seed = 1;
};

struct RunConfig {
    ModelParams model;
    int refinement = 3;
    RunSection run;

    SimConfig sim_config() const;
};

// Parse text, apply overrides ("a.b.c=value"; value parsed as JSON, falling
// back to a plain string), then decode strictly.
RunConfig load_config(const std::string& text, const std::vector<std::string>& overrides = {});
RunConfig load_config_file(const std::string& path, const std::vector<std::string>& overrides = {});

nlohmann::json to_json(const RunConfig& c);
RunConfig from_json(const nlohmann::json& j);

void apply_override(nlohmann::json& j, const std::string& assignment);

bool operator==(const RunConfig& a, const RunConfig& b);

}  // namespace nfs::cli
