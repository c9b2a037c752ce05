#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace nfs::cli {

using nlohmann::json;

std::vector<double> Grid::values() const {
    if (count < 1) throw ConfigError("grid count must be positive");
    if (count == 1) return {lo};
    std::vector<double> v(count);
    for (int k = 0; k < count; ++k) v[k] = lo + (hi - lo) * k / (count - 1);
    return v;
}

SimConfig RunConfig::sim_config() const {
    SimConfig s;
    s.params = model;
    s.refinement = refinement;
    s.dt = run.dt;
    s.spline_ratio = run.spline_ratio;
    s.t_end = run.t_end;
    s.history = run.history;
    s.snapshot_every = run.snapshot_every;
    s.probe_count = run.probe_count;
    s.force_general_kernels = run.force_general_kernels;
    return s;
}

namespace {

json cplx(cdouble z) { return json::array({z.real(), z.imag()}); }

cdouble cplx(const json& j, const std::string& key) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError(key + ": expected [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

// Strict reader: every key must be consumed.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
    }
    ~Reader() noexcept(false) {
        if (std::uncaught_exceptions()) return;
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError("unknown key " + path_ + "." + it.key());
    }
    const json* find(const std::string& k) {
        seen_.insert(k);
        auto it = j_.find(k);
        return it == j_.end() ? nullptr : &*it;
    }
    template <class T>
    void read(const std::string& k, T& out) {
        if (const json* v = find(k)) {
            try {
                if constexpr (std::is_same_v<T, double>) {
                    if (!v->is_number()) throw ConfigError("");
                } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
                    if (!v->is_number_integer()) throw ConfigError("");
                } else if constexpr (std::is_same_v<T, bool>) {
                    if (!v->is_boolean()) throw ConfigError("");
                }
                out = v->get<T>();
            } catch (const std::exception&) {
                throw ConfigError(path_ + "." + k + ": wrong type");
            }
        }
    }
    void read(const std::string& k, cdouble& out) {
        if (const json* v = find(k)) out = cplx(*v, path_ + "." + k);
    }
    std::string child(const std::string& k) const { return path_ + "." + k; }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void read_grid(Reader& r, const std::string& k, Grid& g) {
    if (const json* v = r.find(k)) {
        Reader q(*v, r.child(k));
        q.read("lo", g.lo);
        q.read("hi", g.hi);
        q.read("count", g.count);
    }
}

json grid_json(const Grid& g) { return {{"lo", g.lo}, {"hi", g.hi}, {"count", g.count}}; }

const char* kind_name(ModeKind k) { return k == ModeKind::Field ? "field" : "temporal"; }

}  // namespace

json to_json(const RunConfig& c) {
    const ModelParams& m = c.model;
    const RunSection& r = c.run;
    json hist = json::array();
    for (const auto& h : r.history)
        hist.push_back({{"pop", h.pop}, {"l", h.l}, {"m", h.m}, {"amplitude", cplx(h.amplitude)},
                        {"omega", h.omega}, {"kind", kind_name(h.kind)}});
    json j;
    j["model"] = {{"alpha_e", m.alpha_e}, {"alpha_i", m.alpha_i}, {"d_e", m.d_e},   {"d_i", m.d_i},
                  {"eta", m.eta},         {"sigma", m.sigma},     {"tau0", m.tau0}, {"c", m.c},
                  {"gamma", m.gamma},     {"delta", m.delta}};
    j["mesh"] = {{"refinement", c.refinement}};
    j["run"] = {
        {"l", r.l},
        {"l_max", r.l_max},
        {"eta_e", r.eta_e},
        {"omega", r.omega},
        {"omega_lo", r.omega_lo},
        {"omega_hi", r.omega_hi},
        {"scan", r.scan},
        {"quadrature_nodes", r.quadrature_nodes},
        {"export_terms", r.export_terms},
        {"region", {{"re_min", r.region.re_min}, {"re_max", r.region.re_max}, {"im_min", r.region.im_min},
                    {"im_max", r.region.im_max}}},
        {"density", r.density},
        {"window", {{"eta_e_min", r.window.eta_e_min}, {"eta_e_max", r.window.eta_e_max},
                    {"eta_i_min", r.window.eta_i_min}, {"eta_i_max", r.window.eta_i_max}}},
        {"omega_grid", grid_json(r.omega_grid)},
        {"eta_e_grid", grid_json(r.eta_e_grid)},
        {"refinements", r.refinements},
        {"degrees", r.degrees},
        {"order", r.order},
        {"mu", cplx(r.mu)},
        {"g11", cplx(r.g11)},
        {"g12", cplx(r.g12)},
        {"family_points", r.family_points},
        {"dt", r.dt},
        {"spline_ratio", r.spline_ratio},
        {"t_end", r.t_end},
        {"history", hist},
        {"snapshot_every", r.snapshot_every},
        {"probe_count", r.probe_count},
        {"force_general_kernels", r.force_general_kernels},
        {"checkpoint_every", r.checkpoint_every},
        {"resume", r.resume},
        {"seed", r.seed},
    };
    return j;
}

RunConfig from_json(const json& j) {
    RunConfig c;
    Reader top(j, "config");
    if (const json* mj = top.find("model")) {
        Reader r(*mj, "model");
        ModelParams& m = c.model;
        r.read("alpha_e", m.alpha_e);
        r.read("alpha_i", m.alpha_i);
        r.read("d_e", m.d_e);
        r.read("d_i", m.d_i);
        r.read("tau0", m.tau0);
        r.read("c", m.c);
        r.read("gamma", m.gamma);
        r.read("delta", m.delta);
        for (const char* key : {"eta", "sigma"}) {
            if (const json* v = r.find(key)) {
                if (!v->is_array() || v->size() != 4) throw ConfigError(std::string("model.") + key + ": expected 4 numbers");
                auto& dst = std::string(key) == "eta" ? m.eta : m.sigma;
                for (int b = 0; b < 4; ++b) {
                    if (!(*v)[b].is_number()) throw ConfigError(std::string("model.") + key + ": expected numbers");
                    dst[b] = (*v)[b].get<double>();
                }
            }
        }
        try {
            m.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("model: ") + e.what());
        }
    }
    if (const json* mj = top.find("mesh")) {
        Reader r(*mj, "mesh");
        r.read("refinement", c.refinement);
        if (c.refinement < 0 || c.refinement > kMaxRefinement) throw ConfigError("mesh.refinement must be in 0..7");
    }
    if (const json* rj = top.find("run")) {
        Reader r(*rj, "run");
        RunSection& s = c.run;
        r.read("l", s.l);
        r.read("l_max", s.l_max);
        r.read("eta_e", s.eta_e);
        r.read("omega", s.omega);
        r.read("omega_lo", s.omega_lo);
        r.read("omega_hi", s.omega_hi);
        r.read("scan", s.scan);
        r.read("quadrature_nodes", s.quadrature_nodes);
        r.read("export_terms", s.export_terms);
        if (const json* v = r.find("region")) {
            Reader q(*v, "run.region");
            q.read("re_min", s.region.re_min);
            q.read("re_max", s.region.re_max);
            q.read("im_min", s.region.im_min);
            q.read("im_max", s.region.im_max);
        }
        r.read("density", s.density);
        if (const json* v = r.find("window")) {
            Reader q(*v, "run.window");
            q.read("eta_e_min", s.window.eta_e_min);
            q.read("eta_e_max", s.window.eta_e_max);
            q.read("eta_i_min", s.window.eta_i_min);
            q.read("eta_i_max", s.window.eta_i_max);
        }
        read_grid(r, "omega_grid", s.omega_grid);
        read_grid(r, "eta_e_grid", s.eta_e_grid);
        r.read("refinements", s.refinements);
        r.read("degrees", s.degrees);
        r.read("order", s.order);
        r.read("mu", s.mu);
        r.read("g11", s.g11);
        r.read("g12", s.g12);
        r.read("family_points", s.family_points);
        r.read("dt", s.dt);
        r.read("spline_ratio", s.spline_ratio);
        r.read("t_end", s.t_end);
        if (const json* v = r.find("history")) {
            if (!v->is_array()) throw ConfigError("run.history: expected a list");
            s.history.clear();
            for (std::size_t i = 0; i < v->size(); ++i) {
                Reader q((*v)[i], "run.history[" + std::to_string(i) + "]");
                HistoryMode h;
                q.read("pop", h.pop);
                q.read("l", h.l);
                q.read("m", h.m);
                q.read("amplitude", h.amplitude);
                q.read("omega", h.omega);
                std::string kind = "field";
                q.read("kind", kind);
                if (kind == "field") h.kind = ModeKind::Field;
                else if (kind == "temporal") h.kind = ModeKind::Temporal;
                else throw ConfigError("run.history kind must be field or temporal");
                s.history.push_back(h);
            }
        }
        r.read("snapshot_every", s.snapshot_every);
        r.read("probe_count", s.probe_count);
        r.read("force_general_kernels", s.force_general_kernels);
        r.read("checkpoint_every", s.checkpoint_every);
        r.read("resume", s.resume);
        r.read("seed", s.seed);
        if (s.quadrature_nodes < 2) throw ConfigError("run.quadrature_nodes must be >= 2");
        if (s.l < 0 || s.l_max < 0) throw ConfigError("run.l and run.l_max must be nonnegative");
    }
    return c;
}

void apply_override(json& j, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override must look like key.path=value: " + assignment);
    const std::string path = assignment.substr(0, eq), text = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error&) {
        value = text;
    }
    json* node = &j;
    std::stringstream ss(path);
    std::string part;
    std::vector<std::string> parts;
    // "a.b[2].c" and "a.b.2.c" both address element 2 of array b.
    while (std::getline(ss, part, '.')) {
        std::size_t open = part.find('[');
        parts.push_back(part.substr(0, open));
        while (open != std::string::npos) {
            const std::size_t close = part.find(']', open);
            if (close == std::string::npos) throw ConfigError("unbalanced bracket in override: " + path);
            parts.push_back(part.substr(open + 1, close - open - 1));
            open = part.find('[', close);
            if (open == std::string::npos && close + 1 != part.size())
                throw ConfigError("unexpected text after index in override: " + path);
        }
        if (parts.back().empty()) throw ConfigError("empty key in override: " + path);
    }
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const std::string& p = parts[i];
        const bool last = i + 1 == parts.size();
        if (node->is_array()) {
            std::size_t pos = 0;
            std::size_t idx = 0;
            try {
                idx = std::stoul(p, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != p.size() || idx >= node->size()) throw ConfigError("bad array index in override: " + path);
            node = &(*node)[idx];
        } else {
            if (!node->is_object()) *node = json::object();
            node = &(*node)[p];
        }
        if (last) *node = value;
    }
}

RunConfig load_config(const std::string& text, const std::vector<std::string>& overrides) {
    json j;
    try {
        j = text.empty() ? json::object() : json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    for (const auto& o : overrides) apply_override(j, o);
    return from_json(j);
}

RunConfig load_config_file(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_config(ss.str(), overrides);
}

bool operator==(const RunConfig& a, const RunConfig& b) { return to_json(a) == to_json(b); }

}  // namespace nfs::cli
