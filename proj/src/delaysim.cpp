#include "nfsphere/delaysim.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "nfsphere/harmonics.hpp"

namespace nfs {

// ---- splines ---------------------------------------------------------------

double SplineBases::p3(double s) const {
    const double x = std::abs(s / dt);
    if (x >= 1.0) return 0.0;
    return 2 * x * x * x - 3 * x * x + 1;
}

double SplineBases::q3(double s) const {
    const double x = std::abs(s / dt);
    if (x >= 1.0) return 0.0;
    return s * (1 - x) * (1 - x);
}

double SplineBases::p30(double s) const {
    if (s < 0 || s >= dt) return 0.0;
    const double x = s / dt;
    return (1 - x) * (1 - x);
}

double SplineBases::p31(double s) const {
    if (s < -dt || s >= dt) return 0.0;
    if (s < 0) {
        const double x = s / dt;
        return 1 - x * x;
    }
    return p3(s);
}

double SplineBases::q31(double s) const {
    if (s < -dt || s >= dt) return 0.0;
    if (s < 0) return s * (1 + s / dt);
    return q3(s);
}

void SplineBases::weights(int base, double x, std::array<double, 2>& wp, std::array<double, 2>& wq) const {
    const double s0 = x * dt, s1 = (x - 1) * dt;
    if (base == 0) {
        wp = {p30(s0), p31(s1)};
        wq = {0.0, q31(s1)};
    } else {
        // p3/q3 vanish at |s| = dt, so evaluate the polynomials directly to
        // keep x = 1 (tau exactly on the next node) well defined.
        const double a = x, b = 1 - x;
        wp = {2 * a * a * a - 3 * a * a + 1, 2 * b * b * b - 3 * b * b + 1};
        wq = {s0 * b * b, s1 * a * a};
    }
}

double spline_eval(const SplineBases& b, double tau, const std::vector<double>& vals,
                   const std::vector<double>& ders) {
    const int k = static_cast<int>(vals.size()) - 1;
    if (tau < 0 || tau > k * b.dt * (1 + 1e-14) || static_cast<int>(ders.size()) != k + 1)
        throw std::out_of_range("spline_eval: delay outside the stored history");
    const double y = tau / b.dt;
    int base = static_cast<int>(std::floor(y));
    double x = y - base;
    if (base >= k) {
        base = k - 1;
        x = 1.0;
    }
    std::array<double, 2> wp, wq;
    b.weights(base, x, wp, wq);
    double v = wp[0] * vals[base] + wp[1] * vals[base + 1] - wq[1] * ders[base + 1];
    if (base > 0) v -= wq[0] * ders[base];
    return v;
}

// ---- delay matrices --------------------------------------------------------

int history_depth(const ModelParams& p, double dt_spline) {
    if (!(dt_spline > 0)) throw std::invalid_argument("spline step must be positive");
    return std::max(1, static_cast<int>(std::ceil(p.max_delay() / dt_spline)));
}

std::shared_ptr<const DelayStencil> build_stencil(const SphereMesh& mesh, const ModelParams& p, double dt_spline) {
    auto st = std::make_shared<DelayStencil>();
    const int m = mesh.size();
    st->m = m;
    st->dt = dt_spline;
    st->k = history_depth(p, dt_spline);
    st->base.resize(static_cast<std::size_t>(m) * m);
    st->frac.resize(static_cast<std::size_t>(m) * m);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < m; ++j) {
        for (int nu = 0; nu < m; ++nu) {
            const double s = std::clamp(mesh.centroids[j].dot(mesh.centroids[nu]), -1.0, 1.0);
            const double y = delay(p, s) / dt_spline;
            int b = static_cast<int>(std::floor(y));
            double x = y - b;
            if (b >= st->k) {
                b = st->k - 1;
                x = 1.0;
            }
            const std::size_t id = static_cast<std::size_t>(j) * m + nu;
            st->base[id] = b;
            st->frac[id] = x;
        }
    }
    return st;
}

namespace {
DelayMatrices kernel_for(const SphereMesh& mesh, const ModelParams& p, int block,
                         std::shared_ptr<const DelayStencil> st) {
    if (block < 0 || block > 3) throw std::invalid_argument("block index must be 0..3");
    DelayMatrices d;
    d.block = block;
    d.stencil = std::move(st);
    const int m = mesh.size();
    d.weight.resize(static_cast<std::size_t>(m) * m);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < m; ++j)
        for (int nu = 0; nu < m; ++nu) {
            const double s = std::clamp(mesh.centroids[j].dot(mesh.centroids[nu]), -1.0, 1.0);
            d.weight[static_cast<std::size_t>(j) * m + nu] =
                connectivity(p.eta[block], p.sigma[block], s) * mesh.areas[nu];
        }
    return d;
}
}  // namespace

DelayMatrices assemble_PQ(const SphereMesh& mesh, const ModelParams& p, int block, double dt_spline) {
    return kernel_for(mesh, p, block, build_stencil(mesh, p, dt_spline));
}

SpMat DelayMatrices::P() const {
    const auto& st = *stencil;
    const int m = st.m;
    SplineBases sb{st.dt};
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(2 * static_cast<std::size_t>(m) * m);
    for (int j = 0; j < m; ++j)
        for (int nu = 0; nu < m; ++nu) {
            const std::size_t id = static_cast<std::size_t>(j) * m + nu;
            std::array<double, 2> wp, wq;
            sb.weights(st.base[id], st.frac[id], wp, wq);
            t.emplace_back(j, st.base[id] * m + nu, weight[id] * wp[0]);
            t.emplace_back(j, (st.base[id] + 1) * m + nu, weight[id] * wp[1]);
        }
    SpMat P(m, m * (st.k + 1));
    P.setFromTriplets(t.begin(), t.end());
    return P;
}

SpMat DelayMatrices::Q() const {
    const auto& st = *stencil;
    const int m = st.m;
    SplineBases sb{st.dt};
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(2 * static_cast<std::size_t>(m) * m);
    for (int j = 0; j < m; ++j)
        for (int nu = 0; nu < m; ++nu) {
            const std::size_t id = static_cast<std::size_t>(j) * m + nu;
            std::array<double, 2> wp, wq;
            const int b = st.base[id];
            sb.weights(b, st.frac[id], wp, wq);
            if (b > 0) t.emplace_back(j, (b - 1) * m + nu, weight[id] * wq[0]);
            t.emplace_back(j, b * m + nu, weight[id] * wq[1]);
        }
    SpMat Q(m, m * st.k);
    Q.setFromTriplets(t.begin(), t.end());
    return Q;
}

DelayOperator build_delay_operator(const SphereMesh& mesh, const ModelParams& p, double dt_spline,
                                   bool force_general) {
    DelayOperator op;
    auto st = build_stencil(mesh, p, dt_spline);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const int block = 2 * a + b;
            int found = -1;
            if (!force_general)
                for (std::size_t q = 0; q < op.kernels.size(); ++q) {
                    const int o = op.kernels[q].block;
                    if (p.eta[o] == p.eta[block] && p.sigma[o] == p.sigma[block]) found = static_cast<int>(q);
                }
            if (found < 0) {
                op.kernels.push_back(kernel_for(mesh, p, block, st));
                found = static_cast<int>(op.kernels.size()) - 1;
            }
            op.kernel_of[a][b] = found;
        }
    op.presynaptic = op.kernel_of[0][0] == op.kernel_of[1][0] && op.kernel_of[0][1] == op.kernel_of[1][1];
    return op;
}

// ---- history ring ----------------------------------------------------------

HistoryBuffer::HistoryBuffer(int m, int depth_steps) : m_(m), depth_(depth_steps) {
    for (auto& d : data_) d.assign(static_cast<std::size_t>(m) * (depth_steps + 1), 0.0);
}

int HistoryBuffer::slot(int pos) const {
    if (pos < 0 || pos > depth_) throw std::out_of_range("history position outside the ring");
    return (head_ + pos) % (depth_ + 1);
}

void HistoryBuffer::push(const Eigen::VectorXd& v_e, const Eigen::VectorXd& v_i) {
    head_ = (head_ + depth_) % (depth_ + 1);
    const std::size_t off = static_cast<std::size_t>(head_) * m_;
    std::copy(v_e.data(), v_e.data() + m_, data_[0].begin() + off);
    std::copy(v_i.data(), v_i.data() + m_, data_[1].begin() + off);
    std::fill(data_[2].begin() + off, data_[2].begin() + off + m_, 0.0);
    std::fill(data_[3].begin() + off, data_[3].begin() + off + m_, 0.0);
}

double* HistoryBuffer::value(int pop, int pos) { return data_[pop].data() + static_cast<std::size_t>(slot(pos)) * m_; }
const double* HistoryBuffer::value(int pop, int pos) const {
    return data_[pop].data() + static_cast<std::size_t>(slot(pos)) * m_;
}
double* HistoryBuffer::deriv(int pop, int pos) { return data_[2 + pop].data() + static_cast<std::size_t>(slot(pos)) * m_; }
const double* HistoryBuffer::deriv(int pop, int pos) const {
    return data_[2 + pop].data() + static_cast<std::size_t>(slot(pos)) * m_;
}

void apply_delay(const DelayOperator& op, const HistoryBuffer& hist, int ratio, Eigen::VectorXd& out_e,
                 Eigen::VectorXd& out_i, Exec exec) {
    const DelayStencil& st = *op.kernels.front().stencil;
    const int m = st.m;
    if (hist.m() != m || hist.depth() < st.k * ratio) throw std::invalid_argument("history too short for stencil");
    out_e.resize(m);
    out_i.resize(m);
    // Frame pointers by spline index, resolved once per call.
    std::vector<const double*> V[2], D[2];
    for (int pop = 0; pop < 2; ++pop) {
        V[pop].resize(st.k + 1);
        D[pop].resize(st.k + 1);
        for (int q = 0; q <= st.k; ++q) {
            V[pop][q] = hist.value(pop, q * ratio);
            D[pop][q] = hist.deriv(pop, q * ratio);
        }
    }
    const SplineBases sb{st.dt};
    const double* K[2][2];
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) K[a][b] = op.kernels[op.kernel_of[a][b]].weight.data();
    const bool pre = op.presynaptic;
    auto row = [&](int j) {
        double acc_e = 0.0, acc_i = 0.0;
        const std::size_t r = static_cast<std::size_t>(j) * m;
        for (int nu = 0; nu < m; ++nu) {
            const int b = st.base[r + nu];
            std::array<double, 2> wp, wq;
            sb.weights(b, st.frac[r + nu], wp, wq);
            double v[2];
            for (int pop = 0; pop < 2; ++pop) {
                double s = wp[0] * V[pop][b][nu] + wp[1] * V[pop][b + 1][nu] - wq[1] * D[pop][b + 1][nu];
                if (b > 0) s -= wq[0] * D[pop][b][nu];
                v[pop] = s;
            }
            acc_e += K[0][0][r + nu] * v[0] + K[0][1][r + nu] * v[1];
            if (!pre) acc_i += K[1][0][r + nu] * v[0] + K[1][1][r + nu] * v[1];
        }
        out_e(j) = acc_e;
        out_i(j) = pre ? acc_e : acc_i;
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (int j = 0; j < m; ++j) row(j);
    } else {
        for (int j = 0; j < m; ++j) row(j);
    }
}

// ---- configuration and history ---------------------------------------------

void SimConfig::validate() const {
    params.validate();
    if (refinement < 0 || refinement > kMaxRefinement) throw std::invalid_argument("mesh refinement must be in 0..7");
    if (!(dt > 0)) throw std::invalid_argument("dt must be positive");
    if (spline_ratio < 1) throw std::invalid_argument("spline_ratio must be a positive integer");
    if (!(t_end > 0)) throw std::invalid_argument("t_end must be positive");
    if (snapshot_every < 0) throw std::invalid_argument("snapshot_every must be nonnegative");
    if (probe_count < 0) throw std::invalid_argument("probe_count must be nonnegative");
    for (const auto& h : history) {
        if (h.pop < -1 || h.pop > 1) throw std::invalid_argument("history mode population must be -1, 0 or 1");
        if (h.l < 0 || std::abs(h.m) > h.l) throw std::invalid_argument("history mode needs |m| <= l");
    }
}

void history_value(const std::vector<HistoryMode>& modes, int pop, const Vec3& r, double t, double& u,
                   double& udot) {
    u = 0.0;
    udot = 0.0;
    for (const auto& h : modes) {
        if (h.pop != -1 && h.pop != pop) continue;
        const cdouble Y = sph_harm_xyz(h.l, h.m, r.x(), r.y(), r.z());
        const cdouble e = h.amplitude * std::polar(1.0, h.omega * t);
        const cdouble de = cdouble(0.0, h.omega) * e;
        if (h.kind == ModeKind::Field) {
            u += (e * Y).real();
            udot += (de * Y).real();
        } else {
            u += e.real() * Y.real();
            udot += de.real() * Y.real();
        }
    }
}

std::vector<int> choose_probes(const SphereMesh& mesh, int count) {
    std::vector<int> probes;
    const int m = mesh.size();
    if (count <= 0 || m == 0) return probes;
    std::vector<double> dist(m, std::numeric_limits<double>::infinity());
    int next = 0;
    for (int c = 0; c < std::min(count, m); ++c) {
        probes.push_back(next);
        int best = -1;
        double bd = -1.0;
        for (int j = 0; j < m; ++j) {
            dist[j] = std::min(dist[j], (mesh.centroids[j] - mesh.centroids[next]).norm());
            if (dist[j] > bd) {
                bd = dist[j];
                best = j;
            }
        }
        next = best;
    }
    return probes;
}

// ---- stepper ---------------------------------------------------------------

Simulator::Simulator(const SphereMesh& mesh, const SimConfig& cfg) : mesh_(mesh), cfg_(cfg) {
    cfg_.validate();
    if (mesh.refinement != cfg.refinement) throw std::invalid_argument("mesh refinement does not match config");
    lap_ = discrete_laplacian(mesh);
    op_ = build_delay_operator(mesh, cfg_.params, cfg_.dt_spline(), cfg_.force_general_kernels);
    const int m = mesh.size();
    hist_ = HistoryBuffer(m, depth_steps());
    Eigen::SparseMatrix<double> I(m, m), D = lap_.matrix;
    I.setIdentity();
    for (int pop = 0; pop < 2; ++pop) {
        const double d = cfg_.params.diffusion(pop);
        has_diffusion_[pop] = d > 0;
        if (!has_diffusion_[pop]) continue;
        Eigen::SparseMatrix<double> M = I - (9.0 / 16.0) * d * cfg_.dt * D;
        mcnab_[pop].compute(M);
        Eigen::SparseMatrix<double> E = I - d * cfg_.dt * D;
        euler_[pop].compute(E);
        if (mcnab_[pop].info() != Eigen::Success || euler_[pop].info() != Eigen::Success)
            throw std::runtime_error("implicit diffusion matrix factorisation failed");
    }
    for (int pop = 0; pop < 2; ++pop) {
        u_[pop] = Eigen::VectorXd::Zero(m);
        u_prev_[pop] = Eigen::VectorXd::Zero(m);
        F_prev_[pop] = Eigen::VectorXd::Zero(m);
    }
}

void Simulator::seed() {
    const int m = mesh_.size();
    const ModelParams& p = cfg_.params;
    hist_.set_head(0);
    for (int pos = 0; pos <= hist_.depth(); ++pos) {
        const double t = -pos * cfg_.dt;
        for (int pop = 0; pop < 2; ++pop) {
            double* v = hist_.value(pop, pos);
            double* dv = hist_.deriv(pop, pos);
            for (int j = 0; j < m; ++j) {
                double u, ud;
                history_value(cfg_.history, pop, mesh_.centroids[j], t, u, ud);
                v[j] = sigmoid_deriv(p, 0, u);
                dv[j] = sigmoid_deriv(p, 1, u) * ud;
                if (pos == 0) u_[pop](j) = u;
            }
        }
    }
    steps_ = 0;
    t0_ = 0.0;
    check_bounds();
}

void Simulator::rhs_explicit(Eigen::VectorXd* F) {
    Eigen::VectorXd syn_e, syn_i;
    apply_delay(op_, hist_, cfg_.spline_ratio, syn_e, syn_i, exec);
    F[0] = -cfg_.params.alpha_e * u_[0] + syn_e;
    F[1] = -cfg_.params.alpha_i * u_[1] + syn_i;
}

void Simulator::step() {
    const ModelParams& p = cfg_.params;
    const double dt = cfg_.dt;
    const int m = mesh_.size();
    Eigen::VectorXd F[2];
    rhs_explicit(F);
    Eigen::VectorXd Du(m);
    for (int pop = 0; pop < 2; ++pop) {
        const double d = p.diffusion(pop);
        if (has_diffusion_[pop]) spmv(lap_.matrix, u_[pop], Du, exec);
        // Complete frame 0 with the derivative from the full right-hand side.
        // At the initial time the analytic history derivative is kept.
        if (steps_ > 0) {
            double* dv = hist_.deriv(pop, 0);
            for (int j = 0; j < m; ++j) {
                const double ud = (has_diffusion_[pop] ? d * Du(j) : 0.0) + F[pop](j);
                dv[j] = sigmoid_deriv(p, 1, u_[pop](j)) * ud;
            }
        }
        Eigen::VectorXd next;
        if (steps_ == 0) {
            Eigen::VectorXd rhs = u_[pop] + dt * F[pop];
            next = has_diffusion_[pop] ? Eigen::VectorXd(euler_[pop].solve(rhs)) : rhs;
        } else {
            Eigen::VectorXd rhs = u_[pop] + dt * (1.5 * F[pop] - 0.5 * F_prev_[pop]);
            if (has_diffusion_[pop]) {
                Eigen::VectorXd w = 0.375 * u_[pop] + 0.0625 * u_prev_[pop], Dw(m);
                spmv(lap_.matrix, w, Dw, exec);
                rhs += d * dt * Dw;
                next = mcnab_[pop].solve(rhs);
            } else {
                next = rhs;
            }
        }
        u_prev_[pop] = u_[pop];
        F_prev_[pop] = F[pop];
        u_[pop] = std::move(next);
    }
    ++steps_;
    Eigen::VectorXd v[2];
    for (int pop = 0; pop < 2; ++pop) v[pop] = u_[pop].unaryExpr([&](double x) { return sigmoid_deriv(p, 0, x); });
    hist_.push(v[0], v[1]);
    check_bounds();
}

void Simulator::check_bounds() const {
    for (int pop = 0; pop < 2; ++pop) {
        const double s = u_[pop].cwiseAbs().maxCoeff();
        if (!std::isfinite(s) || s > cfg_.blowup)
            throw InstabilityError("instability: |u| = " + std::to_string(s) + " at t = " + std::to_string(time()));
    }
}

void Simulator::run_until(double t_end, const std::function<void(const Simulator&)>& observer) {
    const long target = static_cast<long>(std::llround((t_end - t0_) / cfg_.dt));
    while (steps_ < target) {
        step();
        if (observer) observer(*this);
    }
}

namespace {
constexpr char kMagic[6] = {'N', 'F', 'S', 'P', 'H', '1'};

template <class T>
void put(std::ostream& os, const T& x) {
    os.write(reinterpret_cast<const char*>(&x), sizeof(T));
}
template <class T>
void get(std::istream& is, T& x) {
    is.read(reinterpret_cast<char*>(&x), sizeof(T));
    if (!is) throw std::runtime_error("checkpoint truncated");
}
void put_vec(std::ostream& os, const double* d, std::size_t n) {
    os.write(reinterpret_cast<const char*>(d), static_cast<std::streamsize>(n * sizeof(double)));
}
void get_vec(std::istream& is, double* d, std::size_t n) {
    is.read(reinterpret_cast<char*>(d), static_cast<std::streamsize>(n * sizeof(double)));
    if (!is) throw std::runtime_error("checkpoint truncated");
}
}  // namespace

void Simulator::save_checkpoint(const std::string& path) const {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open checkpoint for writing: " + path);
        os.write(kMagic, 6);
        const std::int32_t m = mesh_.size(), depth = hist_.depth(), ratio = cfg_.spline_ratio, head = hist_.head();
        const std::int64_t steps = steps_;
        put(os, m);
        put(os, depth);
        put(os, ratio);
        put(os, head);
        put(os, steps);
        put(os, t0_);
        put(os, cfg_.dt);
        for (int pop = 0; pop < 2; ++pop) {
            put_vec(os, u_[pop].data(), m);
            put_vec(os, u_prev_[pop].data(), m);
            put_vec(os, F_prev_[pop].data(), m);
        }
        for (int w = 0; w < 4; ++w) put_vec(os, hist_.raw(w).data(), hist_.raw(w).size());
        if (!os) throw std::runtime_error("checkpoint write failed");
    }
    std::rename(tmp.c_str(), path.c_str());
}

void Simulator::load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open checkpoint: " + path);
    char magic[6];
    is.read(magic, 6);
    if (!is || std::memcmp(magic, kMagic, 6) != 0) throw std::runtime_error("not a checkpoint file (bad header)");
    std::int32_t m, depth, ratio, head;
    std::int64_t steps;
    double t0, dt;
    get(is, m);
    get(is, depth);
    get(is, ratio);
    get(is, head);
    get(is, steps);
    get(is, t0);
    get(is, dt);
    if (m != mesh_.size() || depth != hist_.depth() || ratio != cfg_.spline_ratio || dt != cfg_.dt)
        throw std::runtime_error("checkpoint does not match the simulation setup");
    for (int pop = 0; pop < 2; ++pop) {
        get_vec(is, u_[pop].data(), m);
        get_vec(is, u_prev_[pop].data(), m);
        get_vec(is, F_prev_[pop].data(), m);
    }
    for (int w = 0; w < 4; ++w) get_vec(is, hist_.raw(w).data(), hist_.raw(w).size());
    hist_.set_head(head);
    steps_ = steps;
    t0_ = t0;
}

// ---- diagnostics -----------------------------------------------------------

Vec3 dipole(const SphereMesh& mesh, const Eigen::VectorXd& u) {
    Vec3 p = Vec3::Zero();
    for (int j = 0; j < mesh.size(); ++j) p += mesh.areas[j] * u(j) * mesh.centroids[j];
    return p;
}

double harmonic_power(const SphereMesh& mesh, const Eigen::VectorXd& u, int l) {
    double s = 0.0;
    for (int m = -l; m <= l; ++m) {
        cdouble c = 0.0;
        for (int j = 0; j < mesh.size(); ++j) {
            const Vec3& r = mesh.centroids[j];
            c += mesh.areas[j] * u(j) * std::conj(sph_harm_xyz(l, m, r.x(), r.y(), r.z()));
        }
        s += std::norm(c);
    }
    return s;
}

void spatial_moments(const SphereMesh& mesh, const Eigen::VectorXd& u, double& mean, double& stddev) {
    double w = 0.0, s = 0.0;
    for (int j = 0; j < mesh.size(); ++j) {
        w += mesh.areas[j];
        s += mesh.areas[j] * u(j);
    }
    mean = s / w;
    double v = 0.0;
    for (int j = 0; j < mesh.size(); ++j) v += mesh.areas[j] * (u(j) - mean) * (u(j) - mean);
    stddev = std::sqrt(v / w);
}

RotationFit fit_rotation(const std::vector<double>& t, const std::vector<Vec3>& p) {
    RotationFit f;
    const std::size_t n = t.size();
    if (n < 3 || p.size() != n) throw std::invalid_argument("rotation fit needs at least 3 matching samples");
    std::vector<Vec3> dp(n - 2);
    Vec3 L = Vec3::Zero();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        dp[i - 1] = (p[i + 1] - p[i - 1]) / (t[i + 1] - t[i - 1]);
        L += p[i].cross(dp[i - 1]);
    }
    if (L.norm() == 0.0) throw std::domain_error("no rotation detected");
    f.axis = L.normalized();
    f.axis_angle_to_z = std::acos(std::min(1.0, std::abs(f.axis.z())));
    double smin = 1e300, smax = -1e300, ssum = 0.0, amin = 1e300, amax = -1e300, asum = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const Vec3 q = p[i] - p[i].dot(f.axis) * f.axis;
        const double r2 = q.squaredNorm();
        const double speed = r2 > 0 ? q.cross(dp[i - 1]).dot(f.axis) / r2 : 0.0;
        const double amp = std::sqrt(r2);
        smin = std::min(smin, speed);
        smax = std::max(smax, speed);
        ssum += speed;
        amin = std::min(amin, amp);
        amax = std::max(amax, amp);
        asum += amp;
    }
    f.samples = static_cast<int>(n - 2);
    f.mean_speed = ssum / f.samples;
    f.speed_spread = (smax - smin) / std::abs(f.mean_speed);
    f.amplitude_spread = (amax - amin) / (asum / f.samples);
    return f;
}

double dominant_period(const std::vector<double>& t, const std::vector<double>& x) {
    if (t.size() != x.size() || t.size() < 3) return 0.0;
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    std::vector<double> up;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double a = x[i - 1] - mean, b = x[i] - mean;
        if (a < 0 && b >= 0) up.push_back(t[i - 1] + (t[i] - t[i - 1]) * (-a) / (b - a));
    }
    if (up.size() < 2) return 0.0;
    return (up.back() - up.front()) / static_cast<double>(up.size() - 1);
}

SimResult simulate(const SphereMesh& mesh, const SimConfig& cfg,
                   const std::function<void(const Simulator&)>& observer) {
    Simulator sim(mesh, cfg);
    sim.seed();
    SimResult res;
    res.probes = choose_probes(mesh, cfg.probe_count);
    auto record = [&](const Simulator& s) {
        res.times.push_back(s.time());
        std::vector<double> pe, pi;
        for (int j : res.probes) {
            pe.push_back(s.u(0)(j));
            pi.push_back(s.u(1)(j));
        }
        res.probe_e.push_back(std::move(pe));
        res.probe_i.push_back(std::move(pi));
        if (cfg.snapshot_every > 0 && s.steps() % cfg.snapshot_every == 0)
            res.snapshots.push_back({s.time(), s.u(0), s.u(1)});
        if (observer) observer(s);
    };
    record(sim);
    sim.run_until(cfg.t_end, record);
    return res;
}

}  // namespace nfs
