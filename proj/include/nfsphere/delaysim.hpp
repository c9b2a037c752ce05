// Time integration of the delayed neural field on a sphere mesh: Hermite
// spline history, the delay operator (P/Q), and the MCNAB IMEX stepper.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "nfsphere/kernels.hpp"
#include "nfsphere/mesh.hpp"
#include "nfsphere/parallel.hpp"

namespace nfs {

struct InstabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Spline bases on a grid of spacing dt. Arguments are offsets s measured
// backwards in time from the frame the basis belongs to.
struct SplineBases {
    double dt = 0.05;

    double p3(double s) const;
    double q3(double s) const;
    double p30(double s) const;  // on [0, dt)
    double p31(double s) const;  // on [-dt, 0) quadratic, cubic p3 on [0, dt)
    double q31(double s) const;  // on [-dt, 0) quadratic, cubic q3 on [0, dt)

    // Weights for a delay tau = (base + x) dt: value = wp[0] v_base +
    // wp[1] v_{base+1} - wq[0] vdot_base - wq[1] vdot_{base+1}.
    // For base = 0 the derivative at frame 0 is not used (wq[0] = 0).
    void weights(int base, double x, std::array<double, 2>& wp, std::array<double, 2>& wq) const;
};

// u(t - tau) from frames at t - l dt, l = 0..k. vals[l], ders[l]; ders[0]
// is ignored.
double spline_eval(const SplineBases& b, double tau, const std::vector<double>& vals,
                   const std::vector<double>& ders);

// Delay stencil shared by every connectivity block: for each target j and
// source nu, tau_{j nu} = (base + frac) dt_spline.
struct DelayStencil {
    int m = 0;
    int k = 0;
    double dt = 0.0;
    std::vector<std::int32_t> base;  // m*m row-major
    std::vector<double> frac;        // m*m row-major
};

// One distinct connectivity kernel, J(r_j . r_nu) |Omega_nu|, with the
// stencil it is used with. P and Q are available in materialised form.
struct DelayMatrices {
    int block = EE;
    std::shared_ptr<const DelayStencil> stencil;
    std::vector<double> weight;  // m*m row-major

    int k() const { return stencil->k; }
    // P is m x m(k+1) over value frames 0..k; Q is m x mk over derivative
    // frames 1..k. The synaptic input is P v - Q vdot.
    SpMat P() const;
    SpMat Q() const;
};

std::shared_ptr<const DelayStencil> build_stencil(const SphereMesh& mesh, const ModelParams& p, double dt_spline);

DelayMatrices assemble_PQ(const SphereMesh& mesh, const ModelParams& p, int block, double dt_spline);

// History depth: smallest k with k dt >= tau0 + pi/c.
int history_depth(const ModelParams& p, double dt_spline);

// All kernels needed by a parameter set, deduplicated; kernel_of[a][b] points
// into kernels for receiver a and sender b.
struct DelayOperator {
    std::vector<DelayMatrices> kernels;
    std::array<std::array<int, 2>, 2> kernel_of{};
    bool presynaptic = false;
};

DelayOperator build_delay_operator(const SphereMesh& mesh, const ModelParams& p, double dt_spline,
                                   bool force_general = false);

// Ring of frames of v = S(u) and vdot = S'(u) udot for both populations.
// Frames are spaced by the stepping dt; position l holds time t_now - l dt.
class HistoryBuffer {
public:
    HistoryBuffer() = default;
    HistoryBuffer(int m, int depth_steps);

    int m() const { return m_; }
    int depth() const { return depth_; }
    // Advance: the new frame becomes position 0; its derivative is unset.
    void push(const Eigen::VectorXd& v_e, const Eigen::VectorXd& v_i);
    double* value(int pop, int pos);
    const double* value(int pop, int pos) const;
    double* deriv(int pop, int pos);
    const double* deriv(int pop, int pos) const;
    int head() const { return head_; }
    void set_head(int h) { head_ = h; }
    std::vector<double>& raw(int which) { return data_[which]; }
    const std::vector<double>& raw(int which) const { return data_[which]; }

private:
    int slot(int pos) const;
    int m_ = 0;
    int depth_ = 0;  // positions 0..depth_
    int head_ = 0;
    std::array<std::vector<double>, 4> data_;  // v_e, v_i, vdot_e, vdot_i
};

// out_a = sum_b (P_ab v_b - Q_ab vdot_b); ratio = dt_spline / dt.
void apply_delay(const DelayOperator& op, const HistoryBuffer& hist, int ratio, Eigen::VectorXd& out_e,
                 Eigen::VectorXd& out_i, Exec exec = Exec::Parallel);

enum class ModeKind { Field, Temporal };

// Re(A e^{i omega t} Y_l^m) (Field) or Re(A e^{i omega t}) Re(Y_l^m) (Temporal).
struct HistoryMode {
    int pop = -1;  // 0, 1, or -1 for both
    int l = 0;
    int m = 0;
    cdouble amplitude{0.1, 0.0};
    double omega = 0.0;
    ModeKind kind = ModeKind::Field;
};

struct SimConfig {
    ModelParams params;
    int refinement = 3;
    double dt = 0.05;
    int spline_ratio = 1;  // dt_spline = spline_ratio * dt
    double t_end = 100.0;
    std::vector<HistoryMode> history;
    int snapshot_every = 20;
    int probe_count = 8;
    bool force_general_kernels = false;
    double blowup = 1e6;

    double dt_spline() const { return dt * spline_ratio; }
    void validate() const;
};

// History value and time derivative at centroid position r.
void history_value(const std::vector<HistoryMode>& modes, int pop, const Vec3& r, double t, double& u,
                   double& udot);

// Spread-out probe centroids chosen by farthest-point sampling from index 0.
std::vector<int> choose_probes(const SphereMesh& mesh, int count);

class Simulator {
public:
    Simulator(const SphereMesh& mesh, const SimConfig& cfg);

    // Fills the history from the analytic initial functions.
    void seed();
    void step();
    void run_until(double t_end, const std::function<void(const Simulator&)>& observer = {});

    double time() const { return t0_ + steps_ * cfg_.dt; }
    long steps() const { return steps_; }
    const Eigen::VectorXd& u(int pop) const { return u_[pop]; }
    const SphereMesh& mesh() const { return mesh_; }
    const SimConfig& config() const { return cfg_; }
    const DelayOperator& delay_operator() const { return op_; }
    const HistoryBuffer& history() const { return hist_; }
    int depth_steps() const { return op_.kernels.front().k() * cfg_.spline_ratio; }

    void save_checkpoint(const std::string& path) const;
    void load_checkpoint(const std::string& path);

    Exec exec = Exec::Parallel;

private:
    void rhs_explicit(Eigen::VectorXd* F);
    void check_bounds() const;

    const SphereMesh& mesh_;
    SimConfig cfg_;
    DiscreteLaplacian lap_;
    DelayOperator op_;
    HistoryBuffer hist_;
    std::array<Eigen::SparseLU<Eigen::SparseMatrix<double>>, 2> mcnab_, euler_;
    std::array<bool, 2> has_diffusion_{false, false};
    std::array<Eigen::VectorXd, 2> u_, u_prev_, F_prev_;
    long steps_ = 0;
    double t0_ = 0.0;
};

struct Snapshot {
    double t = 0.0;
    Eigen::VectorXd u_e, u_i;
};

struct SimResult {
    std::vector<int> probes;
    std::vector<double> times;
    std::vector<std::vector<double>> probe_e, probe_i;  // per time
    std::vector<Snapshot> snapshots;
};

// Field diagnostics.
// Area-weighted first moment sum |Omega_j| u_j r_j.
Vec3 dipole(const SphereMesh& mesh, const Eigen::VectorXd& u);
// sum_m |<u, Y_l^m>|^2 with the area-weighted inner product.
double harmonic_power(const SphereMesh& mesh, const Eigen::VectorXd& u, int l);
// Area-weighted mean and standard deviation.
void spatial_moments(const SphereMesh& mesh, const Eigen::VectorXd& u, double& mean, double& stddev);

// Rigid rotation fitted to a dipole time series: axis from the mean of
// p x dp/dt, angular speed about that axis from each sample.
struct RotationFit {
    Vec3 axis = Vec3::UnitZ();
    double axis_angle_to_z = 0.0;  // radians, sign of axis ignored
    double mean_speed = 0.0;
    double speed_spread = 0.0;      // (max - min) / |mean| of the sampled speed
    double amplitude_spread = 0.0;  // same for |p| projected off the axis
    int samples = 0;
};
RotationFit fit_rotation(const std::vector<double>& t, const std::vector<Vec3>& p);

// Dominant period of a uniformly sampled series from the mean spacing of
// upward crossings through its time average (linear interpolation between
// samples). Returns 0 when fewer than two crossings occur.
double dominant_period(const std::vector<double>& t, const std::vector<double>& x);

SimResult simulate(const SphereMesh& mesh, const SimConfig& cfg,
                   const std::function<void(const Simulator&)>& observer = {});

}  // namespace nfs
