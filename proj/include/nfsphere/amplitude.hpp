// Amplitude and phase-difference reduction of the l = 1 normal form, its
// rotating and standing wave families, and their linearisation spectra.
#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "nfsphere/kernels.hpp"

namespace nfs {

struct AmplitudeSingularity : std::domain_error {
    using std::domain_error::domain_error;
};

struct AmplitudeState {
    std::array<double, 3> r{0.0, 0.0, 0.0};  // r_{-1}, r_0, r_1
    double psi = 0.0;                        // 2 psi_0 - psi_{-1} - psi_1
};

using Vec4 = Eigen::Vector4d;

// Amplitudes below this are treated as lying on a coordinate axis.
inline constexpr double kOnAxis = 1e-14;

// (dr_{-1}, dr_0, dr_1, dpsi).
Vec4 amp_rhs(const AmplitudeState& s, cdouble mu, cdouble g11, cdouble g12);

// Individual phase velocities (dpsi_{-1}, dpsi_0, dpsi_1); psi_0 is taken as
// the reference so that only the phase difference enters.
std::array<double, 3> phase_rhs(const AmplitudeState& s, cdouble mu, cdouble g11, cdouble g12);

// rho_1 = |r|^2, rho_2 = r_0^2 - 2 r_{-1} r_1.
std::array<double, 2> rho_of(const AmplitudeState& s);
std::array<double, 2> rho_rhs(double rho1, double rho2, cdouble mu, cdouble g11, cdouble g12);

// Fixed points with rho_2 = 0, psi = 0 on the sphere rho_1 = Re mu / -Re g11.
AmplitudeState rotating_wave_family(double r1, cdouble mu, cdouble g11, cdouble g12);
// Fixed points with r_{-1} = r_1, psi = pi.
AmplitudeState standing_wave_family(double r1, cdouble mu, cdouble g11, cdouble g12);

double rotating_r1_max(cdouble mu, cdouble g11);
double standing_r1_max(cdouble mu, cdouble g11, cdouble g12);

enum class WaveKind { Rotating, Standing };

std::vector<cdouble> family_spectrum(WaveKind kind, cdouble mu, cdouble g11, cdouble g12);

// 5-point central-difference Jacobian.
Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x, double h = 1e-5);

// Eigenvalues of the FD Jacobian of amp_rhs at s, sorted by (Re, Im).
std::vector<cdouble> fd_spectrum(const AmplitudeState& s, cdouble mu, cdouble g11, cdouble g12,
                                 double h = 1e-5);

// Sort by real part then imaginary part; shared by both spectrum sources.
void sort_spectrum(std::vector<cdouble>& ev);

}  // namespace nfs
