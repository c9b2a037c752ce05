// O(3) x S^1 equivariant Hopf normal forms for l = 0..3: generator
// matrices, vector-field evaluators and closed-form cubic coefficients.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nfsphere/linear.hpp"

namespace nfs {

using VecXc = Eigen::VectorXcd;
using MatXc = Eigen::MatrixXcd;

struct ResonanceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Generators {
    MatXc inv;    // (-1)^l I
    MatXc theta;  // first-order infinitesimal polar rotation
    MatXc phi;    // azimuthal rotation
    MatXc psi;    // S^1 phase shift
};

Generators generators(int l, double theta_inc, double phi, double psi);

// Index helper: component m of a state of degree l lives at position m + l.
inline int idx(int l, int m) { return m + l; }

// Symmetric state reflection z_m -> z_{-m}.
VecXc reflect(const VecXc& z);
// zhat_m = (-1)^m conj(z_{-m}).
VecXc zhat(const VecXc& z);
// z_0^2 + 2 sum_{m>=1} (-1)^m z_m z_{-m}.
cdouble pairing(const VecXc& z);

VecXc cubic_C(const VecXc& z);  // l = 2
VecXc cubic_Q(const VecXc& z);  // l = 3
VecXc cubic_R(const VecXc& z);  // l = 3

struct NormalFormCoefficients {
    int l = 0;
    cdouble mu{};
    std::vector<cdouble> g;
    std::optional<double> lyapunov_l1;
};

VecXc nf_rhs(const VecXc& z, const NormalFormCoefficients& c);

// One entry of the Q-combination used by a coefficient formula:
// weight times Q_degree evaluated at 2 i omega or at 0.
struct ResolventWeight {
    int degree;
    double weight;
};

// Closed-form template shared by every g_{l,j}:
//   g = prefactor * conj(v)^T adj(E_l)/E_l' G_l * y,
//   y = s3 S''' (v v conj v) + S''^2 (sum_a Q_a(2iw) (v v)) conj v
//       + S''^2 (sum_b Q_b(0) (v conj v)) v.
struct CoefficientFormula {
    std::string name;
    double prefactor;
    double s3;
    std::vector<ResolventWeight> at_2iw;
    std::vector<ResolventWeight> at_0;
};

// The formulas for degree l, in output order.
const std::vector<CoefficientFormula>& coefficient_formulas(int l);

struct CenterManifoldTerm {
    std::string label;  // "h20" or "h11"
    int degree = 0;
    cdouble frequency{};
    Vec2c coefficient = Vec2c::Zero();  // Q_degree(frequency) applied to v*v or v*conj(v)
};

struct NormalFormResult {
    NormalFormCoefficients coeffs;
    std::vector<CenterManifoldTerm> terms;  // filled when requested
};

NormalFormResult compute_normal_form(const ModelParams& p, const EigenSolution& eig,
                                     bool export_terms = false,
                                     const QuadratureRule& rule = default_rule());

NormalFormCoefficients nfc_l0(const ModelParams& p, const EigenSolution& eig);
NormalFormCoefficients nfc_l1(const ModelParams& p, const EigenSolution& eig);
NormalFormCoefficients nfc_l2(const ModelParams& p, const EigenSolution& eig);
NormalFormCoefficients nfc_l3(const ModelParams& p, const EigenSolution& eig);

// Critical eigendata at a known Hopf frequency.
EigenSolution critical_eigen(const ModelParams& p, int l, double omega,
                             const QuadratureRule& rule = default_rule());

struct BranchVerdict {
    std::vector<cdouble> rotating;
    std::vector<cdouble> standing;
    bool rotating_stable = false;
    bool standing_stable = false;
};

BranchVerdict branch_stability_l1(cdouble mu, cdouble g11, cdouble g12);

}  // namespace nfs
