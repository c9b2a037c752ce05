// Fold and Hopf curves in the (eta_e, eta_i) plane for connectivity that
// depends only on the sending population.
#pragma once

#include <string>
#include <vector>

#include "nfsphere/linear.hpp"

namespace nfs {

struct HopfPoint {
    int l = 0;
    double omega = 0.0;
    double eta_e = 0.0;
    double eta_i = 0.0;
    ModelParams params;  // fixed parameters with the solved eta inserted
};

struct CurvePoint {
    double eta_e = 0.0;
    double eta_i = 0.0;
    double omega = 0.0;
};

enum class CurveKind { Fold, Hopf };

struct Curve {
    int l = 0;
    CurveKind kind = CurveKind::Fold;
    std::vector<CurvePoint> points;
};

struct Window {
    double eta_e_min = 0.0, eta_e_max = 8.0, eta_i_min = -16.0, eta_i_max = 0.0;
    bool contains(double ee, double ei) const {
        return ee >= eta_e_min && ee <= eta_e_max && ei >= eta_i_min && ei <= eta_i_max;
    }
};

struct BifurcationDiagram {
    std::vector<Curve> curves;
    std::vector<std::string> failures;
};

// S'(0) times the diagonal kernel coefficients with unit strengths:
// the factors multiplying eta_e and eta_i in det E_l.
struct ScaledKernel {
    cdouble e{};
    cdouble i{};
};
ScaledKernel scaled_kernel(const ModelParams& fixed, int l, cdouble z,
                           const QuadratureRule& rule = default_rule());

Curve fold_curve(const ModelParams& fixed, int l, const std::vector<double>& eta_e_grid,
                 const QuadratureRule& rule = default_rule());

HopfPoint hopf_point(const ModelParams& fixed, int l, double omega,
                     const QuadratureRule& rule = default_rule());

// All Hopf points of degree l with the given eta_e and omega in [lo, hi].
std::vector<HopfPoint> hopf_points_at_eta_e(const ModelParams& fixed, int l, double eta_e,
                                            double omega_lo, double omega_hi, int scan = 400,
                                            const QuadratureRule& rule = default_rule());

BifurcationDiagram trace_diagram(const ModelParams& fixed, int l_max,
                                 const std::vector<double>& omega_grid,
                                 const std::vector<double>& eta_e_grid, const Window& window,
                                 const QuadratureRule& rule = default_rule());

// Grid of flags over the window: true where every eigenvalue found in the
// search region has negative real part.
std::vector<std::vector<bool>> stability_region(const ModelParams& fixed, int l_max,
                                                const Window& window, int resolution,
                                                const Region& region, int density);

}  // namespace nfs
