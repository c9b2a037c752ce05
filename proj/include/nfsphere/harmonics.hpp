// Legendre polynomials, spherical harmonics, quadrature and the spectral
// kernel coefficients G_l(z).
#pragma once

#include <vector>

#include "nfsphere/kernels.hpp"

namespace nfs {

struct QuadratureRule {
    std::vector<double> nodes;    // strictly increasing, inside (-1, 1)
    std::vector<double> weights;  // sum to 2
};

// Plain Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int n);

// Gauss-Legendre in the angle theta on [0, pi], mapped to s = cos(theta)
// with weights w * (pi/2) * sin(theta). Integrands of the form
// f(arccos s) are smooth in theta, so this rule converges spectrally.
QuadratureRule angular_rule(int n);

// Shared default rule (angular, 128 nodes).
const QuadratureRule& default_rule();
inline constexpr int kDefaultQuadratureNodes = 128;

double legendre(int l, double s);

// Orthonormal complex spherical harmonic with Condon-Shortley phase.
cdouble sph_harm(int l, int m, double theta, double phi);

// Y_l^m evaluated at a unit vector.
cdouble sph_harm_xyz(int l, int m, double x, double y, double z);

struct HarmonicKernel {
    int l = 0;
    cdouble z{};
    Mat2c G = Mat2c::Zero();
    Mat2c Gprime = Mat2c::Zero();
};

HarmonicKernel compute_G(const ModelParams& p, int l, cdouble z,
                         const QuadratureRule& rule = default_rule());

}  // namespace nfs
