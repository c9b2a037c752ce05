// Characteristic matrices E_l(z), their determinants, eigenvalue search and
// the resolvent factor Q_l(z).
#pragma once

#include <stdexcept>
#include <vector>

#include "nfsphere/harmonics.hpp"

namespace nfs {

struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SpectralMatrix {
    int l = 0;
    cdouble z{};
    Mat2c E;
    Mat2c Eprime;
    Mat2c adjugate;
    cdouble det{};
    cdouble detprime{};
    HarmonicKernel kernel;
};

struct EigenSolution {
    int l = 0;
    cdouble lambda{};
    double omega = 0.0;
    Vec2c v = Vec2c::Zero();
    double residual = 0.0;
};

struct Region {
    double re_min = -2.0, re_max = 0.5, im_min = -3.0, im_max = 3.0;
    bool contains(cdouble z) const {
        return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
    }
};

struct RootSearch {
    std::vector<EigenSolution> roots;  // sorted by (Re, Im)
    int winding = 0;                   // argument-principle count on the boundary
    int failed_seeds = 0;
    bool count_mismatch = false;
};

SpectralMatrix spectral_matrix(const ModelParams& p, int l, cdouble z,
                               const QuadratureRule& rule = default_rule());

Mat2c adjugate(const Mat2c& A);

// Grid-seeded Newton on det E_l with a winding-number cross-check.
RootSearch find_roots(const ModelParams& p, int l, const Region& region, int density,
                      const QuadratureRule& rule = default_rule());

// Number of zeros of det E_l inside the rectangle, by tracking the argument
// along its boundary with adaptive subdivision.
int winding_number(const ModelParams& p, int l, const Region& region, int samples_per_side = 64,
                   const QuadratureRule& rule = default_rule());

// Unit null vector of E_l(lambda); the largest component is made real positive.
Vec2c eigenvector(const ModelParams& p, int l, cdouble lambda,
                  const QuadratureRule& rule = default_rule());

// Q_l(z) = E_l(z)^{-1} G_l(z).
Mat2c resolvent_Q(const ModelParams& p, int l, cdouble z,
                  const QuadratureRule& rule = default_rule());

}  // namespace nfs
