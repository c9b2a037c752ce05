// Model parameters and pointwise model functions for the two-population
// delayed neural field on the unit sphere.
#pragma once

#include <array>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace nfs {

using cdouble = std::complex<double>;
using Mat2c = Eigen::Matrix2cd;
using Vec2c = Eigen::Vector2cd;

inline constexpr double kPi = 3.14159265358979323846;

// Block index order for the 2x2 connectivity data: ee, ei, ie, ii.
// Row is the receiving population, column the sending one.
enum Block { EE = 0, EI = 1, IE = 2, II = 3 };

struct ModelParams {
    double alpha_e = 1.0;
    double alpha_i = 1.0;
    double d_e = 0.0;
    double d_i = 0.0;
    std::array<double, 4> eta{0.0, 0.0, 0.0, 0.0};
    std::array<double, 4> sigma{2.0 / 9.0, 1.0 / 6.0, 2.0 / 9.0, 1.0 / 6.0};
    double tau0 = 3.0;
    double c = 0.8;
    double gamma = 8.0;
    double delta = 0.0;

    // Largest transmission delay, reached between antipodal points.
    double max_delay() const { return tau0 + kPi / c; }
    double alpha(int pop) const { return pop == 0 ? alpha_e : alpha_i; }
    double diffusion(int pop) const { return pop == 0 ? d_e : d_i; }
    // Throws std::invalid_argument when an invariant is violated.
    void validate() const;
};

// Connectivity that depends only on the sending population.
struct PresynapticParams {
    double eta_e = 0.0;
    double eta_i = 0.0;
    double sigma_e = 2.0 / 9.0;
    double sigma_i = 1.0 / 6.0;

    ModelParams expand(ModelParams base) const;
    static bool matches(const ModelParams& p);
};

// arccos with clamping for arguments within 1e-12 of [-1,1].
double safe_acos(double s);

// S^{(order)}(u) for the shifted logistic sigmoid, order in 0..3.
double sigmoid_deriv(const ModelParams& p, int order, double u);

double connectivity(double eta, double sigma, double s);
double delay(const ModelParams& p, double s);

// g(s,z) = J(s) exp(-z tau(s)) entrywise.
Mat2c kernel_matrix(const ModelParams& p, double s, cdouble z);

}  // namespace nfs
