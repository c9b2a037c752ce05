#include "nfsphere/kernels.hpp"

#include <cmath>
#include <string>

namespace nfs {

void ModelParams::validate() const {
    auto need = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("invalid model parameter: ") + what);
    };
    need(alpha_e > 0 && alpha_i > 0, "alpha must be positive");
    need(d_e >= 0 && d_i >= 0, "diffusion must be nonnegative");
    for (double s : sigma) need(s > 0, "sigma must be positive");
    need(tau0 > 0, "tau0 must be positive");
    need(c > 0, "c must be positive");
    need(gamma > 0, "gamma must be positive");
    need(delta >= 0, "delta must be nonnegative");
    need(std::isfinite(max_delay()), "maximal delay must be finite");
}

ModelParams PresynapticParams::expand(ModelParams base) const {
    base.eta = {eta_e, eta_i, eta_e, eta_i};
    base.sigma = {sigma_e, sigma_i, sigma_e, sigma_i};
    return base;
}

bool PresynapticParams::matches(const ModelParams& p) {
    return p.eta[EE] == p.eta[IE] && p.eta[EI] == p.eta[II] &&
           p.sigma[EE] == p.sigma[IE] && p.sigma[EI] == p.sigma[II];
}

double safe_acos(double s) {
    if (s > 1.0) {
        if (s - 1.0 > 1e-12) throw std::domain_error("arccos argument above 1");
        return 0.0;
    }
    if (s < -1.0) {
        if (-1.0 - s > 1e-12) throw std::domain_error("arccos argument below -1");
        return kPi;
    }
    return std::acos(s);
}

namespace {
double logistic(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}
}  // namespace

double sigmoid_deriv(const ModelParams& p, int order, double u) {
    const double g = p.gamma;
    const double f = logistic(g * (u - p.delta));
    switch (order) {
        case 0: return f - logistic(-g * p.delta);
        case 1: return g * f * (1 - f);
        case 2: return g * g * f * (1 - f) * (1 - 2 * f);
        case 3: return g * g * g * f * (1 - f) * (1 - 6 * f + 6 * f * f);
        default: throw std::invalid_argument("sigmoid derivative order must be 0..3");
    }
}

double connectivity(double eta, double sigma, double s) {
    return eta * std::exp(-safe_acos(s) / sigma);
}

double delay(const ModelParams& p, double s) { return p.tau0 + safe_acos(s) / p.c; }

Mat2c kernel_matrix(const ModelParams& p, double s, cdouble z) {
    const double th = safe_acos(s);
    const cdouble damp = std::exp(-z * (p.tau0 + th / p.c));
    Mat2c g;
    for (int b = 0; b < 4; ++b) g(b / 2, b % 2) = p.eta[b] * std::exp(-th / p.sigma[b]) * damp;
    return g;
}

}  // namespace nfs
