#include "nfsphere/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace nfs {

namespace {
// P_n(x) and P_{n-1}(x) by the three-term recurrence.
std::pair<double, double> legendre_pair(int n, double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return {p1, p0};
}
}  // namespace

QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("quadrature needs at least one node");
    QuadratureRule r;
    r.nodes.assign(n, 0.0);
    r.weights.assign(n, 0.0);
    if (n == 1) {
        r.weights[0] = 2.0;
        return r;
    }
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            auto [pn, pm] = legendre_pair(n, x);
            double dp = n * (x * pn - pm) / (x * x - 1.0);
            double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        auto [pn, pm] = legendre_pair(n, x);
        double dp = n * (x * pn - pm) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

QuadratureRule angular_rule(int n) {
    QuadratureRule gl = gauss_legendre(n);
    QuadratureRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    // theta increasing means s decreasing; reverse to keep nodes ascending
    for (int i = 0; i < n; ++i) {
        double th = (gl.nodes[i] + 1.0) * kPi / 2.0;
        r.nodes[n - 1 - i] = std::cos(th);
        r.weights[n - 1 - i] = gl.weights[i] * kPi / 2.0 * std::sin(th);
    }
    return r;
}

const QuadratureRule& default_rule() {
    static const QuadratureRule rule = angular_rule(kDefaultQuadratureNodes);
    return rule;
}

double legendre(int l, double s) {
    if (l < 0) throw std::invalid_argument("legendre degree must be nonnegative");
    if (std::abs(s) > 1.0 + 1e-12) throw std::domain_error("legendre argument outside [-1,1]");
    if (s == 1.0) return 1.0;
    if (l == 0) return 1.0;
    double p0 = 1.0, p1 = s;
    for (int k = 1; k < l; ++k) {
        double p2 = ((2.0 * k + 1.0) * s * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

cdouble sph_harm(int l, int m, double theta, double phi) {
    if (l < 0 || std::abs(m) > l) throw std::out_of_range("spherical harmonic index |m| > l");
    const int am = std::abs(m);
    // std::sph_legendre already carries the Condon-Shortley phase
    const double ylm = std::sph_legendre(static_cast<unsigned>(l), static_cast<unsigned>(am), theta);
    cdouble y = ylm * std::polar(1.0, am * phi);
    if (m < 0) y = ((am % 2) ? -1.0 : 1.0) * std::conj(y);
    return y;
}

cdouble sph_harm_xyz(int l, int m, double x, double y, double z) {
    double r = std::sqrt(x * x + y * y + z * z);
    double theta = safe_acos(z / r);
    double phi = std::atan2(y, x);
    return sph_harm(l, m, theta, phi);
}

HarmonicKernel compute_G(const ModelParams& p, int l, cdouble z, const QuadratureRule& rule) {
    if (l < 0) throw std::invalid_argument("harmonic degree must be nonnegative");
    HarmonicKernel h;
    h.l = l;
    h.z = z;
    Mat2c G = Mat2c::Zero(), Gp = Mat2c::Zero();
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double s = rule.nodes[k];
        const double w = rule.weights[k] * legendre(l, s);
        const double tau = delay(p, s);
        Mat2c g = kernel_matrix(p, s, z);
        G += w * g;
        Gp += (-tau * w) * g;
    }
    h.G = 2.0 * kPi * G;
    h.Gprime = 2.0 * kPi * Gp;
    return h;
}

}  // namespace nfs
