#include "nfsphere/amplitude.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nfs {

Vec4 amp_rhs(const AmplitudeState& s, cdouble mu, cdouble g11, cdouble g12) {
    const double a = s.r[0], b = s.r[1], c = s.r[2];
    const double rm = mu.real(), A = g11.real(), B = g12.real(), Bi = g12.imag();
    const double cp = std::cos(s.psi), sp = std::sin(s.psi);
    const double rho1 = a * a + b * b + c * c;
    Vec4 out;
    out(0) = rm * a + A * a * rho1 + 2 * B * a * c * c - B * b * b * c * cp + Bi * b * b * c * sp;
    out(1) = rm * b + A * b * rho1 + B * b * b * b - 2 * B * a * b * c * cp - 2 * Bi * a * b * c * sp;
    out(2) = rm * c + A * c * rho1 + 2 * B * c * a * a - B * b * b * a * cp + Bi * b * b * a * sp;
    if (a < kOnAxis || c < kOnAxis) {
        if (b >= kOnAxis) throw AmplitudeSingularity("phase difference undefined with r_-1 or r_1 zero");
        out(3) = 0.0;
        return out;
    }
    const double q = b * b * (c / a + a / c);
    out(3) = -2 * Bi * (a * a - b * b + c * c) + Bi * (q - 4 * a * c) * cp + B * (q + 4 * a * c) * sp;
    return out;
}

std::array<double, 3> phase_rhs(const AmplitudeState& s, cdouble mu, cdouble g11, cdouble g12) {
    const double a = s.r[0], b = s.r[1], c = s.r[2];
    const double im = mu.imag(), A = g11.imag(), B = g12.real(), Bi = g12.imag();
    const double cp = std::cos(s.psi), sp = std::sin(s.psi);
    const double rho1 = a * a + b * b + c * c;
    std::array<double, 3> out{};
    const double base = im + A * rho1;
    const double mix = Bi * cp + B * sp;
    if (a >= kOnAxis) out[0] = base + 2 * Bi * c * c - b * b * c / a * mix;
    else out[0] = base + 2 * Bi * c * c;
    out[1] = base + Bi * b * b - 2 * Bi * a * c * cp + 2 * B * a * c * sp;
    if (c >= kOnAxis) out[2] = base + 2 * Bi * a * a - b * b * a / c * mix;
    else out[2] = base + 2 * Bi * a * a;
    return out;
}

std::array<double, 2> rho_of(const AmplitudeState& s) {
    const double a = s.r[0], b = s.r[1], c = s.r[2];
    return {a * a + b * b + c * c, b * b - 2 * a * c};
}

std::array<double, 2> rho_rhs(double rho1, double rho2, cdouble mu, cdouble g11, cdouble g12) {
    const double rm = mu.real(), A = g11.real(), B = g12.real();
    return {2 * rho1 * (rm + A * rho1) + 2 * B * rho2 * rho2, 2 * rho2 * (rm + (A + B) * rho1)};
}

double rotating_r1_max(cdouble mu, cdouble g11) {
    if (!(mu.real() > 0) || !(g11.real() < 0))
        throw std::invalid_argument("rotating family needs Re mu > 0 and Re g11 < 0");
    return std::sqrt(mu.real() / -g11.real());
}

double standing_r1_max(cdouble mu, cdouble g11, cdouble g12) {
    const double den = g11.real() + g12.real();
    if (!(mu.real() > 0) || !(den < 0))
        throw std::invalid_argument("standing family needs Re mu > 0 and Re g11 + Re g12 < 0");
    return std::sqrt(mu.real() / (-2 * den));
}

AmplitudeState rotating_wave_family(double r1, cdouble mu, cdouble g11, cdouble /*g12*/) {
    const double R = rotating_r1_max(mu, g11);
    const double slack = 4 * std::numeric_limits<double>::epsilon() * R;
    if (r1 < 0 || r1 > R + slack) throw std::invalid_argument("r1 outside the rotating family range");
    // Snap rounding-level distances to the endpoint, where the state lies on an axis.
    double rest = R - r1;
    if (rest <= slack) {
        rest = 0.0;
        r1 = R;
    }
    AmplitudeState s;
    s.r = {rest, std::sqrt(2 * r1 * rest), r1};
    s.psi = 0.0;
    return s;
}

AmplitudeState standing_wave_family(double r1, cdouble mu, cdouble g11, cdouble g12) {
    const double R = standing_r1_max(mu, g11, g12);
    if (r1 < 0 || r1 > R * (1 + 4 * std::numeric_limits<double>::epsilon())) throw std::invalid_argument("r1 outside the standing family range");
    AmplitudeState s;
    const double r0sq = mu.real() / (-(g11.real() + g12.real())) - 2 * r1 * r1;
    s.r = {r1, std::sqrt(std::max(0.0, r0sq)), r1};
    s.psi = kPi;
    return s;
}

void sort_spectrum(std::vector<cdouble>& ev) {
    std::sort(ev.begin(), ev.end(), [](cdouble x, cdouble y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
}

std::vector<cdouble> family_spectrum(WaveKind kind, cdouble mu, cdouble g11, cdouble g12) {
    const double rm = mu.real(), A = g11.real(), B = g12.real();
    std::vector<cdouble> ev;
    if (kind == WaveKind::Rotating) {
        if (A == 0.0) throw std::domain_error("degenerate: Re g11 = 0");
        const cdouble x(-2 * rm * B / A, 2 * rm * g12.imag() / A);
        ev = {0.0, -2 * rm, x, std::conj(x)};
    } else {
        if (A + B == 0.0) throw std::domain_error("degenerate: Re g11 + Re g12 = 0");
        const double x = 2 * rm * B / (A + B);
        ev = {0.0, -2 * rm, x, x};
    }
    sort_spectrum(ev);
    return ev;
}

Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x, double h) {
    const Eigen::Index n = x.size();
    Eigen::VectorXd f0 = f(x);
    Eigen::MatrixXd J(f0.size(), n);
    for (Eigen::Index k = 0; k < n; ++k) {
        auto at = [&](double t) {
            Eigen::VectorXd y = x;
            y(k) += t;
            return f(y);
        };
        J.col(k) = (at(-2 * h) - 8 * at(-h) + 8 * at(h) - at(2 * h)) / (12 * h);
    }
    return J;
}

std::vector<cdouble> fd_spectrum(const AmplitudeState& s, cdouble mu, cdouble g11, cdouble g12, double h) {
    auto f = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        AmplitudeState t;
        t.r = {x(0), x(1), x(2)};
        t.psi = x(3);
        return amp_rhs(t, mu, g11, g12);
    };
    Eigen::VectorXd x(4);
    x << s.r[0], s.r[1], s.r[2], s.psi;
    Eigen::EigenSolver<Eigen::MatrixXd> es(fd_jacobian(f, x, h));
    std::vector<cdouble> ev(es.eigenvalues().data(), es.eigenvalues().data() + 4);
    sort_spectrum(ev);
    return ev;
}

}  // namespace nfs
