#include "nfsphere/linear.hpp"

#include <algorithm>
#include <cmath>

namespace nfs {

Mat2c adjugate(const Mat2c& A) {
    Mat2c B;
    B << A(1, 1), -A(0, 1), -A(1, 0), A(0, 0);
    return B;
}

SpectralMatrix spectral_matrix(const ModelParams& p, int l, cdouble z, const QuadratureRule& rule) {
    SpectralMatrix sm;
    sm.l = l;
    sm.z = z;
    sm.kernel = compute_G(p, l, z, rule);
    const double s1 = sigmoid_deriv(p, 1, 0.0);
    const double ll = l * (l + 1.0);
    sm.E = -s1 * sm.kernel.G;
    sm.E(0, 0) += z + p.alpha_e + ll * p.d_e;
    sm.E(1, 1) += z + p.alpha_i + ll * p.d_i;
    sm.Eprime = Mat2c::Identity() - s1 * sm.kernel.Gprime;
    sm.adjugate = adjugate(sm.E);
    const Mat2c& E = sm.E;
    const Mat2c& D = sm.Eprime;
    sm.det = E(0, 0) * E(1, 1) - E(0, 1) * E(1, 0);
    sm.detprime = D(0, 0) * E(1, 1) + E(0, 0) * D(1, 1) - D(0, 1) * E(1, 0) - E(0, 1) * D(1, 0);
    return sm;
}

namespace {

Vec2c null_vector(const Mat2c& E) {
    // The row with the larger norm spans the row space of a rank-one matrix.
    const int r = E.row(0).norm() >= E.row(1).norm() ? 0 : 1;
    Vec2c v(-E(r, 1), E(r, 0));
    if (v.norm() == 0.0) v = Vec2c(1.0, 0.0);
    v.normalize();
    const int big = std::abs(v(0)) >= std::abs(v(1)) ? 0 : 1;
    v *= std::conj(v(big)) / std::abs(v(big));
    return v;
}

struct NewtonResult {
    bool ok = false;
    cdouble z{};
};

NewtonResult newton(const ModelParams& p, int l, cdouble z, const QuadratureRule& rule) {
    for (int it = 0; it < 60; ++it) {
        SpectralMatrix sm = spectral_matrix(p, l, z, rule);
        if (std::abs(sm.detprime) == 0.0) break;
        cdouble dz = sm.det / sm.detprime;
        z -= dz;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) > 1e6) break;
        if (std::abs(dz) < 1e-14 * (1.0 + std::abs(z))) {
            SpectralMatrix fin = spectral_matrix(p, l, z, rule);
            return {std::abs(fin.det) < 1e-10, z};
        }
    }
    SpectralMatrix fin = spectral_matrix(p, l, z, rule);
    return {std::abs(fin.det) < 1e-12, z};
}

}  // namespace

RootSearch find_roots(const ModelParams& p, int l, const Region& region, int density,
                      const QuadratureRule& rule) {
    if (density < 1) throw std::invalid_argument("seed density must be at least 1");
    const int n = density;
    std::vector<NewtonResult> results(static_cast<std::size_t>(n) * n);
#pragma omp parallel for collapse(2) schedule(dynamic)
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            double re = region.re_min + (a + 0.5) * (region.re_max - region.re_min) / n;
            double im = region.im_min + (b + 0.5) * (region.im_max - region.im_min) / n;
            results[static_cast<std::size_t>(a) * n + b] = newton(p, l, {re, im}, rule);
        }
    }
    RootSearch out;
    std::vector<cdouble> found;
    for (const auto& r : results) {
        if (!r.ok) {
            ++out.failed_seeds;
            continue;
        }
        if (!region.contains(r.z)) continue;
        found.push_back(r.z);
    }
    std::sort(found.begin(), found.end(), [](cdouble a, cdouble b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    std::vector<cdouble> unique;
    for (cdouble z : found) {
        bool dup = false;
        for (cdouble u : unique)
            if (std::abs(u - z) < 1e-8) { dup = true; break; }
        if (!dup) unique.push_back(z);
    }
    for (cdouble z : unique) {
        EigenSolution e;
        e.l = l;
        e.lambda = z;
        e.omega = z.imag();
        SpectralMatrix sm = spectral_matrix(p, l, z, rule);
        e.v = null_vector(sm.E);
        e.residual = (sm.E * e.v).norm();
        out.roots.push_back(e);
    }
    out.winding = winding_number(p, l, region, 64, rule);
    out.count_mismatch = out.winding != static_cast<int>(out.roots.size());
    return out;
}

int winding_number(const ModelParams& p, int l, const Region& region, int samples_per_side,
                   const QuadratureRule& rule) {
    const cdouble corners[4] = {{region.re_min, region.im_min},
                                {region.re_max, region.im_min},
                                {region.re_max, region.im_max},
                                {region.re_min, region.im_max}};
    auto f = [&](cdouble z) { return spectral_matrix(p, l, z, rule).det; };
    double total = 0.0;
    for (int side = 0; side < 4; ++side) {
        cdouble a = corners[side], b = corners[(side + 1) % 4];
        // stack of (t0, t1, f0, f1) segments processed left to right
        struct Seg { double t0, t1; cdouble f0, f1; int depth; };
        std::vector<Seg> stack;
        std::vector<cdouble> fs(samples_per_side + 1);
        for (int k = 0; k <= samples_per_side; ++k)
            fs[k] = f(a + (b - a) * (static_cast<double>(k) / samples_per_side));
        for (int k = samples_per_side - 1; k >= 0; --k)
            stack.push_back({static_cast<double>(k) / samples_per_side,
                             static_cast<double>(k + 1) / samples_per_side, fs[k], fs[k + 1], 0});
        while (!stack.empty()) {
            Seg s = stack.back();
            stack.pop_back();
            double dphi = std::arg(s.f1 / s.f0);
            if (std::abs(dphi) > kPi / 8 && s.depth < 30) {
                double tm = 0.5 * (s.t0 + s.t1);
                cdouble fm = f(a + (b - a) * tm);
                stack.push_back({tm, s.t1, fm, s.f1, s.depth + 1});
                stack.push_back({s.t0, tm, s.f0, fm, s.depth + 1});
                continue;
            }
            total += dphi;
        }
    }
    return static_cast<int>(std::lround(total / (2 * kPi)));
}

Vec2c eigenvector(const ModelParams& p, int l, cdouble lambda, const QuadratureRule& rule) {
    SpectralMatrix sm = spectral_matrix(p, l, lambda, rule);
    if (std::abs(sm.det) > 1e-8)
        throw SingularityError("E_l(lambda) is numerically full rank; lambda is not an eigenvalue");
    return null_vector(sm.E);
}

Mat2c resolvent_Q(const ModelParams& p, int l, cdouble z, const QuadratureRule& rule) {
    SpectralMatrix sm = spectral_matrix(p, l, z, rule);
    if (std::abs(sm.det) < 1e-12)
        throw SingularityError("resolvent requested at an eigenvalue of E_l");
    return sm.adjugate * sm.kernel.G / sm.det;
}

}  // namespace nfs
