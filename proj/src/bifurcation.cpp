#include "nfsphere/bifurcation.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

namespace nfs {

namespace {

ModelParams with_eta(ModelParams p, double eta_e, double eta_i) {
    p.eta = {eta_e, eta_i, eta_e, eta_i};
    return p;
}

void require_presynaptic(const ModelParams& p) {
    if (p.sigma[EE] != p.sigma[IE] || p.sigma[EI] != p.sigma[II])
        throw std::invalid_argument("curves require sigma depending only on the sending population");
}

}  // namespace

ScaledKernel scaled_kernel(const ModelParams& fixed, int l, cdouble z, const QuadratureRule& rule) {
    require_presynaptic(fixed);
    ModelParams unit = with_eta(fixed, 1.0, 1.0);
    HarmonicKernel h = compute_G(unit, l, z, rule);
    const double s1 = sigmoid_deriv(fixed, 1, 0.0);
    return {s1 * h.G(0, 0), s1 * h.G(1, 1)};
}

Curve fold_curve(const ModelParams& fixed, int l, const std::vector<double>& eta_e_grid,
                 const QuadratureRule& rule) {
    Curve c;
    c.l = l;
    c.kind = CurveKind::Fold;
    ScaledKernel k = scaled_kernel(fixed, l, 0.0, rule);
    const double ll = l * (l + 1.0);
    const double ae = fixed.alpha_e + ll * fixed.d_e;
    const double ai = fixed.alpha_i + ll * fixed.d_i;
    const double A = ae * ai;
    const double B = ai * k.e.real();
    const double C = ae * k.i.real();
    if (std::abs(C) < 1e-14) return c;
    for (double ee : eta_e_grid) c.points.push_back({ee, (A - ee * B) / C, 0.0});
    return c;
}

HopfPoint hopf_point(const ModelParams& fixed, int l, double omega, const QuadratureRule& rule) {
    if (omega == 0.0) throw std::invalid_argument("Hopf frequency must be nonzero");
    const cdouble z(0.0, omega);
    ScaledKernel k = scaled_kernel(fixed, l, z, rule);
    const double ll = l * (l + 1.0);
    const cdouble ae = z + fixed.alpha_e + ll * fixed.d_e;
    const cdouble ai = z + fixed.alpha_i + ll * fixed.d_i;
    // det E_l = ae*ai - eta_e*ai*Ge - eta_i*ae*Gi, split into real and imaginary rows
    const cdouble c1 = ai * k.e, c2 = ae * k.i, rhs = ae * ai;
    const double a11 = c1.real(), a12 = c2.real(), a21 = c1.imag(), a22 = c2.imag();
    const double det = a11 * a22 - a12 * a21;
    const double scale = std::abs(a11 * a22) + std::abs(a12 * a21);
    if (std::abs(det) <= 1e-14 * std::max(scale, 1e-300))
        throw SingularityError("Hopf linear system is singular at this frequency");
    HopfPoint h;
    h.l = l;
    h.omega = omega;
    h.eta_e = (rhs.real() * a22 - a12 * rhs.imag()) / det;
    h.eta_i = (a11 * rhs.imag() - a21 * rhs.real()) / det;
    h.params = with_eta(fixed, h.eta_e, h.eta_i);
    return h;
}

std::vector<HopfPoint> hopf_points_at_eta_e(const ModelParams& fixed, int l, double eta_e,
                                            double omega_lo, double omega_hi, int scan,
                                            const QuadratureRule& rule) {
    auto f = [&](double om) { return hopf_point(fixed, l, om, rule).eta_e - eta_e; };
    std::vector<double> oms(scan + 1), vals(scan + 1);
    std::vector<bool> ok(scan + 1, true);
    for (int k = 0; k <= scan; ++k) {
        oms[k] = omega_lo + (omega_hi - omega_lo) * k / scan;
        try {
            vals[k] = f(oms[k]);
        } catch (const SingularityError&) {
            ok[k] = false;
        }
    }
    std::vector<HopfPoint> out;
    for (int k = 0; k < scan; ++k) {
        if (!ok[k] || !ok[k + 1]) continue;
        if (vals[k] == 0.0) {
            out.push_back(hopf_point(fixed, l, oms[k], rule));
            continue;
        }
        if ((vals[k] < 0) == (vals[k + 1] < 0)) continue;
        // reject jumps through a pole of eta_e(omega)
        if (std::abs(vals[k] - vals[k + 1]) > 10.0 * (std::abs(eta_e) + 1.0)) continue;
        boost::uintmax_t iters = 200;
        auto tol = boost::math::tools::eps_tolerance<double>(50);
        auto [a, b] = boost::math::tools::toms748_solve(f, oms[k], oms[k + 1], vals[k], vals[k + 1],
                                                        tol, iters);
        out.push_back(hopf_point(fixed, l, 0.5 * (a + b), rule));
    }
    return out;
}

BifurcationDiagram trace_diagram(const ModelParams& fixed, int l_max,
                                 const std::vector<double>& omega_grid,
                                 const std::vector<double>& eta_e_grid, const Window& window,
                                 const QuadratureRule& rule) {
    BifurcationDiagram d;
    if (l_max < 0) return d;
    for (int l = 0; l <= l_max; ++l) {
        Curve fold = fold_curve(fixed, l, eta_e_grid, rule);
        Curve clipped = fold;
        clipped.points.clear();
        for (const auto& pt : fold.points)
            if (window.contains(pt.eta_e, pt.eta_i)) clipped.points.push_back(pt);
        d.curves.push_back(clipped);

        Curve hopf;
        hopf.l = l;
        hopf.kind = CurveKind::Hopf;
        std::vector<CurvePoint> pts(omega_grid.size());
        std::vector<int> status(omega_grid.size(), 0);
#pragma omp parallel for schedule(dynamic)
        for (std::size_t k = 0; k < omega_grid.size(); ++k) {
            try {
                HopfPoint h = hopf_point(fixed, l, omega_grid[k], rule);
                pts[k] = {h.eta_e, h.eta_i, h.omega};
                status[k] = window.contains(h.eta_e, h.eta_i) ? 1 : 0;
            } catch (const SingularityError&) {
                status[k] = -1;
            }
        }
        // Refine by bisection in omega where the curve crosses the window edge.
        for (std::size_t k = 0; k < omega_grid.size(); ++k) {
            if (status[k] == -1) {
                d.failures.push_back("l=" + std::to_string(l) + " omega=" + std::to_string(omega_grid[k]) +
                                     ": singular Hopf system");
                continue;
            }
            if (k > 0 && status[k - 1] >= 0 && status[k] != status[k - 1]) {
                double a = omega_grid[k - 1], b = omega_grid[k];
                bool inside_a = status[k - 1] == 1;
                for (int it = 0; it < 40; ++it) {
                    double m = 0.5 * (a + b);
                    bool in = false;
                    try {
                        HopfPoint h = hopf_point(fixed, l, m, rule);
                        in = window.contains(h.eta_e, h.eta_i);
                    } catch (const SingularityError&) {
                        break;
                    }
                    if (in == inside_a) a = m; else b = m;
                }
                double edge = inside_a ? a : b;
                try {
                    HopfPoint h = hopf_point(fixed, l, edge, rule);
                    hopf.points.push_back({h.eta_e, h.eta_i, h.omega});
                } catch (const SingularityError&) {
                }
            }
            if (status[k] == 1) hopf.points.push_back(pts[k]);
        }
        std::sort(hopf.points.begin(), hopf.points.end(),
                  [](const CurvePoint& a, const CurvePoint& b) { return a.omega < b.omega; });
        d.curves.push_back(hopf);
    }
    return d;
}

std::vector<std::vector<bool>> stability_region(const ModelParams& fixed, int l_max,
                                                const Window& window, int resolution,
                                                const Region& region, int density) {
    std::vector<std::vector<bool>> grid(resolution, std::vector<bool>(resolution, true));
    std::vector<char> flat(static_cast<std::size_t>(resolution) * resolution, 1);
#pragma omp parallel for collapse(2) schedule(dynamic)
    for (int a = 0; a < resolution; ++a) {
        for (int b = 0; b < resolution; ++b) {
            double ee = window.eta_e_min + (a + 0.5) * (window.eta_e_max - window.eta_e_min) / resolution;
            double ei = window.eta_i_min + (b + 0.5) * (window.eta_i_max - window.eta_i_min) / resolution;
            ModelParams p = with_eta(fixed, ee, ei);
            bool stable = true;
            for (int l = 0; l <= l_max && stable; ++l) {
                Region r = region;
                r.re_min = 0.0;
                // only the right half of the search region matters here
                RootSearch rs = find_roots(p, l, r, density);
                if (!rs.roots.empty()) stable = false;
            }
            flat[static_cast<std::size_t>(a) * resolution + b] = stable;
        }
    }
    for (int a = 0; a < resolution; ++a)
        for (int b = 0; b < resolution; ++b) grid[a][b] = flat[static_cast<std::size_t>(a) * resolution + b];
    return grid;
}

}  // namespace nfs
