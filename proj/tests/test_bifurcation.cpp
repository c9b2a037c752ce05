#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "nfsphere/bifurcation.hpp"
#include "test_util.hpp"

using namespace nfs;

TEST_SUITE("bifurcation") {

TEST_CASE("fold curve is affine and annihilates E_l(0)") {
    ModelParams f = testing::fixed(0.02, 0.2);
    for (int l = 0; l <= 4; ++l) {
        Curve c = fold_curve(f, l, {0.0, 1.0, 2.5, 4.0});
        REQUIRE(c.points.size() == 4);
        // Collinear samples.
        const auto& p = c.points;
        const double s1 = (p[1].eta_i - p[0].eta_i) / (p[1].eta_e - p[0].eta_e);
        const double s2 = (p[3].eta_i - p[2].eta_i) / (p[3].eta_e - p[2].eta_e);
        CHECK(std::abs(s1 - s2) < 1e-12 * std::max(1.0, std::abs(s1)));
        for (const auto& q : p) {
            ModelParams full = testing::with(0.02, 0.2, q.eta_e, q.eta_i);
            CHECK(std::abs(spectral_matrix(full, l, 0.0).det) < 1e-10);
        }
    }
}

TEST_CASE("fold curve at eta_e = 0 equals A / C") {
    ModelParams f = testing::fixed(0.1, 0.01);
    const int l = 2;
    Curve c = fold_curve(f, l, {0.0});
    ScaledKernel k = scaled_kernel(f, l, 0.0);
    const double ae = 1.0 + 6 * 0.1, ai = 1.0 + 6 * 0.01;
    CHECK(c.points[0].eta_i == doctest::Approx(ae * ai / (ae * k.i.real())).epsilon(1e-12));
}

TEST_CASE("l = 0 Hopf point from the printed frequency") {
    HopfPoint h = hopf_point(testing::fixed(0.02, 0.2), 0, 0.802);
    CHECK(std::abs(h.eta_e - 6.1) < 2e-2);
    // eta_i moves quickly with omega, so look within the rounding of 0.802.
    double best = 1e9;
    for (double w = 0.8015; w <= 0.8025; w += 1e-5) {
        HopfPoint q = hopf_point(testing::fixed(0.02, 0.2), 0, w);
        best = std::min(best, std::hypot(q.eta_e - 6.1, q.eta_i + 14.134));
    }
    CHECK(best < 5e-3);
    CHECK(std::abs(spectral_matrix(h.params, 0, cdouble(0, 0.802)).det) < 1e-10);
    HopfPoint hm = hopf_point(testing::fixed(0.02, 0.2), 0, -0.802);
    CHECK(hm.eta_e == doctest::Approx(h.eta_e).epsilon(1e-13));
    CHECK(hm.eta_i == doctest::Approx(h.eta_i).epsilon(1e-13));
}

TEST_CASE("l = 0 Hopf curve does not depend on diffusion") {
    for (double w : {0.3, 0.802, 1.4}) {
        HopfPoint a = hopf_point(testing::fixed(0.02, 0.2), 0, w), b = hopf_point(testing::fixed(1.0, 0.0), 0, w);
        CHECK(a.eta_e == b.eta_e);
        CHECK(a.eta_i == b.eta_i);
    }
}

TEST_CASE("Hopf points at fixed eta_e") {
    auto pts = hopf_points_at_eta_e(testing::fixed(1.0, 0.1), 1, 2.9, 0.3, 1.2);
    bool hit = false;
    for (const auto& h : pts) {
        CHECK(std::abs(spectral_matrix(h.params, 1, cdouble(0, h.omega)).det) < 1e-10);
        if (std::abs(h.eta_i + 6.624) < 2e-2 && std::abs(h.omega - 0.734) < 5e-3) hit = true;
    }
    CHECK(hit);
}

namespace {

// Distance from (x, y) to the polyline of a traced curve.
double polyline_distance(const Curve& c, double x, double y) {
    double best = 1e9;
    for (std::size_t k = 1; k < c.points.size(); ++k) {
        const double ax = c.points[k - 1].eta_e, ay = c.points[k - 1].eta_i;
        const double dx = c.points[k].eta_e - ax, dy = c.points[k].eta_i - ay;
        double t = ((x - ax) * dx + (y - ay) * dy) / (dx * dx + dy * dy);
        t = std::clamp(t, 0.0, 1.0);
        best = std::min(best, std::hypot(ax + t * dx - x, ay + t * dy - y));
    }
    return best;
}

double curve_distance(const BifurcationDiagram& d, int l, double x, double y) {
    double best = 1e9;
    for (const auto& c : d.curves)
        if (c.l == l && c.kind == CurveKind::Hopf) best = std::min(best, polyline_distance(c, x, y));
    return best;
}

}  // namespace

TEST_CASE("diagram contains the printed points") {
    std::vector<double> wgrid, egrid;
    for (int k = 1; k <= 300; ++k) wgrid.push_back(0.01 * k);
    for (int k = 0; k <= 16; ++k) egrid.push_back(0.5 * k);
    SUBCASE("l = 0 curve through (6.1, -14.134)") {
        BifurcationDiagram d = trace_diagram(testing::fixed(0.02, 0.2), 4, wgrid, egrid, Window{});
        CHECK(curve_distance(d, 0, 6.1, -14.134) < 2e-2);
        for (const auto& c : d.curves)
            for (const auto& p : c.points) {
                ModelParams full = testing::with(0.02, 0.2, p.eta_e, p.eta_i);
                CHECK(std::abs(spectral_matrix(full, c.l, cdouble(0, p.omega)).det) < 1e-8);
            }
    }
    SUBCASE("l = 1 curve through (2.9, -6.624)") {
        BifurcationDiagram d = trace_diagram(testing::fixed(1.0, 0.1), 4, wgrid, egrid, Window{});
        CHECK(curve_distance(d, 1, 2.9, -6.624) < 5e-2);
        auto pts = hopf_points_at_eta_e(testing::fixed(1.0, 0.1), 1, 2.9, 0.3, 1.2);
        double exact = 1e9;
        for (const auto& h : pts) exact = std::min(exact, std::abs(h.eta_i + 6.624));
        CHECK(exact < 2e-2);
    }
    SUBCASE("no degrees gives an empty diagram") {
        BifurcationDiagram d = trace_diagram(testing::fixed(1.0, 0.1), -1, wgrid, egrid, Window{});
        CHECK(d.curves.empty());
    }
}

TEST_CASE("zero frequency is rejected") {
    CHECK_THROWS_AS(hopf_point(testing::fixed(0.1, 0.1), 0, 0.0), std::invalid_argument);
}

}
