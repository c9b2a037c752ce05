#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "nfsphere/harmonics.hpp"
#include "nfsphere/mesh.hpp"

using namespace nfs;

TEST_SUITE("mesh") {

TEST_CASE("topology and geometry") {
    for (int n = 0; n <= 4; ++n) {
        CAPTURE(n);
        SphereMesh M = build_mesh(n);
        const int F = M.size();
        CHECK(F == 20 * (1 << (2 * n)));
        std::set<std::pair<int, int>> edges;
        for (const auto& t : M.triangles)
            for (int k = 0; k < 3; ++k) {
                int a = t[k], b = t[(k + 1) % 3];
                edges.insert({std::min(a, b), std::max(a, b)});
            }
        CHECK(static_cast<int>(M.vertices.size()) - static_cast<int>(edges.size()) + F == 2);
        double total = 0.0, mean = 4 * kPi / F;
        for (int j = 0; j < F; ++j) {
            total += M.areas[j];
            CHECK(std::abs(M.centroids[j].norm() - 1.0) < 1e-14);
            CHECK(M.areas[j] > 0.75 * mean);
            CHECK(M.areas[j] < 1.25 * mean);
            for (int nb : M.neighbors[j]) {
                const auto& back = M.neighbors[nb];
                CHECK(std::count(back.begin(), back.end(), j) == 1);
            }
        }
        CHECK(total == doctest::Approx(4 * kPi).epsilon(1e-12));
        for (const auto& v : M.vertices) CHECK(std::abs(v.norm() - 1.0) < 1e-14);
    }
    SphereMesh M0 = build_mesh(0);
    bool top = false;
    for (const auto& v : M0.vertices) top = top || (v - Vec3::UnitZ()).norm() < 1e-14;
    CHECK(top);
    CHECK_THROWS(build_mesh(-1));
    CHECK_THROWS(build_mesh(kMaxRefinement + 1));
}

TEST_CASE("spherical geometry helpers") {
    const Vec3 x = Vec3::UnitX(), y = Vec3::UnitY(), z = Vec3::UnitZ();
    CHECK(spherical_triangle_area(x, y, z) == doctest::Approx(kPi / 2).epsilon(1e-14));
    CHECK(great_circle(x, y) == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK(great_circle(x, x) == 0.0);
    CHECK(great_circle(x, -x) == doctest::Approx(kPi).epsilon(1e-15));
    const Vec3 a = Vec3(1, 1e-9, 0).normalized();
    CHECK(great_circle(x, a) == doctest::Approx(1e-9).epsilon(1e-6));
    CHECK_THROWS_AS(great_circle(2 * x, y), std::domain_error);
}

TEST_CASE("laplacian structure") {
    SphereMesh M = build_mesh(3);
    DiscreteLaplacian L = discrete_laplacian(M);
    CHECK(L.matrix.rows() == M.size());
    for (int j = 0; j < M.size(); ++j) {
        double sum = 0.0;
        int off = 0;
        for (SpMat::InnerIterator it(L.matrix, j); it; ++it) {
            sum += it.value();
            if (it.col() != j) {
                ++off;
                CHECK(it.value() > 0.0);
            }
        }
        CHECK(off == 3);
        CHECK(std::abs(sum) < 1e-12 * std::abs(L.matrix.coeff(j, j)));
        double h = 0.0;
        for (int k = 0; k < 3; ++k) h += great_circle(M.centroids[j], M.centroids[M.neighbors[j][k]]);
        h /= 3;
        CHECK(L.mean_dist[j] == doctest::Approx(h).epsilon(1e-14));
        for (int k = 0; k < 3; ++k) {
            const double hk = great_circle(M.centroids[j], M.centroids[M.neighbors[j][k]]);
            CHECK(L.weights[j][k] == doctest::Approx(4.0 / (3.0 * h * hk)).epsilon(1e-14));
        }
    }
}

TEST_CASE("eigen quotient converges toward l(l+1)") {
    SphereMesh M = build_mesh(3);
    LaplaceSolver S(M, discrete_laplacian(M));
    EigenTestResult r = S.eigentest(2, 0);
    CHECK(r.quotient == doctest::Approx(5.9495).epsilon(1e-4 / 5.9495));
    CHECK(S.eigentest(1, 0).quotient == doctest::Approx(2.0).epsilon(0.01));
    CHECK(std::abs(S.eigentest(3, 0).quotient - 12.0) < 1.0);
    // The returned solution solves the constrained system.
    Eigen::VectorXd y = sample_harmonic(M, 2, 0).real();
    Eigen::VectorXd u = S.solve(-y);
    DiscreteLaplacian L = discrete_laplacian(M);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(M.size());
    CHECK(std::abs(area_inner(M, u, ones)) < 1e-10);
    // The augmented system leaves a residual along the area vector only.
    Eigen::VectorXd res = L.matrix * u + y;
    Eigen::VectorXd area = Eigen::Map<const Eigen::VectorXd>(M.areas.data(), M.size());
    const double lam = res.dot(area) / area.squaredNorm();
    CHECK((res - lam * area).norm() < 1e-9 * y.norm() * std::abs(L.matrix.coeff(0, 0)));
    // Matrix-free application from the stencil weights.
    Eigen::VectorXd mf(M.size());
    for (int j = 0; j < M.size(); ++j) {
        double acc = 0.0;
        for (int k = 0; k < 3; ++k) acc += L.weights[j][k] * (u(M.neighbors[j][k]) - u(j));
        mf(j) = acc;
    }
    CHECK((mf - L.matrix * u).norm() < 1e-12 * (L.matrix * u).norm());
}

TEST_CASE("sampled harmonics and export") {
    SphereMesh M = build_mesh(2);
    Eigen::VectorXcd y = sample_harmonic(M, 1, 1);
    for (int j = 0; j < M.size(); ++j) {
        const Vec3& r = M.centroids[j];
        CHECK(std::abs(y(j) - sph_harm_xyz(1, 1, r.x(), r.y(), r.z())) < 1e-14);
    }
    std::ostringstream os;
    write_mesh(os, M);
    std::istringstream is(os.str());
    int m = 0, n = 0;
    is >> m >> n;
    CHECK(m == M.size());
    CHECK(n == 2);
    double x, yy, z, a;
    is >> x >> yy >> z >> a;
    CHECK(x == doctest::Approx(M.centroids[0].x()));
    CHECK(a == doctest::Approx(M.areas[0]));
}

}
