#include <doctest.h>

#include <cmath>
#include <random>

#include "nfsphere/harmonics.hpp"
#include "test_util.hpp"

using namespace nfs;

TEST_SUITE("harmonics") {

TEST_CASE("quadrature rules are well formed") {
    // The angular rule is only spectrally accurate, so its weight sum is
    // checked at production sizes.
    for (int n : {1, 2, 7, 64, 128}) {
        std::vector<QuadratureRule> rules{gauss_legendre(n)};
        if (n >= 64) rules.push_back(angular_rule(n));
        for (const QuadratureRule& r : rules) {
            double s = 0.0;
            for (double w : r.weights) s += w;
            CHECK(s == doctest::Approx(2.0).epsilon(1e-13));
            for (std::size_t k = 1; k < r.nodes.size(); ++k) CHECK(r.nodes[k] > r.nodes[k - 1]);
            CHECK(r.nodes.front() > -1.0);
            CHECK(r.nodes.back() < 1.0);
        }
        for (double w : angular_rule(n).weights) CHECK(w > 0.0);
    }
    // Plain Gauss-Legendre integrates degree 2n-1 exactly.
    QuadratureRule g = gauss_legendre(6);
    double s = 0.0;
    for (std::size_t k = 0; k < g.nodes.size(); ++k) s += g.weights[k] * std::pow(g.nodes[k], 10);
    CHECK(s == doctest::Approx(2.0 / 11.0).epsilon(1e-14));
}

TEST_CASE("legendre values and recurrence") {
    CHECK(legendre(0, 0.3) == 1.0);
    CHECK(legendre(1, -0.7) == doctest::Approx(-0.7).epsilon(1e-15));
    CHECK(legendre(3, 0.5) == doctest::Approx(-0.4375).epsilon(1e-15));
    for (int l = 0; l < 30; ++l) CHECK(legendre(l, 1.0) == 1.0);
    for (double s = -1.0; s <= 1.0; s += 0.05)
        for (int l = 1; l < 20; ++l) {
            const double r = (l + 1) * legendre(l + 1, s) - (2 * l + 1) * s * legendre(l, s) + l * legendre(l - 1, s);
            CHECK(std::abs(r) < 1e-12);
        }
    CHECK_THROWS_AS(legendre(2, 1.5), std::domain_error);
}

TEST_CASE("spherical harmonic values") {
    CHECK(std::abs(sph_harm(0, 0, 0.4, 1.1) - 1.0 / (2.0 * std::sqrt(kPi))) < 1e-15);
    CHECK(std::abs(sph_harm(1, 0, 0.0, 0.0) - std::sqrt(3.0 / (4.0 * kPi))) < 1e-15);
    CHECK_THROWS(sph_harm(1, 2, 0.0, 0.0));
    // Conjugation relation for negative orders.
    for (int l = 1; l <= 4; ++l)
        for (int m = 1; m <= l; ++m) {
            const cdouble a = sph_harm(l, -m, 0.7, 2.1), b = sph_harm(l, m, 0.7, 2.1);
            CHECK(std::abs(a - ((m % 2) ? -1.0 : 1.0) * std::conj(b)) < 1e-14);
        }
}

TEST_CASE("spherical harmonics are orthonormal on a product grid") {
    QuadratureRule g = gauss_legendre(24);
    const int nphi = 32;
    auto inner = [&](int l, int m, int lp, int mp) {
        cdouble s = 0.0;
        for (std::size_t a = 0; a < g.nodes.size(); ++a) {
            const double th = std::acos(g.nodes[a]);
            for (int b = 0; b < nphi; ++b) {
                const double ph = 2 * kPi * b / nphi;
                s += g.weights[a] * (2 * kPi / nphi) * sph_harm(l, m, th, ph) * std::conj(sph_harm(lp, mp, th, ph));
            }
        }
        return s;
    };
    std::mt19937 rng(7);
    for (int k = 0; k < 40; ++k) {
        const int l = rng() % 6, lp = rng() % 6;
        const int m = static_cast<int>(rng() % (2 * l + 1)) - l, mp = static_cast<int>(rng() % (2 * lp + 1)) - lp;
        const double expect = (l == lp && m == mp) ? 1.0 : 0.0;
        CHECK(std::abs(inner(l, m, lp, mp) - expect) < 1e-10);
    }
}

TEST_CASE("G at z = 0, l = 0 matches the closed form") {
    ModelParams p = testing::with(0.0, 0.0, 1.0, 1.0);
    HarmonicKernel h = compute_G(p, 0, 0.0);
    for (int b = 0; b < 4; ++b) {
        const double s = p.sigma[b];
        const double ref = 2 * kPi * (1 + std::exp(-kPi / s)) / (1 + 1 / (s * s));
        CHECK(h.G(b / 2, b % 2).real() == doctest::Approx(ref).epsilon(1e-13));
        CHECK(h.G(b / 2, b % 2).imag() == 0.0);
    }
}

TEST_CASE("G is real for real z and conjugation symmetric") {
    ModelParams p = testing::with(0.0, 0.0, 6.1, -14.134);
    for (int l = 0; l < 6; ++l) {
        HarmonicKernel h = compute_G(p, l, 0.37);
        CHECK(h.G.imag().norm() == 0.0);
    }
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> Z(-3, 3);
    for (int k = 0; k < 50; ++k) {
        const cdouble z(Z(rng), Z(rng));
        const int l = static_cast<int>(rng() % 8);
        HarmonicKernel a = compute_G(p, l, z), b = compute_G(p, l, std::conj(z));
        CHECK((a.G.conjugate() - b.G).norm() <= 1e-13 * a.G.norm());
    }
}

TEST_CASE("Gprime matches central differences") {
    ModelParams p = testing::with(0.0, 0.0, 2.9, -6.624);
    for (int l : {0, 1, 3}) {
        const cdouble z(0.1, 0.7), h(1e-5, 0.0);
        HarmonicKernel k = compute_G(p, l, z);
        Mat2c fd = (compute_G(p, l, z + h).G - compute_G(p, l, z - h).G) / (2.0 * h);
        CHECK((fd - k.Gprime).norm() <= 1e-8 * k.Gprime.norm());
    }
}

TEST_CASE("node doubling changes G below 1e-12 relative") {
    ModelParams p = testing::with(0.0, 0.0, 6.1, -14.134);
    const QuadratureRule& r1 = default_rule();
    QuadratureRule r2 = angular_rule(2 * kDefaultQuadratureNodes);
    double worst = 0.0;
    for (int l = 0; l <= 15; ++l)
        for (cdouble z : {cdouble(0, 0), cdouble(0, 10), cdouble(-3, 6), cdouble(7, -7), cdouble(10, 0), cdouble(-10, 0)}) {
            Mat2c a = compute_G(p, l, z, r1).G, b = compute_G(p, l, z, r2).G;
            worst = std::max(worst, (a - b).norm() / b.norm());
        }
    CHECK(worst < 1e-12);
}

}
