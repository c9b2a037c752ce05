#include "nfsphere/normalform.hpp"

#include <cmath>
#include <map>

namespace nfs {

Generators generators(int l, double theta_inc, double phi, double psi) {
    if (l < 1) throw std::invalid_argument("generators need l >= 1");
    const int n = 2 * l + 1;
    Generators g;
    g.inv = MatXc::Identity(n, n) * ((l % 2) ? -1.0 : 1.0);
    g.psi = MatXc::Identity(n, n) * std::polar(1.0, psi);
    g.phi = MatXc::Zero(n, n);
    g.theta = MatXc::Identity(n, n);
    for (int m = -l; m <= l; ++m) {
        const int j = idx(l, m);
        g.phi(j, j) = std::polar(1.0, m * phi);
        if (m > -l) g.theta(j - 1, j) = -0.5 * std::sqrt((l + m) * (l - m + 1.0)) * theta_inc;
        if (m < l) g.theta(j + 1, j) = 0.5 * std::sqrt((l - m) * (l + m + 1.0)) * theta_inc;
    }
    return g;
}

VecXc reflect(const VecXc& z) { return z.reverse(); }

VecXc zhat(const VecXc& z) {
    const int l = static_cast<int>(z.size() - 1) / 2;
    VecXc h(z.size());
    for (int m = -l; m <= l; ++m) h(idx(l, m)) = ((m % 2) ? -1.0 : 1.0) * std::conj(z(idx(l, -m)));
    return h;
}

cdouble pairing(const VecXc& z) {
    const int l = static_cast<int>(z.size() - 1) / 2;
    cdouble s = z(idx(l, 0)) * z(idx(l, 0));
    for (int m = 1; m <= l; ++m) s += 2.0 * ((m % 2) ? -1.0 : 1.0) * z(idx(l, m)) * z(idx(l, -m));
    return s;
}

namespace {

// Accessor by order m, with conjugate and modulus helpers.
struct Z {
    const VecXc& v;
    int l;
    cdouble operator()(int m) const { return v(m + l); }
    cdouble c(int m) const { return std::conj(v(m + l)); }
    double a(int m) const { return std::norm(v(m + l)); }
};

const double r2 = std::sqrt(2.0);
const double r6 = std::sqrt(6.0);
const double r15 = std::sqrt(15.0);
const double r30 = std::sqrt(30.0);

cdouble C_m2(const Z& z) {
    return -r6 * z(-2) * (2.0 / 3.0 * z.a(0) + z.a(1) + z.a(2)) + z(-1) * z(-1) * z.c(0) +
           z(-1) * z(0) * z.c(1) + 1.0 / r6 * z(0) * z(0) * z.c(2);
}

cdouble C_m1(const Z& z) {
    return -std::sqrt(1.5) * z(-1) * (z.a(-1) + z.a(0) / 3.0 + z.a(1) + 2.0 * z.a(2)) +
           std::sqrt(2.0 / 3.0) * z(0) * z(0) * z.c(1) + z(0) * z(1) * z.c(2) + z(-2) * z(1) * z.c(0) +
           2.0 * z(-2) * z(0) * z.c(-1);
}

// Only the leading term of the middle component is available.
cdouble C_0(const Z& z) {
    return -1.0 / r6 * z(0) * (4.0 * z.a(-2) + z.a(-1) + 3.0 * z.a(0) + z.a(1) + 4.0 * z.a(2));
}

cdouble Q_m3(const Z& z) {
    return 5.0 * z(-3) * (5 * z.a(-3) + 5 * z.a(-2) - z.a(-1) - 4 * z.a(0) - 5 * z.a(1) - 5 * z.a(2) - 8 * z.a(3)) +
           10.0 * z(0) * z(0) * z.c(3) - 15.0 * z(1) * z(-1) * z.c(3) + 15.0 * z(2) * z(-2) * z.c(3) +
           2 * r15 * z(-1) * z(-1) * z.c(1) + 5 * r15 * z(-2) * z(-2) * z.c(-1) + 5 * r2 * z(0) * z(-1) * z.c(2) +
           5 * r2 * z(0) * z(-2) * z.c(1) + 15 * r2 * z(-2) * z(-1) * z.c(0);
}

cdouble Q_m2(const Z& z) {
    return 5.0 * z(-2) * (5 * z.a(-3) + 3 * z.a(-1) - 3 * z.a(1) - 8 * z.a(2) - 5 * z.a(3)) +
           4 * r30 * z(-1) * z(0) * z.c(1) + 25.0 * z(1) * z(-1) * z.c(2) + 15.0 * z(3) * z(-3) * z.c(2) +
           10 * r15 * z(-1) * z(-3) * z.c(-2) + 3 * r30 * z(-1) * z(-1) * z.c(0) + 5 * r2 * z(1) * z(-3) * z.c(0) +
           5 * r2 * z(0) * z(1) * z.c(3) + 15 * r2 * z(0) * z(-3) * z.c(-1);
}

cdouble Q_m1(const Z& z) {
    return z(-1) * (-5 * z.a(-3) + 15 * z.a(-2) - 3 * z.a(-1) + 12 * z.a(0) - 16 * z.a(1) - 15 * z.a(2) - 25 * z.a(3)) +
           24.0 * z(0) * z(0) * z.c(1) + 25.0 * z(2) * z(-2) * z.c(1) - 15.0 * z(3) * z(-3) * z.c(1) +
           4 * r15 * z(1) * z(-3) * z.c(-1) + 2 * r15 * z(1) * z(1) * z.c(3) + 5 * r15 * z(-2) * z(-2) * z.c(-3) +
           5 * r2 * z(2) * z(-3) * z.c(0) + 5 * r2 * z(0) * z(2) * z.c(3) + 15 * r2 * z(0) * z(-3) * z.c(-2) +
           6 * r30 * z(-2) * z(0) * z.c(-1) + 4 * r30 * z(-2) * z(1) * z.c(0) + 4 * r30 * z(1) * z(0) * z.c(2);
}

cdouble Q_0(const Z& z) {
    return z(0) * (-20 * z.a(-3) + 12 * z.a(-1) - 12 * z.a(0) + 12 * z.a(1) - 20 * z.a(3)) +
           48.0 * z(1) * z(-1) * z.c(0) + 20.0 * z(3) * z(-3) * z.c(0) + 15 * r2 * z(1) * z(2) * z.c(3) +
           15 * r2 * z(-2) * z(-1) * z.c(-3) + 5 * r2 * z(3) * z(-2) * z.c(1) + 5 * r2 * z(2) * z(-3) * z.c(-1) +
           5 * r2 * z(1) * z(-3) * z.c(-2) + 5 * r2 * z(3) * z(-1) * z.c(2) + 4 * r30 * z(-2) * z(1) * z.c(-1) +
           4 * r30 * z(2) * z(-1) * z.c(1) + 3 * r30 * z(1) * z(1) * z.c(2) + 3 * r30 * z(-1) * z(-1) * z.c(-2);
}

cdouble R_m3(const Z& z) {
    return 3.0 * z(-3) * (3 * z.a(-3) + 3 * z.a(-2) + z.a(-1) - z.a(1) - 2 * z.a(2) - 3 * z.a(3)) +
           3.0 * z(-2) * z(2) * z.c(3) + 3 * r2 * z(0) * z(-2) * z.c(1) + 3 * r2 * z(-2) * z(-1) * z.c(0) +
           r15 * z(-2) * z(-2) * z.c(-1) + r15 * z(1) * z(-2) * z.c(2);
}

// The z0 z-3 term pairs with conj(z_{-1}); a conj(z_1) there would break the
// azimuthal charge of this component.
cdouble R_m2(const Z& z) {
    return z(-2) * (9 * z.a(-3) + 4 * z.a(-2) + 7 * z.a(-1) - 2 * z.a(1) - 4 * z.a(2) - 6 * z.a(3)) +
           3.0 * z(-3) * z(3) * z.c(2) + 3 * r2 * z(0) * z(-3) * z.c(-1) + 3 * r2 * z(1) * z(-3) * z.c(0) +
           5.0 * z(-1) * z(1) * z.c(2) + r30 * z(-1) * z(-1) * z.c(0) + r30 * z(-1) * z(0) * z.c(1) +
           r15 * z(-3) * z(2) * z.c(1) + r15 * z(2) * z(-1) * z.c(3) + 2 * r15 * z(-1) * z(-3) * z.c(-2);
}

cdouble R_m1(const Z& z) {
    return z(-1) * (3 * z.a(-3) + 7 * z.a(-2) + z.a(-1) + 6 * z.a(0) - z.a(1) - 2 * z.a(2) - 3 * z.a(3)) +
           6.0 * z(0) * z(0) * z.c(1) + 3 * r2 * z(0) * z(-3) * z.c(-2) + 3 * r2 * z(0) * z(2) * z.c(3) +
           2 * r30 * z(-2) * z(0) * z.c(-1) + r30 * z(-2) * z(1) * z.c(0) + r30 * z(0) * z(1) * z.c(2) +
           r15 * z(-2) * z(-2) * z.c(-3) + r15 * z(-2) * z(3) * z.c(2) + 5.0 * z(-2) * z(2) * z.c(1);
}

cdouble R_0(const Z& z) {
    return 6.0 * z(0) * (z.a(-1) + z.a(1)) + 3 * r2 * z(-3) * z(1) * z.c(-2) + 3 * r2 * z(-1) * z(3) * z.c(2) +
           3 * r2 * z(1) * z(2) * z.c(3) + 3 * r2 * z(-2) * z(-1) * z.c(-3) + 12.0 * z(1) * z(-1) * z.c(0) +
           r30 * z(-2) * z(1) * z.c(-1) + r30 * z(-1) * z(2) * z.c(1) + r30 * z(1) * z(1) * z.c(2) +
           r30 * z(-1) * z(-1) * z.c(-2);
}

using Comp = cdouble (*)(const Z&);

// Negative-order components are given; positive ones follow by reflection.
VecXc assemble(const VecXc& zv, int l, const std::vector<Comp>& neg) {
    if (zv.size() != 2 * l + 1) throw std::invalid_argument("state has wrong length for this degree");
    VecXc zr = reflect(zv);
    Z z{zv, l}, zt{zr, l};
    VecXc out(2 * l + 1);
    for (int k = 0; k <= l; ++k) {
        const int m = k - l;  // -l .. 0
        out(idx(l, m)) = neg[k](z);
        if (m != 0) out(idx(l, -m)) = neg[k](zt);
    }
    return out;
}

}  // namespace

VecXc cubic_C(const VecXc& z) { return assemble(z, 2, {C_m2, C_m1, C_0}); }
VecXc cubic_Q(const VecXc& z) { return assemble(z, 3, {Q_m3, Q_m2, Q_m1, Q_0}); }
VecXc cubic_R(const VecXc& z) { return assemble(z, 3, {R_m3, R_m2, R_m1, R_0}); }

VecXc nf_rhs(const VecXc& z, const NormalFormCoefficients& c) {
    const int l = c.l;
    if (l < 0 || l > 3) throw std::invalid_argument("normal form available for l = 0..3");
    if (z.size() != 2 * l + 1) throw std::invalid_argument("state length does not match degree");
    if (c.g.size() != static_cast<std::size_t>(l == 0 ? 1 : l + 1))
        throw std::invalid_argument("coefficient count does not match degree");
    VecXc out = c.mu * z + c.g[0] * z * z.squaredNorm();
    if (l >= 1) out += c.g[1] * zhat(z) * pairing(z);
    if (l == 2) out += c.g[2] * cubic_C(z);
    if (l == 3) out += c.g[2] * cubic_Q(z) + c.g[3] * cubic_R(z);
    return out;
}

const std::vector<CoefficientFormula>& coefficient_formulas(int l) {
    static const std::vector<CoefficientFormula> f0 = {
        {"g01", 1.0 / (8 * kPi), 1, {{0, 1}}, {{0, 2}}},
    };
    static const std::vector<CoefficientFormula> f1 = {
        {"g11", 1.0 / (20 * kPi), 3, {{2, 3}}, {{0, 5}, {2, 1}}},
        // The Q_2(0) weight is +6; a direct projection of the cubic field
        // onto Y_1^m gives that sign.
        {"g12", 1.0 / (40 * kPi), 3, {{0, 5}, {2, -2}}, {{2, 6}}},
    };
    static const std::vector<CoefficientFormula> f2 = {
        {"g21", 1.0 / (196 * kPi), 35, {{4, 35}}, {{0, 49}, {2, 20}, {4, 1}}},
        {"g22", 1.0 / (392 * kPi), 35, {{0, 49}, {2, -10}, {4, -4}}, {{2, 30}, {4, 40}}},
        {"g23", 5.0 / (98 * kPi) * std::sqrt(1.5), 0, {{2, -1}, {4, 1}}, {{2, 1}, {4, -1}}},
    };
    static const std::vector<CoefficientFormula> f3 = {
        {"g31", 1.0 / (56628 * kPi), 12243, {{2, 6292}, {4, 351}, {6, 5600}},
         {{0, 14157}, {2, 6292}, {4, -4563}, {6, 8600}}},
        {"g32", 1.0 / (113256 * kPi), 12243, {{0, 14157}, {4, -4914}, {6, 3000}},
         {{2, 12584}, {4, 702}, {6, 11200}}},
        {"g33", 1.0 / (283140 * kPi), 693, {{2, 1573}, {4, -1755}, {6, 875}},
         {{2, 3146}, {4, -3510}, {6, 1750}}},
        {"g34", -1.0 / (56628 * kPi), 462, {{2, 1573}, {4, -936}, {6, -175}},
         {{2, 1573}, {4, -2574}, {6, 1925}}},
    };
    switch (l) {
        case 0: return f0;
        case 1: return f1;
        case 2: return f2;
        case 3: return f3;
        default: throw std::invalid_argument("coefficient formulas exist for l = 0..3");
    }
}

EigenSolution critical_eigen(const ModelParams& p, int l, double omega, const QuadratureRule& rule) {
    EigenSolution e;
    e.l = l;
    e.lambda = cdouble(0.0, omega);
    e.omega = omega;
    e.v = eigenvector(p, l, e.lambda, rule);
    e.residual = (spectral_matrix(p, l, e.lambda, rule).E * e.v).norm();
    return e;
}

namespace {
constexpr double kResonanceTol = 1e-8;

Mat2c checked_Q(const ModelParams& p, int l, cdouble z, const QuadratureRule& rule) {
    SpectralMatrix sm = spectral_matrix(p, l, z, rule);
    if (std::abs(sm.det) < kResonanceTol)
        throw ResonanceError("resonance: det E_" + std::to_string(l) + " vanishes at z = " +
                             std::to_string(z.real()) + "+" + std::to_string(z.imag()) + "i");
    return sm.adjugate * sm.kernel.G / sm.det;
}
}  // namespace

NormalFormResult compute_normal_form(const ModelParams& p, const EigenSolution& eig, bool export_terms,
                                     const QuadratureRule& rule) {
    const int l = eig.l;
    const auto& formulas = coefficient_formulas(l);
    const cdouble iw(0.0, eig.omega);
    SpectralMatrix sm = spectral_matrix(p, l, iw, rule);
    const Vec2c v = eig.v / eig.v.norm();
    if ((sm.E * v).norm() > 1e-8)
        throw std::invalid_argument("eigendata does not satisfy E_l(i omega) v = 0");
    if (std::abs(sm.detprime) < kResonanceTol)
        throw ResonanceError("critical eigenvalue is not simple: derivative of det E_l vanishes");
    for (int lp = 0; lp <= 2 * l + 2; ++lp) {
        if (lp == l) continue;
        if (std::abs(spectral_matrix(p, lp, iw, rule).det) < kResonanceTol)
            throw ResonanceError("resonance: i omega is also a root for degree " + std::to_string(lp));
    }
    const Mat2c M = sm.adjugate / sm.detprime * sm.kernel.G;
    const Vec2c vb = v.conjugate();
    const Vec2c vv = v.cwiseProduct(v);
    const Vec2c vvb = v.cwiseProduct(vb);
    const Vec2c cube = vv.cwiseProduct(vb);
    const double S2 = sigmoid_deriv(p, 2, 0.0);
    const double S3 = sigmoid_deriv(p, 3, 0.0);

    std::map<int, Mat2c> Qw, Q0;
    for (const auto& f : formulas) {
        for (const auto& w : f.at_2iw)
            if (!Qw.count(w.degree)) Qw[w.degree] = checked_Q(p, w.degree, 2.0 * iw, rule);
        for (const auto& w : f.at_0)
            if (!Q0.count(w.degree)) Q0[w.degree] = checked_Q(p, w.degree, 0.0, rule);
    }

    NormalFormResult res;
    res.coeffs.l = l;
    res.coeffs.mu = 0.0;
    for (const auto& f : formulas) {
        Mat2c A = Mat2c::Zero(), B = Mat2c::Zero();
        for (const auto& w : f.at_2iw) A += w.weight * Qw[w.degree];
        for (const auto& w : f.at_0) B += w.weight * Q0[w.degree];
        Vec2c y = f.s3 * S3 * cube + S2 * S2 * (A * vv).cwiseProduct(vb) + S2 * S2 * (B * vvb).cwiseProduct(v);
        // dot() conjugates its left operand, so this is conj(v)^T M y.
        res.coeffs.g.push_back(f.prefactor * v.dot(M * y));
    }
    if (l == 0) res.coeffs.lyapunov_l1 = res.coeffs.g[0].real() / eig.omega;
    if (export_terms) {
        for (auto& [deg, Q] : Qw) res.terms.push_back({"h20", deg, 2.0 * iw, S2 * (Q * vv)});
        for (auto& [deg, Q] : Q0) res.terms.push_back({"h11", deg, 0.0, S2 * (Q * vvb)});
    }
    return res;
}

namespace {
NormalFormCoefficients nfc_checked(const ModelParams& p, const EigenSolution& eig, int l) {
    if (eig.l != l) throw std::invalid_argument("eigendata degree does not match");
    return compute_normal_form(p, eig).coeffs;
}
}  // namespace

NormalFormCoefficients nfc_l0(const ModelParams& p, const EigenSolution& eig) { return nfc_checked(p, eig, 0); }
NormalFormCoefficients nfc_l1(const ModelParams& p, const EigenSolution& eig) { return nfc_checked(p, eig, 1); }
NormalFormCoefficients nfc_l2(const ModelParams& p, const EigenSolution& eig) { return nfc_checked(p, eig, 2); }
NormalFormCoefficients nfc_l3(const ModelParams& p, const EigenSolution& eig) { return nfc_checked(p, eig, 3); }

BranchVerdict branch_stability_l1(cdouble mu, cdouble g11, cdouble g12) {
    const double rm = mu.real(), a = g11.real(), b = g12.real();
    if (a == 0.0 || a + b == 0.0) throw std::domain_error("degenerate l=1 coefficients");
    BranchVerdict v;
    const cdouble rot(-2 * rm * b / a, 2 * rm * g12.imag() / a);
    v.rotating = {0.0, -2 * rm, rot, std::conj(rot)};
    const double st = 2 * rm * b / (a + b);
    v.standing = {0.0, -2 * rm, st, st};
    auto stable = [](const std::vector<cdouble>& ev) {
        for (std::size_t k = 1; k < ev.size(); ++k)
            if (ev[k].real() >= 0) return false;
        return true;
    };
    v.rotating_stable = stable(v.rotating);
    v.standing_stable = stable(v.standing);
    return v;
}

}  // namespace nfs
