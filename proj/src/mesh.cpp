#include "nfsphere/mesh.hpp"

#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>

#include <Eigen/SparseLU>

#include "nfsphere/harmonics.hpp"

namespace nfs {

namespace {

void icosahedron(std::vector<Vec3>& V, std::vector<std::array<int, 3>>& F) {
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    V = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
         {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
    F = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},  {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
         {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
         {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
    for (auto& v : V) v.normalize();
    // Rotate vertex 0 onto +z; vertex 3 is its antipode.
    const Vec3 a = V[0], z(0, 0, 1);
    const Eigen::Matrix3d R = Eigen::Quaterniond::FromTwoVectors(a, z).toRotationMatrix();
    for (auto& v : V) v = (R * v).normalized();
}

void subdivide(std::vector<Vec3>& V, std::vector<std::array<int, 3>>& F) {
    std::map<std::pair<int, int>, int> cache;
    auto mid = [&](int a, int b) {
        auto key = std::minmax(a, b);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        V.push_back((V[a] + V[b]).normalized());
        const int id = static_cast<int>(V.size()) - 1;
        cache.emplace(key, id);
        return id;
    };
    std::vector<std::array<int, 3>> out;
    out.reserve(F.size() * 4);
    for (const auto& f : F) {
        const int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
        out.push_back({f[0], ab, ca});
        out.push_back({f[1], bc, ab});
        out.push_back({f[2], ca, bc});
        out.push_back({ab, bc, ca});
    }
    F = std::move(out);
}

double arc(const Vec3& a, const Vec3& b) { return std::acos(std::clamp(a.dot(b), -1.0, 1.0)); }

}  // namespace

double great_circle(const Vec3& a, const Vec3& b) {
    if (std::abs(a.norm() - 1.0) > 1e-10 || std::abs(b.norm() - 1.0) > 1e-10)
        throw std::domain_error("great_circle needs unit vectors");
    return arc(a, b);
}

double spherical_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    const double A = arc(b, c), B = arc(a, c), C = arc(a, b);
    const double s = 0.5 * (A + B + C);
    const double t = std::tan(s / 2) * std::tan((s - A) / 2) * std::tan((s - B) / 2) * std::tan((s - C) / 2);
    return 4.0 * std::atan(std::sqrt(std::max(0.0, t)));
}

SphereMesh build_mesh(int n) {
    if (n < 0 || n > kMaxRefinement) throw std::invalid_argument("mesh refinement must be in 0..7");
    SphereMesh mesh;
    mesh.refinement = n;
    icosahedron(mesh.vertices, mesh.triangles);
    for (int k = 0; k < n; ++k) subdivide(mesh.vertices, mesh.triangles);
    const auto& V = mesh.vertices;
    const std::size_t m = mesh.triangles.size();
    mesh.centroids.resize(m);
    mesh.areas.resize(m);
    std::map<std::pair<int, int>, std::vector<int>> edges;
    for (std::size_t j = 0; j < m; ++j) {
        const auto& f = mesh.triangles[j];
        mesh.centroids[j] = (V[f[0]] + V[f[1]] + V[f[2]]).normalized();
        mesh.areas[j] = spherical_triangle_area(V[f[0]], V[f[1]], V[f[2]]);
        for (int e = 0; e < 3; ++e) edges[std::minmax(f[e], f[(e + 1) % 3])].push_back(static_cast<int>(j));
    }
    std::vector<int> count(m, 0);
    mesh.neighbors.assign(m, {-1, -1, -1});
    for (const auto& [key, ts] : edges) {
        if (ts.size() != 2) throw std::logic_error("mesh edge not shared by exactly two triangles");
        mesh.neighbors[ts[0]][count[ts[0]]++] = ts[1];
        mesh.neighbors[ts[1]][count[ts[1]]++] = ts[0];
    }
    return mesh;
}

DiscreteLaplacian discrete_laplacian(const SphereMesh& mesh) {
    const int m = mesh.size();
    DiscreteLaplacian L;
    L.mean_dist.resize(m);
    L.weights.resize(m);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(4 * m);
    for (int j = 0; j < m; ++j) {
        std::array<double, 3> h{};
        for (int k = 0; k < 3; ++k) h[k] = arc(mesh.centroids[j], mesh.centroids[mesh.neighbors[j][k]]);
        const double hbar = (h[0] + h[1] + h[2]) / 3.0;
        L.mean_dist[j] = hbar;
        double diag = 0.0;
        for (int k = 0; k < 3; ++k) {
            const double w = 4.0 / (3.0 * hbar * h[k]);
            L.weights[j][k] = w;
            diag -= w;
            trips.emplace_back(j, mesh.neighbors[j][k], w);
        }
        trips.emplace_back(j, j, diag);
    }
    L.matrix.resize(m, m);
    L.matrix.setFromTriplets(trips.begin(), trips.end());
    return L;
}

Eigen::VectorXcd sample_harmonic(const SphereMesh& mesh, int l, int m) {
    Eigen::VectorXcd y(mesh.size());
    for (int j = 0; j < mesh.size(); ++j) {
        const Vec3& c = mesh.centroids[j];
        y(j) = sph_harm_xyz(l, m, c.x(), c.y(), c.z());
    }
    return y;
}

double area_inner(const SphereMesh& mesh, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    double s = 0.0;
    for (int j = 0; j < mesh.size(); ++j) s += mesh.areas[j] * a(j) * b(j);
    return s;
}

struct LaplaceSolver::Impl {
    const SphereMesh& mesh;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    explicit Impl(const SphereMesh& m) : mesh(m) {}
};

LaplaceSolver::LaplaceSolver(const SphereMesh& mesh, const DiscreteLaplacian& lap)
    : impl_(std::make_unique<Impl>(mesh)) {
    const int m = mesh.size();
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(lap.matrix.nonZeros() + 2 * m);
    for (int j = 0; j < m; ++j)
        for (SpMat::InnerIterator it(lap.matrix, j); it; ++it) trips.emplace_back(j, it.col(), it.value());
    for (int j = 0; j < m; ++j) {
        trips.emplace_back(j, m, mesh.areas[j]);
        trips.emplace_back(m, j, mesh.areas[j]);
    }
    Eigen::SparseMatrix<double> A(m + 1, m + 1);
    A.setFromTriplets(trips.begin(), trips.end());
    impl_->lu.compute(A);
    if (impl_->lu.info() != Eigen::Success) throw std::runtime_error("constrained Laplacian factorisation failed");
}

LaplaceSolver::~LaplaceSolver() = default;

Eigen::VectorXd LaplaceSolver::solve(const Eigen::VectorXd& rhs) const {
    const int m = impl_->mesh.size();
    Eigen::VectorXd b(m + 1);
    b.head(m) = rhs;
    b(m) = 0.0;
    Eigen::VectorXd x = impl_->lu.solve(b);
    if (impl_->lu.info() != Eigen::Success) throw std::runtime_error("constrained Laplacian solve failed");
    return x.head(m);
}

EigenTestResult LaplaceSolver::eigentest(int l, int m) const {
    if (l < 1) throw std::invalid_argument("eigentest needs l >= 1");
    const auto& mesh = impl_->mesh;
    Eigen::VectorXcd y = sample_harmonic(mesh, l, m);
    Eigen::VectorXd yr = y.real(), yi = y.imag();
    Eigen::VectorXd ur = solve(-yr), ui = solve(-yi);
    const double num = area_inner(mesh, yr, yr) + area_inner(mesh, yi, yi);
    const double den = area_inner(mesh, ur, yr) + area_inner(mesh, ui, yi);
    const double ll = l * (l + 1.0);
    Eigen::VectorXd er = ur - yr / ll, ei = ui - yi / ll;
    EigenTestResult r;
    r.l = l;
    r.m = m;
    r.quotient = num / den;
    r.error_norm = std::sqrt(area_inner(mesh, er, er) + area_inner(mesh, ei, ei));
    return r;
}

EigenTestResult laplace_eigentest(const SphereMesh& mesh, int l, int m) {
    LaplaceSolver solver(mesh, discrete_laplacian(mesh));
    return solver.eigentest(l, m);
}

void write_mesh(std::ostream& os, const SphereMesh& mesh) {
    os << mesh.size() << ' ' << mesh.refinement << '\n' << std::setprecision(17);
    for (int j = 0; j < mesh.size(); ++j) {
        const Vec3& c = mesh.centroids[j];
        os << c.x() << ' ' << c.y() << ' ' << c.z() << ' ' << mesh.areas[j] << '\n';
    }
    for (const auto& nb : mesh.neighbors) os << nb[0] << ' ' << nb[1] << ' ' << nb[2] << '\n';
}

}  // namespace nfs
