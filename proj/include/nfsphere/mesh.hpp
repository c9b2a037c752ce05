// Geodesic icosahedral meshes of the unit sphere and the finite-difference
// surface Laplacian on their centroids.
#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace nfs {

using Vec3 = Eigen::Vector3d;
using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct SphereMesh {
    int refinement = 0;
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<Vec3> centroids;
    std::vector<double> areas;
    std::vector<std::array<int, 3>> neighbors;

    int size() const { return static_cast<int>(triangles.size()); }
};

inline constexpr int kMaxRefinement = 7;

// Icosahedron with one vertex at +z (and its antipode at -z), refined n times.
SphereMesh build_mesh(int n);

// Arc length between unit vectors; throws std::domain_error for non-unit input.
double great_circle(const Vec3& a, const Vec3& b);

// Area of the spherical triangle abc by L'Huilier's formula.
double spherical_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

struct DiscreteLaplacian {
    SpMat matrix;
    std::vector<double> mean_dist;
    std::vector<std::array<double, 3>> weights;  // aligned with mesh.neighbors
};

DiscreteLaplacian discrete_laplacian(const SphereMesh& mesh);

struct EigenTestResult {
    int l = 0;
    int m = 0;
    double quotient = 0.0;
    double error_norm = 0.0;
};

// Solves D U = -Y with a zero area-weighted mean constraint; the
// factorisation is reused across right-hand sides.
class LaplaceSolver {
public:
    LaplaceSolver(const SphereMesh& mesh, const DiscreteLaplacian& lap);
    ~LaplaceSolver();
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
    EigenTestResult eigentest(int l, int m) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

EigenTestResult laplace_eigentest(const SphereMesh& mesh, int l, int m);

// Y_l^m sampled at the centroids.
Eigen::VectorXcd sample_harmonic(const SphereMesh& mesh, int l, int m);

double area_inner(const SphereMesh& mesh, const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// Text dump: "m n", m lines "x y z area", m lines of neighbor indices.
void write_mesh(std::ostream& os, const SphereMesh& mesh);

}  // namespace nfs
