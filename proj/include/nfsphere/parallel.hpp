// Serial and OpenMP variants of the hot kernels. The serial versions are the
// references the parallel ones are tested and benchmarked against.
#pragma once

#include <functional>

#include "nfsphere/kernels.hpp"
#include "nfsphere/mesh.hpp"

namespace nfs {

enum class Exec { Serial, Parallel };

// y = A x for a row-major sparse matrix.
void spmv(const SpMat& A, const Eigen::VectorXd& x, Eigen::VectorXd& y, Exec exec);

// Direct centroid quadrature of the delayed synaptic input
//   out_a(j) = sum_b sum_nu J_ab(r_j . r_nu) S(u_b(r_nu, t - tau_{j nu})) |Omega_nu|
// with u given as a function of (population, centroid index, time).
// O(m^2) evaluations of the history; used as an oracle.
using HistoryFn = std::function<double(int pop, int nu, double t)>;
void direct_quadrature(const SphereMesh& mesh, const ModelParams& p, const HistoryFn& u, double t,
                       Eigen::VectorXd& out_e, Eigen::VectorXd& out_i, Exec exec);

int max_threads();
void set_threads(int n);

}  // namespace nfs
