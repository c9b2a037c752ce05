#include "nfsphere/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

namespace nfs {

void spmv(const SpMat& A, const Eigen::VectorXd& x, Eigen::VectorXd& y, Exec exec) {
    const Eigen::Index n = A.rows();
    y.resize(n);
    const int* outer = A.outerIndexPtr();
    const int* inner = A.innerIndexPtr();
    const double* val = A.valuePtr();
    auto row = [&](Eigen::Index j) {
        double s = 0.0;
        for (int k = outer[j]; k < outer[j + 1]; ++k) s += val[k] * x(inner[k]);
        y(j) = s;
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (Eigen::Index j = 0; j < n; ++j) row(j);
    } else {
        for (Eigen::Index j = 0; j < n; ++j) row(j);
    }
}

void direct_quadrature(const SphereMesh& mesh, const ModelParams& p, const HistoryFn& u, double t,
                       Eigen::VectorXd& out_e, Eigen::VectorXd& out_i, Exec exec) {
    const int m = mesh.size();
    out_e.setZero(m);
    out_i.setZero(m);
    auto row = [&](int j) {
        double acc[2] = {0.0, 0.0};
        for (int nu = 0; nu < m; ++nu) {
            const double s = std::clamp(mesh.centroids[j].dot(mesh.centroids[nu]), -1.0, 1.0);
            const double lag = t - delay(p, s);
            for (int b = 0; b < 2; ++b) {
                const double v = sigmoid_deriv(p, 0, u(b, nu, lag)) * mesh.areas[nu];
                for (int a = 0; a < 2; ++a) acc[a] += connectivity(p.eta[2 * a + b], p.sigma[2 * a + b], s) * v;
            }
        }
        out_e(j) = acc[0];
        out_i(j) = acc[1];
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (int j = 0; j < m; ++j) row(j);
    } else {
        for (int j = 0; j < m; ++j) row(j);
    }
}

int max_threads() { return omp_get_max_threads(); }
void set_threads(int n) {
    if (n > 0) omp_set_num_threads(n);
}

}  // namespace nfs
