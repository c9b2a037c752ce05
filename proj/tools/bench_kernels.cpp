// Serial versus OpenMP timings of the hot kernels.
#include <benchmark/benchmark.h>

#include "nfsphere/delaysim.hpp"
#include "nfsphere/parallel.hpp"

using namespace nfs;

namespace {

SimConfig rotating_config(int n) {
    SimConfig c;
    c.params.d_e = 1.0;
    c.params.d_i = 0.1;
    c.params.eta = {2.89, -7.3, 2.89, -7.3};
    c.refinement = n;
    c.history = {{-1, 1, -1, cdouble(0.14, 0.0), 0.734, ModeKind::Field}};
    return c;
}

void BM_apply_delay(benchmark::State& st) {
    const Exec exec = st.range(1) ? Exec::Parallel : Exec::Serial;
    SphereMesh mesh = build_mesh(static_cast<int>(st.range(0)));
    Simulator sim(mesh, rotating_config(mesh.refinement));
    sim.seed();
    Eigen::VectorXd e, i;
    for (auto _ : st) {
        apply_delay(sim.delay_operator(), sim.history(), 1, e, i, exec);
        benchmark::DoNotOptimize(e.data());
    }
}

void BM_spmv(benchmark::State& st) {
    const Exec exec = st.range(1) ? Exec::Parallel : Exec::Serial;
    SphereMesh mesh = build_mesh(static_cast<int>(st.range(0)));
    DiscreteLaplacian L = discrete_laplacian(mesh);
    Eigen::VectorXd x = Eigen::VectorXd::Random(mesh.size()), y(mesh.size());
    for (auto _ : st) {
        spmv(L.matrix, x, y, exec);
        benchmark::DoNotOptimize(y.data());
    }
}

void BM_step(benchmark::State& st) {
    SphereMesh mesh = build_mesh(static_cast<int>(st.range(0)));
    Simulator sim(mesh, rotating_config(mesh.refinement));
    sim.exec = st.range(1) ? Exec::Parallel : Exec::Serial;
    sim.seed();
    for (auto _ : st) sim.step();
}

}  // namespace

BENCHMARK(BM_apply_delay)->ArgsProduct({{2, 3}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_spmv)->ArgsProduct({{3, 5}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_step)->ArgsProduct({{2, 3}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
