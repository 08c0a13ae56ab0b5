// Times the finite-difference Jacobian kernels (serial reference vs OpenMP)
// on the WSCC dual-GFM system, plus a full trapezoidal-step comparison.
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#else
#include <chrono>
#endif

#include "dualgfm/jacobian.hpp"
#include "dualgfm/scenario.hpp"

using namespace dualgfm;

namespace {

double now_s() {
#ifdef _OPENMP
    return omp_get_wtime();
#else
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
#endif
}

}  // namespace

int main() {
    CaseFile cf = builtin_wscc9(Wscc9Variant::DualGfm);
    GridSystem sys(cf.network, cf.machines, cf.gfms);
    SystemState eq = solve_equilibrium(sys, sys.initial_guess());

    const int nx = sys.n_diff();
    const int ny = sys.n_alg();
    Eigen::VectorXd z(nx + ny);
    z.head(nx) = eq.x;
    z.segment(nx, ny) = eq.y;
    // perturb so the residual is not trivially zero
    z.array() += 1e-3;

    ResidualFn F = [&, nx, ny](const Eigen::VectorXd& zz, Eigen::VectorXd& out) {
        Eigen::VectorXd f1, g1;
        sys.residuals(zz.head(nx), zz.segment(nx, ny), f1, g1);
        out.resize(nx + ny);
        out.head(nx) = f1;
        out.segment(nx, ny) = g1;
    };
    Eigen::VectorXd f0;
    F(z, f0);

    const int reps = 2000;
    Eigen::MatrixXd Js, Jp;

    double t0 = now_s();
    for (int r = 0; r < reps; ++r) fd_jacobian_serial(F, z, f0, Js);
    const double t_serial = now_s() - t0;

    t0 = now_s();
    for (int r = 0; r < reps; ++r) fd_jacobian_parallel(F, z, f0, Jp);
    const double t_parallel = now_s() - t0;

    const bool identical = (Js - Jp).cwiseAbs().maxCoeff() == 0.0;

#ifdef _OPENMP
    const int threads = omp_get_max_threads();
#else
    const int threads = 1;
#endif
    std::printf("system size %d, %d repetitions, %d threads\n", nx + ny, reps, threads);
    std::printf("serial   : %8.3f ms/jacobian\n", 1e3 * t_serial / reps);
    std::printf("parallel : %8.3f ms/jacobian\n", 1e3 * t_parallel / reps);
    std::printf("speedup  : %8.2fx\n", t_serial / t_parallel);
    std::printf("bit-identical results: %s\n", identical ? "yes" : "NO");

    // full step comparison
    SolverConfig cfg;
    SystemState pert = eq;
    pert.x.array() += 1e-4;
    for (auto mode : {JacobianMode::Serial, JacobianMode::Parallel}) {
        cfg.jacobian_mode = mode;
        t0 = now_s();
        SystemState s = pert;
        for (int k = 0; k < 200; ++k) s = trapezoidal_step(sys, s, cfg.dt, cfg);
        const double dt = now_s() - t0;
        std::printf("200 trapezoidal steps (%s): %7.1f ms\n",
                    mode == JacobianMode::Serial ? "serial" : "parallel", 1e3 * dt);
    }
    return identical ? 0 : 1;
}
