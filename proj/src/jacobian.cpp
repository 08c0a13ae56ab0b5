#include "dualgfm/jacobian.hpp"

#include <cmath>

namespace dualgfm {

namespace {

inline void fd_column(const ResidualFn& F, const Eigen::VectorXd& z0,
                      const Eigen::VectorXd& f0, Eigen::MatrixXd& J, double h, int k,
                      Eigen::VectorXd& z, Eigen::VectorXd& f) {
    const double hk = h * std::max(1.0, std::abs(z0(k)));
    z = z0;
    z(k) += hk;
    F(z, f);
    J.col(k) = (f - f0) / hk;
}

}  // namespace

void fd_jacobian_serial(const ResidualFn& F, const Eigen::VectorXd& z0,
                        const Eigen::VectorXd& f0, Eigen::MatrixXd& J, double h) {
    const int n = static_cast<int>(z0.size());
    J.resize(f0.size(), n);
    Eigen::VectorXd z(n), f(f0.size());
    for (int k = 0; k < n; ++k) fd_column(F, z0, f0, J, h, k, z, f);
}

void fd_jacobian_parallel(const ResidualFn& F, const Eigen::VectorXd& z0,
                          const Eigen::VectorXd& f0, Eigen::MatrixXd& J, double h) {
    const int n = static_cast<int>(z0.size());
    J.resize(f0.size(), n);
#pragma omp parallel
    {
        Eigen::VectorXd z(n), f(f0.size());
#pragma omp for schedule(static)
        for (int k = 0; k < n; ++k) fd_column(F, z0, f0, J, h, k, z, f);
    }
}

void fd_jacobian(const ResidualFn& F, const Eigen::VectorXd& z0, const Eigen::VectorXd& f0,
                 Eigen::MatrixXd& J, double h, JacobianMode mode) {
#ifdef _OPENMP
    const bool parallel = (mode == JacobianMode::Parallel) ||
                          (mode == JacobianMode::Auto && z0.size() >= 24);
#else
    const bool parallel = (mode == JacobianMode::Parallel);
#endif
    if (parallel)
        fd_jacobian_parallel(F, z0, f0, J, h);
    else
        fd_jacobian_serial(F, z0, f0, J, h);
}

}  // namespace dualgfm
