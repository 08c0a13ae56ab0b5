#pragma once

#include <functional>

#include <Eigen/Dense>

namespace dualgfm {

using ResidualFn = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

enum class JacobianMode { Serial, Parallel, Auto };

// Forward-difference Jacobian of F about z0 with F(z0) = f0 already known.
// Column k uses step h * max(1, |z0_k|). Columns are independent; the
// parallel kernel writes disjoint columns and is bit-identical to the
// serial reference for any thread count.
void fd_jacobian_serial(const ResidualFn& F, const Eigen::VectorXd& z0,
                        const Eigen::VectorXd& f0, Eigen::MatrixXd& J, double h = 1e-7);

void fd_jacobian_parallel(const ResidualFn& F, const Eigen::VectorXd& z0,
                          const Eigen::VectorXd& f0, Eigen::MatrixXd& J, double h = 1e-7);

void fd_jacobian(const ResidualFn& F, const Eigen::VectorXd& z0, const Eigen::VectorXd& f0,
                 Eigen::MatrixXd& J, double h = 1e-7, JacobianMode mode = JacobianMode::Auto);

}  // namespace dualgfm
