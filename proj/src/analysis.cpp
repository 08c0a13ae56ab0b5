#include "dualgfm/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>
#include <stdexcept>

namespace dualgfm {

Metrics compute_metrics(const GridSystem& sys, const SimResult& result,
                        const MetricBands& bands) {
    if (!result.complete) throw std::runtime_error("compute_metrics: incomplete result");
    const int rows = static_cast<int>(result.time.size());
    const int ndev = static_cast<int>(sys.machines().size() + sys.gfms().size());
    const int nbus = sys.n_bus();

    // per-step device frequency estimates
    Eigen::MatrixXd freq(rows, ndev);
    for (int r = 0; r < rows; ++r) {
        const auto outs = sys.device_outputs(result.x.row(r), result.y.row(r));
        for (int d = 0; d < ndev; ++d) freq(r, d) = outs[d].omega_est;
    }

    Metrics m;
    const double omega_ref = sys.network().omega_ref;
    double worst = 0.0;
    for (int r = 0; r < rows; ++r)
        for (int d = 0; d < ndev; ++d)
            if (std::abs(freq(r, d) - omega_ref) > std::abs(worst)) {
                worst = freq(r, d) - omega_ref;
                m.freq_extremum = freq(r, d);
            }
    if (rows > 0 && ndev == 0) m.freq_extremum = omega_ref;

    for (int d = 0; d < ndev; ++d)
        m.steady_state_freq_dev =
            std::max(m.steady_state_freq_dev, std::abs(omega_ref - freq(rows - 1, d)));

    for (int r = 0; r < rows; ++r)
        for (int b = 0; b < nbus; ++b)
            m.max_voltage_dev = std::max(
                m.max_voltage_dev, std::abs(result.y(r, 2 * b) - result.y(0, 2 * b)));

    // settling: last time any monitored signal leaves its band around the
    // final value
    double last_exit = 0.0;
    for (int r = 0; r < rows; ++r) {
        bool outside = false;
        for (int d = 0; d < ndev && !outside; ++d)
            outside = std::abs(freq(r, d) - freq(rows - 1, d)) > bands.freq;
        for (int b = 0; b < nbus && !outside; ++b)
            outside = std::abs(result.y(r, 2 * b) - result.y(rows - 1, 2 * b)) > bands.voltage;
        if (outside) last_exit = result.time[r];
    }
    m.settling_time = last_exit;
    m.settled = last_exit < result.time.back();

    for (size_t k = 0; k < sys.gfms().size(); ++k)
        m.rho_final_max = std::max(
            m.rho_final_max,
            std::abs(result.x(rows - 1, sys.gfm_offset(static_cast<int>(k)) + 1)));
    return m;
}

Eigen::MatrixXd linearize(const GridSystem& sys, const SystemState& equilibrium,
                          double rel_step) {
    const int nx = sys.n_diff();
    const int ny = sys.n_alg();
    Vector f0, g0;
    sys.residuals(equilibrium.x, equilibrium.y, f0, g0);

    Eigen::MatrixXd fx(nx, nx), fy(nx, ny), gx(ny, nx), gy(ny, ny);
    Vector fp, gp, fm, gm;
    for (int k = 0; k < nx; ++k) {
        const double h = rel_step * std::max(1.0, std::abs(equilibrium.x(k)));
        Vector xp = equilibrium.x, xm = equilibrium.x;
        xp(k) += h;
        xm(k) -= h;
        sys.residuals(xp, equilibrium.y, fp, gp);
        sys.residuals(xm, equilibrium.y, fm, gm);
        fx.col(k) = (fp - fm) / (2.0 * h);
        gx.col(k) = (gp - gm) / (2.0 * h);
    }
    for (int k = 0; k < ny; ++k) {
        const double h = rel_step * std::max(1.0, std::abs(equilibrium.y(k)));
        Vector yp = equilibrium.y, ym = equilibrium.y;
        yp(k) += h;
        ym(k) -= h;
        sys.residuals(equilibrium.x, yp, fp, gp);
        sys.residuals(equilibrium.x, ym, fm, gm);
        fy.col(k) = (fp - fm) / (2.0 * h);
        gy.col(k) = (gp - gm) / (2.0 * h);
    }

    Eigen::FullPivLU<Eigen::MatrixXd> lu(gy);
    if (!lu.isInvertible())
        throw std::runtime_error("linearize: singular algebraic Jacobian g_y");
    return fx - fy * lu.solve(gx);
}

Spectrum eigenvalues(const Eigen::MatrixXd& A) {
    if (A.rows() != A.cols()) throw std::invalid_argument("eigenvalues: non-square matrix");
    if (!A.allFinite()) throw std::invalid_argument("eigenvalues: non-finite matrix");
    Eigen::EigenSolver<Eigen::MatrixXd> es(A, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigenvalues: QR iteration did not converge");
    Spectrum sp;
    const auto& ev = es.eigenvalues();
    for (int i = 0; i < ev.size(); ++i) {
        const std::complex<double> l = ev(i);
        sp.eigenvalues.push_back(l);
        const double mag = std::abs(l);
        sp.damping.push_back(mag > 0.0 ? -l.real() / mag : 1.0);
    }
    return sp;
}

}  // namespace dualgfm
