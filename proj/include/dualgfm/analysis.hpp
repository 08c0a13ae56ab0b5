#pragma once

#include <complex>
#include <vector>

#include "dualgfm/dae.hpp"

namespace dualgfm {

struct MetricBands {
    double freq = 1e-3;     // pu, around the final value
    double voltage = 0.01;  // pu, around the final value
};

struct Metrics {
    double freq_extremum = 1.0;         // signed worst PLL frequency estimate, pu
    double settling_time = 0.0;         // s, last exit of any monitored band
    bool settled = false;
    double steady_state_freq_dev = 0.0; // max over devices of |omega_ref - omega_est| at t_stop
    double max_voltage_dev = 0.0;       // max |v - v(0)| over buses and time
    double rho_final_max = 0.0;         // max |rho| at t_stop
};

Metrics compute_metrics(const GridSystem& sys, const SimResult& result,
                        const MetricBands& bands = {});

// A = f_x - f_y g_y^{-1} g_x by central finite differences at a solved
// equilibrium; throws on singular g_y.
Eigen::MatrixXd linearize(const GridSystem& sys, const SystemState& equilibrium,
                          double rel_step = 1e-6);

struct Spectrum {
    std::vector<std::complex<double>> eigenvalues;  // 1/s
    std::vector<double> damping;                    // zeta = -Re/|lambda|
};

Spectrum eigenvalues(const Eigen::MatrixXd& A);

}  // namespace dualgfm
