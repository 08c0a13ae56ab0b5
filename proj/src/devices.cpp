#include "dualgfm/devices.hpp"

#include <algorithm>
#include <cmath>

namespace dualgfm {

PowerPair machine_power_lossy(double e, double v, double delta, double theta,
                              double r_a, double x_d_t) {
    const double den = r_a * r_a + x_d_t * x_d_t;
    if (den <= 0.0) throw ParameterError("machine_power_lossy: r_a = x'_d = 0");
    const double c = e * v * std::cos(delta - theta) - v * v;
    const double s = e * v * std::sin(delta - theta);
    return {(c * r_a + s * x_d_t) / den, (c * x_d_t - s * r_a) / den};
}

PowerPair machine_power_lossless(double e, double v, double delta, double theta,
                                 double x_d_t) {
    if (x_d_t <= 0.0) throw ParameterError("machine_power_lossless: x'_d <= 0");
    return {e * v * std::sin(delta - theta) / x_d_t,
            (e * v * std::cos(delta - theta) - v * v) / x_d_t};
}

PowerPair dual_power_resistive(double e, double v, double delta, double theta, double r_a) {
    if (r_a == 0.0) throw ParameterError("dual_power_resistive: r_a = 0");
    return {(e * v * std::cos(delta - theta) - v * v) / r_a,
            -e * v * std::sin(delta - theta) / r_a};
}

PowerPair dual_gfm_power(double e, double v, double delta, double theta, double K) {
    return {K * v * v - K * e * v * std::cos(delta - theta),
            K * e * v * std::sin(delta - theta)};
}

ComplexFrequencyResult complex_frequency(double e, double rho, double omega, double delta) {
    if (e <= 0.0) throw DomainError("complex_frequency: e <= 0");
    ComplexFrequencyResult out;
    out.eta = {rho, omega};
    out.e_dot = out.eta.eta() * std::polar(e, delta);
    return out;
}

PllRates pll_derivatives(const PllState& pll, double theta_bus, double v_bus) {
    if (pll.t_filter <= 0.0) throw ParameterError("pll_derivatives: T_pll <= 0");
    PllRates out;
    if (v_bus < pll.v_freeze) {
        // loss of voltage: hold the estimate, stop tracking
        out.theta_f_dot = 0.0;
        out.omega_est = pll.omega_ref;
        return out;
    }
    const double rate = (theta_bus - pll.theta_f) / pll.t_filter;
    out.theta_f_dot = rate;
    out.omega_est = pll.omega_ref + rate / pll.omega_base;
    return out;
}

namespace {

struct PssChain {
    double y_w, y_1, y_2;
};

PssChain pss_chain(const PssState& pss, double input_signal) {
    const double u = pss.gain * input_signal;
    const double y_w = u - pss.x_w;
    const double y_1 = pss.x_1 + (pss.t1 / pss.t2) * (y_w - pss.x_1);
    const double y_2 = pss.x_2 + (pss.t3 / pss.t4) * (y_1 - pss.x_2);
    return {y_w, y_1, y_2};
}

}  // namespace

double pss_output(const PssState& pss, double input_signal) {
    if (pss.lim < 0.0) throw ParameterError("pss_output: negative limit");
    const double y = pss_chain(pss, input_signal).y_2;
    return std::clamp(y, -pss.lim, pss.lim);
}

PssRates pss_derivatives(const PssState& pss, double input_signal) {
    const double u = pss.gain * input_signal;
    const auto c = pss_chain(pss, input_signal);
    return {(u - pss.x_w) / pss.t_washout, (c.y_w - pss.x_1) / pss.t2,
            (c.y_1 - pss.x_2) / pss.t4};
}

SwingRates swing_derivatives(const MachineDevice& dev, double p) {
    if (dev.M <= 0.0) throw ParameterError("swing_derivatives: M <= 0");
    return {dev.omega - dev.omega_ref,
            (dev.p_m - p - dev.D * (dev.omega - dev.omega_ref)) / dev.M};
}

double governor_derivative(const MachineDevice& dev) {
    if (dev.T_m <= 0.0 || dev.R <= 0.0) throw ParameterError("governor: T_m, R > 0");
    return ((dev.omega_ref - dev.omega) / dev.R + dev.p_m_o - dev.p_m) / dev.T_m;
}

AvrRates avr_derivatives(const MachineDevice& dev, double v, double theta) {
    if (dev.T_d0_t <= 0.0 || dev.T_r <= 0.0 || dev.x_d_t <= 0.0)
        throw ParameterError("avr: T'_d0, T_r, x'_d > 0");
    const double i_d = dev.i_d(v, theta);
    return {(dev.v_f - (dev.x_d - dev.x_d_t) * i_d - dev.eq_t) / dev.T_d0_t,
            (dev.K_r * (dev.v_ref - v) - dev.v_f) / dev.T_r};
}

double DualGfmDevice::u() const {
    if (e <= 0.0) throw DomainError("dual-GFM emf must stay positive");
    return std::log(e);
}

DualSwingRates dual_swing_derivatives(const DualGfmDevice& dev, double p_tilde) {
    if (dev.e <= 0.0) throw DomainError("dual_swing: e <= 0");
    if (dev.M_t <= 0.0) throw ParameterError("dual_swing: M_t <= 0");
    return {dev.rho * dev.e,
            (dev.p_ref - p_tilde - dev.D_t * dev.rho) / dev.M_t};
}

double dual_governor_derivative(const DualGfmDevice& dev) {
    if (dev.T_m_t <= 0.0 || dev.R_t < 0.0)
        throw ParameterError("dual_governor: T_m_t > 0, R_t >= 0");
    if (dev.perfect_tracking) {
        const double r_eff = std::max(dev.R_t, 1e-4);
        return (dev.rho_ref - dev.rho) / (r_eff * dev.T_m_t);
    }
    return ((dev.rho_ref - dev.rho) / dev.R_t + dev.p_ref_o - dev.p_ref) / dev.T_m_t;
}

DualReactiveRates dual_reactive_derivatives(const DualGfmDevice& dev, double q_tilde,
                                            double omega_meas, double pss_out) {
    if (dev.T_q <= 0.0 || dev.T_r_t <= 0.0)
        throw ParameterError("dual_reactive: T_q, T_r_t > 0");
    // distributed product keeps both controller forms bit-identical under
    // delta_r = K_q * q_ref
    return {(dev.K_q * dev.q_ref - dev.K_q * q_tilde - dev.delta) / dev.T_q,
            (dev.K_r_t * (dev.omega_set + pss_out - omega_meas) - dev.q_ref) / dev.T_r_t};
}

DualReactiveEquivRates dual_reactive_equiv_form(const DualGfmDevice& dev, double delta_r,
                                                double q_tilde, double omega_meas) {
    if (dev.K_q == 0.0) throw ParameterError("dual_reactive_equiv_form: K_q = 0");
    if (dev.T_q <= 0.0 || dev.T_r_t <= 0.0)
        throw ParameterError("dual_reactive_equiv_form: T_q, T_r_t > 0");
    return {(delta_r - dev.K_q * q_tilde - dev.delta) / dev.T_q,
            (dev.K_r_t_prime() * (dev.omega_set - omega_meas) - delta_r) / dev.T_r_t};
}

}  // namespace dualgfm
