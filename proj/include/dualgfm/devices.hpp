#pragma once

#include <complex>
#include <stdexcept>

namespace dualgfm {

struct ParameterError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PowerPair {
    double p = 0.0;
    double q = 0.0;
};

// Bus power injections of the lossy machine model, device base.
PowerPair machine_power_lossy(double e, double v, double delta, double theta,
                              double r_a, double x_d_t);

// Lossless limit (r_a = 0).
PowerPair machine_power_lossless(double e, double v, double delta, double theta,
                                 double x_d_t);

// Resistive dual (x'_d = 0), r_a != 0.
PowerPair dual_power_resistive(double e, double v, double delta, double theta, double r_a);

// Dual grid-forming interface, K = -1/r_a > 0.
PowerPair dual_gfm_power(double e, double v, double delta, double theta, double K);

struct ComplexFrequency {
    double rho = 0.0;
    double omega = 0.0;
    std::complex<double> eta() const { return {rho, omega}; }
};

struct ComplexFrequencyResult {
    ComplexFrequency eta;
    std::complex<double> e_dot;  // d/dt of e*exp(j delta)
};

ComplexFrequencyResult complex_frequency(double e, double rho, double omega, double delta = 0.0);

struct PllState {
    double theta_f = 0.0;  // filtered bus angle, rad
    double t_filter = 0.02;
    double omega_ref = 1.0;
    // engine scaling: rad/s of in-frame drift per pu of frequency deviation
    double omega_base = 1.0;
    // frequency estimate freezes (holds omega_ref) below this bus voltage
    double v_freeze = 0.0;
};

struct PllRates {
    double theta_f_dot = 0.0;
    double omega_est = 0.0;  // pu
};

PllRates pll_derivatives(const PllState& pll, double theta_bus, double v_bus = 1.0);

// gain -> washout -> two lead-lag stages -> saturation
struct PssState {
    double x_w = 0.0;
    double x_1 = 0.0;
    double x_2 = 0.0;
    double gain = 2.0;
    double t_washout = 5.0;
    double t1 = 0.3, t2 = 0.1, t3 = 0.3, t4 = 0.1;
    double lim = 0.1;  // symmetric output limits, pu
    bool enabled = false;
    // input selector: reactive power (default), active power, rho, or
    // PLL frequency deviation
    enum class Input { Q, P, Rho, OmegaDev } input = Input::Q;
    // output placement: additive in the delta equation (default) or on the
    // omega reference of the reactive controller
    enum class Place { DeltaEq, QrefEq } place = Place::DeltaEq;
};

struct PssRates {
    double x_w_dot = 0.0, x_1_dot = 0.0, x_2_dot = 0.0;
};

double pss_output(const PssState& pss, double input_signal);
PssRates pss_derivatives(const PssState& pss, double input_signal);

struct MachineDevice {
    int bus = 0;
    double rating = 100.0;  // MVA; device pu <-> system pu conversion

    // states
    double delta = 0.0;  // rotor angle, rad
    double omega = 1.0;  // pu
    double eq_t = 1.0;   // internal transient emf e = e'_q, pu
    double p_m = 0.0;    // pu
    double v_f = 0.0;    // pu

    // parameters
    double M = 10.0;  // mechanical starting time, s
    double D = 0.0;
    double r_a = 0.0;
    double x_d = 1.0;
    double x_d_t = 0.3;
    double T_d0_t = 8.0;
    double T_m = 2.0;
    double R = 0.05;
    double K_r = 20.0;
    double T_r = 0.2;
    double omega_ref = 1.0;
    double p_m_o = 0.0;    // governor set point (back-computed at init)
    double v_ref = 1.0;    // exciter set point (back-computed at init)
    bool gov_enabled = true;
    bool avr_enabled = true;

    PowerPair power(double v, double theta) const {
        return machine_power_lossy(eq_t, v, delta, theta, r_a, x_d_t);
    }
    double i_d(double v, double theta) const {
        return (eq_t - v * std::cos(delta - theta)) / x_d_t;
    }
};

struct SwingRates {
    double delta_dot = 0.0;
    double omega_dot = 0.0;
};
SwingRates swing_derivatives(const MachineDevice& dev, double p);

double governor_derivative(const MachineDevice& dev);

struct AvrRates {
    double e_dot = 0.0;
    double v_f_dot = 0.0;
};
AvrRates avr_derivatives(const MachineDevice& dev, double v, double theta);

struct DualGfmDevice {
    int bus = 0;
    double rating = 100.0;

    // states
    double e = 1.0;      // internal emf magnitude, pu (> 0)
    double rho = 0.0;    // instantaneous bandwidth, pu
    double delta = 0.0;  // internal angle, rad, synchronous frame
    double p_ref = 0.0;
    double q_ref = 0.0;
    PllState pll;
    PssState pss;

    // parameters
    double K = 0.1;     // virtual conductance gain = -1/r_a, device base
    double M_t = 30.0;  // virtual inertia, s
    double D_t = 20.0;
    double T_m_t = 2.0;
    double R_t = 0.05;
    double K_q = 10.0;
    double T_q = 5.0;
    double K_r_t = 40.0;
    double T_r_t = 1.0;
    double omega_ref = 1.0;
    double rho_ref = 0.0;        // identically zero
    double p_ref_o = 0.0;        // converter power set point
    double omega_set = 1.0;      // frequency set point of Eq-17b (back-computed)
    bool perfect_tracking = false;

    double u() const;  // ln(e); throws DomainError when e <= 0
    double delta_r() const { return K_q * q_ref; }
    double K_r_t_prime() const { return K_r_t / K_q; }
    PowerPair power(double v, double theta) const {
        return dual_gfm_power(e, v, delta, theta, K);
    }
};

struct DualSwingRates {
    double e_dot = 0.0;
    double rho_dot = 0.0;
};
DualSwingRates dual_swing_derivatives(const DualGfmDevice& dev, double p_tilde);

double dual_governor_derivative(const DualGfmDevice& dev);

struct DualReactiveRates {
    double delta_dot = 0.0;
    double q_ref_dot = 0.0;
};
// omega_meas is the PLL bus-frequency estimate; pss_out adds to the omega
// reference input (zero when the stabilizer is placed on the delta equation).
DualReactiveRates dual_reactive_derivatives(const DualGfmDevice& dev, double q_tilde,
                                            double omega_meas, double pss_out = 0.0);

struct DualReactiveEquivRates {
    double delta_dot = 0.0;
    double delta_r_dot = 0.0;
};
// Rewritten form in (delta, delta_r = K_q q_ref).
DualReactiveEquivRates dual_reactive_equiv_form(const DualGfmDevice& dev, double delta_r,
                                                double q_tilde, double omega_meas);

}  // namespace dualgfm
