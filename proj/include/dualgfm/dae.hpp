#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dualgfm/devices.hpp"
#include "dualgfm/jacobian.hpp"
#include "dualgfm/network.hpp"

namespace dualgfm {

struct SystemState {
    Vector x;  // differential states, device order
    Vector y;  // algebraic: [v_1, theta_1, v_2, theta_2, ...]
    double t = 0.0;
};

struct SolverConfig {
    double dt = 0.005;
    double t_stop = 10.0;
    double newton_tol = 1e-8;
    int max_newton = 15;
    double fd_step = 1e-7;
    JacobianMode jacobian_mode = JacobianMode::Auto;
    double max_update = 0.5;  // Newton update clamp, max-norm
    int max_halvings = 4;
};

struct Event {
    enum class Kind { LoadScale, FaultApply, FaultClear, DeviceTrip };
    double t = 0.0;
    Kind kind = Kind::LoadScale;
    int bus = 0;       // LoadScale / FaultApply / FaultClear
    double factor = 1.0;
    double g_fault = 1e4;
    double b_fault = 0.0;
    int device = -1;   // DeviceTrip
};

struct EventError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StepError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EventLogEntry {
    double t = 0.0;
    std::string description;
};

struct SimResult {
    std::vector<double> time;
    Eigen::MatrixXd x;  // one row per step
    Eigen::MatrixXd y;
    std::vector<EventLogEntry> events;
    bool complete = false;
    std::vector<std::string> state_names;
    std::vector<std::string> bus_names;
};

// Per-device observables derived from a state snapshot.
struct DeviceOutput {
    std::string name;
    bool is_gfm = false;
    double omega_est = 1.0;  // PLL estimate (gfm) or rotor speed (machine), pu
    double p = 0.0;          // injection, device base
    double q = 0.0;
};

struct EquilibriumInfo {
    double delta_omega = 0.0;  // common frequency deviation, pu
    double residual = 0.0;
    int iterations = 0;
};

// The assembled differential-algebraic grid model: device dynamics plus
// network current balance on the dynamic admittance matrix (loads folded in
// as constant shunt admittances at the power-flow voltage).
class GridSystem {
  public:
    GridSystem(NetworkCase cs, std::vector<MachineDevice> machines,
               std::vector<DualGfmDevice> gfms);

    int n_diff() const { return n_diff_; }
    int n_alg() const { return 2 * cs_.size(); }
    int n_bus() const { return cs_.size(); }
    double omega_base() const { return omega_base_; }
    const NetworkCase& network() const { return cs_; }
    const AdmittanceMatrix& dynamic_ybus() const { return ybus_dyn_; }
    const std::vector<MachineDevice>& machines() const { return machines_; }
    const std::vector<DualGfmDevice>& gfms() const { return gfms_; }
    const PowerFlowResult& powerflow() const { return pf_; }

    // Builds the PF-anchored initial guess: classical machine initialization
    // and the closed-form dual-GFM inversion, set points back-computed so the
    // power-flow point balances every controller.
    SystemState initial_guess(bool common_gfm_omega_set = false);

    // f stacks every device derivative, g the per-bus power balance.
    void residuals(const Vector& x, const Vector& y, Vector& f, Vector& g) const;

    // g only (algebraic re-solve after events).
    void algebraic_residual(const Vector& x, const Vector& y, Vector& g) const;

    std::vector<std::string> state_names() const;
    std::vector<DeviceOutput> device_outputs(const Vector& x, const Vector& y) const;

    void apply_event(const Event& ev);       // admittance edit only
    void mark_fault_snapshot(const Vector& y);
    const std::optional<Vector>& fault_snapshot() const { return fault_y_; }

    // true when a step landed on an invalid branch (gfm emf <= 0)
    bool invalid_state(const Vector& x) const;

    int gfm_offset(int k) const { return gfm_off_[k]; }
    int machine_offset(int k) const { return mach_off_[k]; }

  private:
    void sync_machine(MachineDevice& m, const Vector& x, int off) const;
    void sync_gfm(DualGfmDevice& d, const Vector& x, int off) const;

    NetworkCase cs_;
    std::vector<MachineDevice> machines_;
    std::vector<DualGfmDevice> gfms_;
    std::vector<int> mach_off_, gfm_off_;
    int n_diff_ = 0;
    double omega_base_ = 1.0;
    AdmittanceMatrix ybus_dyn_;
    std::vector<Complex> load_admittance_;  // current per-bus load shunt
    std::vector<Complex> fault_shunt_;      // applied fault per bus
    std::optional<Vector> fault_y_;         // algebraic solution before fault
    PowerFlowResult pf_;
};

// Full Newton on [f - drift; g; closure] with the common frequency deviation
// as an unknown. Systems containing a dual-GFM anchor the absolute angle, so
// the closure fixes the deviation to zero; machine-only systems pin the slack
// angle instead and the deviation carries the droop-shared offset.
SystemState solve_equilibrium(GridSystem& sys, const SystemState& guess,
                              const SolverConfig& cfg = {}, EquilibriumInfo* info = nullptr);

// One implicit-trapezoidal step; throws StepError on Newton failure.
SystemState trapezoidal_step(const GridSystem& sys, const SystemState& state, double dt,
                             const SolverConfig& cfg);

// Admittance edit plus algebraic re-solve with frozen differential states.
SystemState handle_event(GridSystem& sys, const SystemState& state, const Event& ev,
                         const SolverConfig& cfg);

SimResult run_simulation(GridSystem& sys, const SystemState& initial,
                         std::vector<Event> events, const SolverConfig& cfg);

}  // namespace dualgfm
