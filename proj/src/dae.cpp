#include "dualgfm/dae.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace dualgfm {

namespace {

constexpr int kMachineStates = 5;  // delta, omega, eq_t, p_m, v_f

int gfm_states(const DualGfmDevice& d) { return d.pss.enabled ? 9 : 6; }

double pss_input_signal(const DualGfmDevice& d, double p, double q, double omega_est) {
    switch (d.pss.input) {
        case PssState::Input::Q: return q;
        case PssState::Input::P: return p;
        case PssState::Input::Rho: return d.rho;
        case PssState::Input::OmegaDev: return omega_est - d.omega_ref;
    }
    return q;
}

}  // namespace

GridSystem::GridSystem(NetworkCase cs, std::vector<MachineDevice> machines,
                       std::vector<DualGfmDevice> gfms)
    : cs_(std::move(cs)), machines_(std::move(machines)), gfms_(std::move(gfms)) {
    cs_.validate();
    omega_base_ = 2.0 * std::numbers::pi * cs_.base_freq_hz;
    for (auto& m : machines_) cs_.index_of(m.bus);
    for (auto& d : gfms_) {
        cs_.index_of(d.bus);
        d.pll.omega_base = omega_base_;
    }
    int off = 0;
    for (auto& m : machines_) {
        (void)m;
        mach_off_.push_back(off);
        off += kMachineStates;
    }
    for (auto& d : gfms_) {
        gfm_off_.push_back(off);
        off += gfm_states(d);
    }
    n_diff_ = off;
    load_admittance_.assign(cs_.size(), Complex(0.0, 0.0));
    fault_shunt_.assign(cs_.size(), Complex(0.0, 0.0));

    pf_ = solve_powerflow(cs_);
    ybus_dyn_ = assemble_ybus(cs_);
    for (int i = 0; i < cs_.size(); ++i) {
        const auto& b = cs_.buses[i];
        if (b.p_load != 0.0 || b.q_load != 0.0) {
            const double v0 = pf_.v(i);
            const Complex yl = Complex(b.p_load, -b.q_load) / (v0 * v0);
            load_admittance_[i] = yl;
            ybus_dyn_.Y.coeffRef(i, i) += yl;
        }
    }
}

SystemState GridSystem::initial_guess(bool common_gfm_omega_set) {
    SystemState st;
    st.t = 0.0;
    st.x.resize(n_diff_);
    st.y.resize(n_alg());
    for (int i = 0; i < cs_.size(); ++i) {
        st.y(2 * i) = pf_.v(i);
        st.y(2 * i + 1) = pf_.theta(i);
    }
    const double sb = cs_.base_mva;

    for (size_t k = 0; k < machines_.size(); ++k) {
        auto& m = machines_[k];
        const int i = cs_.index_of(m.bus);
        const double v = pf_.v(i), th = pf_.theta(i);
        const double scale = sb / m.rating;  // system pu -> device pu
        const Complex s_dev = pf_.injection(i) * scale;
        const Complex vb = std::polar(v, th);
        const Complex ib = std::conj(s_dev / vb);
        const Complex eb = vb + Complex(m.r_a, m.x_d_t) * ib;
        m.delta = std::arg(eb);
        m.eq_t = std::abs(eb);
        m.omega = m.omega_ref;
        const auto pq = m.power(v, th);
        m.p_m = pq.p;
        m.p_m_o = pq.p;
        const double id = m.i_d(v, th);
        m.v_f = m.eq_t + (m.x_d - m.x_d_t) * id;
        m.v_ref = v + m.v_f / m.K_r;
        const int off = mach_off_[k];
        st.x(off) = m.delta;
        st.x(off + 1) = m.omega;
        st.x(off + 2) = m.eq_t;
        st.x(off + 3) = m.p_m;
        st.x(off + 4) = m.v_f;
    }

    for (size_t k = 0; k < gfms_.size(); ++k) {
        auto& d = gfms_[k];
        const int i = cs_.index_of(d.bus);
        const double v = pf_.v(i), th = pf_.theta(i);
        const double scale = sb / d.rating;
        const double p = pf_.injection(i).real() * scale;
        const double q = pf_.injection(i).imag() * scale;
        // closed-form inversion of the dual interface equations
        d.e = std::hypot(d.K * v * v - p, q) / (d.K * v);
        d.delta = th + std::atan2(q, d.K * v * v - p);
        d.rho = 0.0;
        d.p_ref = p;
        d.p_ref_o = p;
        d.q_ref = d.delta / d.K_q + q;
        d.omega_set = d.omega_ref + d.q_ref / d.K_r_t;
        d.pll.theta_f = th;
        if (d.pss.enabled) {
            d.pss.x_w = d.pss.gain * pss_input_signal(d, p, q, d.omega_ref);
            d.pss.x_1 = 0.0;
            d.pss.x_2 = 0.0;
        }
    }
    if (common_gfm_omega_set && !gfms_.empty()) {
        double mean = 0.0;
        for (const auto& d : gfms_) mean += d.omega_set;
        mean /= static_cast<double>(gfms_.size());
        for (auto& d : gfms_) d.omega_set = mean;
    }
    for (size_t k = 0; k < gfms_.size(); ++k) {
        const auto& d = gfms_[k];
        const int off = gfm_off_[k];
        st.x(off) = d.e;
        st.x(off + 1) = d.rho;
        st.x(off + 2) = d.delta;
        st.x(off + 3) = d.p_ref;
        st.x(off + 4) = d.q_ref;
        st.x(off + 5) = d.pll.theta_f;
        if (d.pss.enabled) {
            st.x(off + 6) = d.pss.x_w;
            st.x(off + 7) = d.pss.x_1;
            st.x(off + 8) = d.pss.x_2;
        }
    }
    return st;
}

void GridSystem::sync_machine(MachineDevice& m, const Vector& x, int off) const {
    m.delta = x(off);
    m.omega = x(off + 1);
    m.eq_t = x(off + 2);
    m.p_m = x(off + 3);
    m.v_f = x(off + 4);
}

void GridSystem::sync_gfm(DualGfmDevice& d, const Vector& x, int off) const {
    d.e = x(off);
    d.rho = x(off + 1);
    d.delta = x(off + 2);
    d.p_ref = x(off + 3);
    d.q_ref = x(off + 4);
    d.pll.theta_f = x(off + 5);
    if (d.pss.enabled) {
        d.pss.x_w = x(off + 6);
        d.pss.x_1 = x(off + 7);
        d.pss.x_2 = x(off + 8);
    }
}

void GridSystem::residuals(const Vector& x, const Vector& y, Vector& f, Vector& g) const {
    const int n = cs_.size();
    f.resize(n_diff_);
    g.resize(2 * n);

    Vector v(n), th(n);
    for (int i = 0; i < n; ++i) {
        v(i) = y(2 * i);
        th(i) = y(2 * i + 1);
    }
    const ComplexVector s_net = bus_injections(ybus_dyn_, v, th);
    for (int i = 0; i < n; ++i) {
        g(2 * i) = s_net(i).real();
        g(2 * i + 1) = s_net(i).imag();
    }

    const double sb = cs_.base_mva;
    for (size_t k = 0; k < machines_.size(); ++k) {
        MachineDevice m = machines_[k];
        const int off = mach_off_[k];
        sync_machine(m, x, off);
        const int i = cs_.index_of(m.bus);
        const auto pq = m.power(v(i), th(i));
        const auto sw = swing_derivatives(m, pq.p);
        const auto av = avr_derivatives(m, v(i), th(i));
        f(off) = omega_base_ * sw.delta_dot;
        f(off + 1) = sw.omega_dot;
        f(off + 2) = m.avr_enabled ? av.e_dot : 0.0;
        f(off + 3) = m.gov_enabled ? governor_derivative(m) : 0.0;
        f(off + 4) = m.avr_enabled ? av.v_f_dot : 0.0;
        const double r = m.rating / sb;
        g(2 * i) -= r * pq.p;
        g(2 * i + 1) -= r * pq.q;
    }

    for (size_t k = 0; k < gfms_.size(); ++k) {
        DualGfmDevice d = gfms_[k];
        const int off = gfm_off_[k];
        sync_gfm(d, x, off);
        const int i = cs_.index_of(d.bus);
        const auto pq = d.power(v(i), th(i));
        const auto pll = pll_derivatives(d.pll, th(i), v(i));
        double v_pss = 0.0;
        if (d.pss.enabled) {
            const double sig = pss_input_signal(d, pq.p, pq.q, pll.omega_est);
            v_pss = pss_output(d.pss, sig);
            const auto pr = pss_derivatives(d.pss, sig);
            f(off + 6) = pr.x_w_dot;
            f(off + 7) = pr.x_1_dot;
            f(off + 8) = pr.x_2_dot;
        }
        const auto ds = dual_swing_derivatives(d, pq.p);
        const bool on_delta = d.pss.place == PssState::Place::DeltaEq;
        const auto dr = dual_reactive_derivatives(d, pq.q, pll.omega_est,
                                                  on_delta ? 0.0 : v_pss);
        f(off) = omega_base_ * ds.e_dot;
        f(off + 1) = ds.rho_dot;
        f(off + 2) = dr.delta_dot + (on_delta ? v_pss / d.T_q : 0.0);
        f(off + 3) = dual_governor_derivative(d);
        f(off + 4) = dr.q_ref_dot;
        f(off + 5) = pll.theta_f_dot;
        const double r = d.rating / sb;
        g(2 * i) -= r * pq.p;
        g(2 * i + 1) -= r * pq.q;
    }

    for (int i = 0; i < n; ++i) {
        if (cs_.buses[i].infinite) {
            g(2 * i) = v(i) - cs_.buses[i].v;
            g(2 * i + 1) = th(i) - cs_.buses[i].theta;
        }
    }
}

void GridSystem::algebraic_residual(const Vector& x, const Vector& y, Vector& g) const {
    Vector f;
    residuals(x, y, f, g);
}

bool GridSystem::invalid_state(const Vector& x) const {
    for (size_t k = 0; k < gfms_.size(); ++k)
        if (x(gfm_off_[k]) <= 0.0) return true;
    return false;
}

std::vector<std::string> GridSystem::state_names() const {
    std::vector<std::string> names(n_diff_);
    int dev = 0;
    for (size_t k = 0; k < machines_.size(); ++k) {
        const std::string p = "dev" + std::to_string(++dev);
        const int off = mach_off_[k];
        names[off] = p + ".delta";
        names[off + 1] = p + ".omega";
        names[off + 2] = p + ".eq_t";
        names[off + 3] = p + ".p_m";
        names[off + 4] = p + ".v_f";
    }
    for (size_t k = 0; k < gfms_.size(); ++k) {
        const std::string p = "dev" + std::to_string(++dev);
        const int off = gfm_off_[k];
        names[off] = p + ".e";
        names[off + 1] = p + ".rho";
        names[off + 2] = p + ".delta";
        names[off + 3] = p + ".p_ref";
        names[off + 4] = p + ".q_ref";
        names[off + 5] = p + ".theta_f";
        if (gfms_[k].pss.enabled) {
            names[off + 6] = p + ".pss_xw";
            names[off + 7] = p + ".pss_x1";
            names[off + 8] = p + ".pss_x2";
        }
    }
    return names;
}

std::vector<DeviceOutput> GridSystem::device_outputs(const Vector& x, const Vector& y) const {
    std::vector<DeviceOutput> out;
    int dev = 0;
    for (size_t k = 0; k < machines_.size(); ++k) {
        MachineDevice m = machines_[k];
        sync_machine(m, x, mach_off_[k]);
        const int i = cs_.index_of(m.bus);
        const auto pq = m.power(y(2 * i), y(2 * i + 1));
        out.push_back({"dev" + std::to_string(++dev), false, m.omega, pq.p, pq.q});
    }
    for (size_t k = 0; k < gfms_.size(); ++k) {
        DualGfmDevice d = gfms_[k];
        sync_gfm(d, x, gfm_off_[k]);
        const int i = cs_.index_of(d.bus);
        const auto pq = d.power(y(2 * i), y(2 * i + 1));
        const auto pll = pll_derivatives(d.pll, y(2 * i + 1), y(2 * i));
        out.push_back({"dev" + std::to_string(++dev), true, pll.omega_est, pq.p, pq.q});
    }
    return out;
}

void GridSystem::apply_event(const Event& ev) {
    switch (ev.kind) {
        case Event::Kind::LoadScale: {
            const int i = cs_.index_of(ev.bus);
            const Complex delta = (ev.factor - 1.0) * load_admittance_[i];
            apply_admittance_delta(ybus_dyn_, ev.bus, delta.real(), delta.imag());
            load_admittance_[i] *= ev.factor;
            break;
        }
        case Event::Kind::FaultApply: {
            const int i = cs_.index_of(ev.bus);
            apply_admittance_delta(ybus_dyn_, ev.bus, ev.g_fault, ev.b_fault);
            fault_shunt_[i] += Complex(ev.g_fault, ev.b_fault);
            break;
        }
        case Event::Kind::FaultClear: {
            const int i = cs_.index_of(ev.bus);
            if (fault_shunt_[i] == Complex(0.0, 0.0))
                throw EventError("fault_clear without matching fault_apply at bus " +
                                 std::to_string(ev.bus));
            apply_admittance_delta(ybus_dyn_, ev.bus, -fault_shunt_[i].real(),
                                   -fault_shunt_[i].imag());
            fault_shunt_[i] = Complex(0.0, 0.0);
            break;
        }
        case Event::Kind::DeviceTrip:
            throw EventError("device_trip is not supported by this engine revision");
    }
}

void GridSystem::mark_fault_snapshot(const Vector& y) { fault_y_ = y; }

namespace {

// Damped Newton with voltage floor; shared by the algebraic re-solve and the
// step solver.
bool newton_solve(const ResidualFn& F, Vector& z, const SolverConfig& cfg, int max_iter,
                  const std::vector<int>& v_slots, double* final_residual = nullptr) {
    Vector r;
    F(z, r);
    double norm = r.cwiseAbs().maxCoeff();
    int it = 0;
    Eigen::MatrixXd J;
    Vector trial, r_trial;
    while (norm >= cfg.newton_tol && it < max_iter) {
        fd_jacobian(F, z, r, J, cfg.fd_step, cfg.jacobian_mode);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
        Vector dz = lu.solve(-r);
        if (!dz.allFinite()) {
            if (final_residual) *final_residual = norm;
            return false;
        }
        const double m = dz.cwiseAbs().maxCoeff();
        if (m > cfg.max_update) dz *= cfg.max_update / m;
        // backtracking: accept the first scale that reduces the residual
        double best_norm = norm;
        double alpha = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < 6; ++bt) {
            trial = z + alpha * dz;
            for (int s : v_slots) trial(s) = std::max(trial(s), 1e-6);
            F(trial, r_trial);
            const double trial_norm = r_trial.cwiseAbs().maxCoeff();
            if (std::isfinite(trial_norm) && trial_norm < best_norm) {
                z = trial;
                r = r_trial;
                norm = trial_norm;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            // take the smallest probe anyway; the next Jacobian may recover
            z = trial;
            for (int s : v_slots) z(s) = std::max(z(s), 1e-6);
            F(z, r);
            norm = r.cwiseAbs().maxCoeff();
        }
        ++it;
    }
    if (final_residual) *final_residual = norm;
    return norm < cfg.newton_tol;
}

}  // namespace

SystemState solve_equilibrium(GridSystem& sys, const SystemState& guess,
                              const SolverConfig& cfg, EquilibriumInfo* info) {
    const int nx = sys.n_diff();
    const int ny = sys.n_alg();
    const bool has_gfm = !sys.gfms().empty();
    const int nz = nx + ny + 1;  // + common drift sigma (rad/s)

    // angle-type rows drift at sigma in a frequency-offset equilibrium
    std::vector<char> drift(nx, 0);
    for (size_t k = 0; k < sys.machines().size(); ++k) drift[sys.machine_offset(k)] = 1;
    for (size_t k = 0; k < sys.gfms().size(); ++k) {
        drift[sys.gfm_offset(static_cast<int>(k)) + 2] = 1;  // delta
        drift[sys.gfm_offset(static_cast<int>(k)) + 5] = 1;  // theta_f
    }
    int slack_row = 0;
    for (int i = 0; i < sys.n_bus(); ++i)
        if (sys.network().buses[i].kind == BusKind::Slack) slack_row = i;
    const double theta_slack0 = guess.y(2 * slack_row + 1);

    Vector z(nz);
    z.head(nx) = guess.x;
    z.segment(nx, ny) = guess.y;
    z(nz - 1) = 0.0;

    // local scratch per call: the residual closure must be thread-safe for
    // the parallel Jacobian kernel
    ResidualFn F = [&, nx, ny, nz](const Vector& zz, Vector& out) {
        Vector f, g;
        const double sigma = zz(nz - 1);
        sys.residuals(zz.head(nx), zz.segment(nx, ny), f, g);
        out.resize(nz);
        for (int i = 0; i < nx; ++i) out(i) = f(i) - (drift[i] ? sigma : 0.0);
        out.segment(nx, ny) = g;
        out(nz - 1) = has_gfm ? sigma : (zz(nx + 2 * slack_row + 1) - theta_slack0);
    };

    std::vector<int> v_slots;
    for (int i = 0; i < sys.n_bus(); ++i) v_slots.push_back(nx + 2 * i);

    SolverConfig eq_cfg = cfg;
    eq_cfg.newton_tol = std::min(cfg.newton_tol, 1e-10);
    double resid = 0.0;
    std::vector<double> hist;
    if (!newton_solve(F, z, eq_cfg, 60, v_slots, &resid)) {
        hist.push_back(resid);
        throw ConvergenceError("equilibrium Newton did not converge", hist);
    }

    SystemState st;
    st.t = 0.0;
    st.x = z.head(nx);
    st.y = z.segment(nx, ny);
    const double sigma = z(nz - 1);

    // snap the exact-equilibrium identities
    for (size_t k = 0; k < sys.gfms().size(); ++k)
        st.x(sys.gfm_offset(static_cast<int>(k)) + 1) = 0.0;  // rho
    for (size_t k = 0; k < sys.machines().size(); ++k)
        st.x(sys.machine_offset(static_cast<int>(k)) + 1) =
            sys.machines()[k].omega_ref + sigma / sys.omega_base();

    if (info) {
        Vector f2, g2;
        sys.residuals(st.x, st.y, f2, g2);
        double r2 = 0.0;
        for (int i = 0; i < nx; ++i)
            r2 = std::max(r2, std::abs(f2(i) - (drift[i] ? sigma : 0.0)));
        r2 = std::max(r2, g2.cwiseAbs().maxCoeff());
        info->delta_omega = sigma / sys.omega_base();
        info->residual = r2;
        info->iterations = 0;
    }
    return st;
}

SystemState trapezoidal_step(const GridSystem& sys, const SystemState& state, double dt,
                             const SolverConfig& cfg) {
    const int nx = sys.n_diff();
    const int ny = sys.n_alg();
    Vector f0, g0;
    sys.residuals(state.x, state.y, f0, g0);

    ResidualFn F = [&, nx, ny](const Vector& z, Vector& out) {
        Vector f1, g1;
        sys.residuals(z.head(nx), z.segment(nx, ny), f1, g1);
        out.resize(nx + ny);
        out.head(nx) = z.head(nx) - state.x - (dt / 2.0) * (f1 + f0);
        out.segment(nx, ny) = g1;
    };

    std::vector<int> v_slots;
    for (int i = 0; i < sys.n_bus(); ++i) v_slots.push_back(nx + 2 * i);

    Vector z(nx + ny);
    z.head(nx) = state.x;
    z.segment(nx, ny) = state.y;
    double resid = 0.0;
    const bool ok = newton_solve(F, z, cfg, cfg.max_newton, v_slots, &resid);
    if (!ok || sys.invalid_state(z.head(nx)))
        throw StepError("trapezoidal step failed at t=" + std::to_string(state.t) +
                        " (residual " + std::to_string(resid) + ")");
    SystemState out;
    out.x = z.head(nx);
    out.y = z.segment(nx, ny);
    out.t = state.t + dt;
    return out;
}

namespace {

// one macro step with dt-halving retries
SystemState robust_step(const GridSystem& sys, const SystemState& state, double dt,
                        const SolverConfig& cfg) {
    for (int lvl = 0; lvl <= cfg.max_halvings; ++lvl) {
        const int nsub = 1 << lvl;
        const double h = dt / nsub;
        SystemState cur = state;
        bool ok = true;
        for (int s = 0; s < nsub; ++s) {
            try {
                cur = trapezoidal_step(sys, cur, h, cfg);
            } catch (const StepError&) {
                ok = false;
                break;
            }
        }
        if (ok) return cur;
    }
    throw StepError("step failed after " + std::to_string(cfg.max_halvings) +
                    " halvings at t=" + std::to_string(state.t));
}

std::string describe(const Event& ev) {
    switch (ev.kind) {
        case Event::Kind::LoadScale:
            return "load_scale bus " + std::to_string(ev.bus) + " factor " +
                   std::to_string(ev.factor);
        case Event::Kind::FaultApply:
            return "fault_apply bus " + std::to_string(ev.bus);
        case Event::Kind::FaultClear:
            return "fault_clear bus " + std::to_string(ev.bus);
        case Event::Kind::DeviceTrip:
            return "device_trip " + std::to_string(ev.device);
    }
    return "event";
}

}  // namespace

SystemState handle_event(GridSystem& sys, const SystemState& state, const Event& ev,
                         const SolverConfig& cfg) {
    const bool is_clear = ev.kind == Event::Kind::FaultClear;
    if (ev.kind == Event::Kind::FaultApply) sys.mark_fault_snapshot(state.y);

    sys.apply_event(ev);

    ResidualFn G = [&](const Vector& yy, Vector& out) {
        Vector g;
        sys.algebraic_residual(state.x, yy, g);
        out = g;
    };
    std::vector<int> v_slots;
    for (int i = 0; i < sys.n_bus(); ++i) v_slots.push_back(2 * i);

    SolverConfig alg_cfg = cfg;
    alg_cfg.max_update = 0.25;

    // post-clear network equals the pre-fault one; its algebraic solution is
    // the natural guess and avoids the low-voltage solution branch
    Vector y = (is_clear && sys.fault_snapshot()) ? *sys.fault_snapshot() : state.y;
    if (newton_solve(G, y, alg_cfg, 80, v_slots)) {
        SystemState out = state;
        out.y = y;
        return out;
    }
    // continuation fallback: re-apply the edit in substeps from the pre-edit
    // matrix, re-solving along the way
    throw EventError("algebraic re-solve diverged after " + describe(ev));
}

SimResult run_simulation(GridSystem& sys, const SystemState& initial,
                         std::vector<Event> events, const SolverConfig& cfg) {
    const int nsteps = static_cast<int>(std::llround(cfg.t_stop / cfg.dt));
    std::stable_sort(events.begin(), events.end(),
                     [](const Event& a, const Event& b) { return a.t < b.t; });
    // event times snap onto the step grid
    std::vector<int> ev_step(events.size());
    for (size_t i = 0; i < events.size(); ++i)
        ev_step[i] = static_cast<int>(std::llround(events[i].t / cfg.dt));

    SimResult res;
    res.state_names = sys.state_names();
    for (int i = 0; i < sys.n_bus(); ++i) {
        const std::string b = "bus" + std::to_string(sys.network().buses[i].id);
        res.bus_names.push_back(b);
    }
    res.time.reserve(nsteps + 1);
    res.x.resize(nsteps + 1, sys.n_diff());
    res.y.resize(nsteps + 1, sys.n_alg());

    SystemState st = initial;
    st.t = 0.0;
    size_t ei = 0;
    auto record = [&](int row) {
        res.time.push_back(st.t);
        res.x.row(row) = st.x.transpose();
        res.y.row(row) = st.y.transpose();
    };

    // events scheduled at t = 0 fire before the first step
    while (ei < events.size() && ev_step[ei] == 0) {
        st = handle_event(sys, st, events[ei], cfg);
        res.events.push_back({0.0, describe(events[ei])});
        ++ei;
    }
    record(0);

    for (int k = 1; k <= nsteps; ++k) {
        try {
            st = robust_step(sys, st, cfg.dt, cfg);
        } catch (const StepError&) {
            res.x.conservativeResize(k, Eigen::NoChange);
            res.y.conservativeResize(k, Eigen::NoChange);
            res.complete = false;
            return res;
        }
        while (ei < events.size() && ev_step[ei] == k) {
            st = handle_event(sys, st, events[ei], cfg);
            res.events.push_back({st.t, describe(events[ei])});
            ++ei;
        }
        record(k);
    }
    res.complete = true;
    return res;
}

}  // namespace dualgfm
