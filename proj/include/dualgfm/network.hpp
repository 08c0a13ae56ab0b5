#pragma once

#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace dualgfm {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using Vector = Eigen::VectorXd;

struct CaseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& what, std::vector<double> residuals = {})
        : std::runtime_error(what), residual_history(std::move(residuals)) {}
    std::vector<double> residual_history;
};

enum class BusKind { Slack, PV, PQ };

struct Bus {
    int id = 0;
    BusKind kind = BusKind::PQ;
    double v = 1.0;       // setpoint (slack/PV) or initial guess, pu
    double theta = 0.0;   // rad
    double p_load = 0.0;  // pu on system base
    double q_load = 0.0;
    double shunt_g = 0.0;
    double shunt_b = 0.0;
    bool infinite = false;  // held at (v, theta) during dynamics
};

struct Branch {
    int from = 0;
    int to = 0;
    double r = 0.0;
    double x = 0.0;
    double b = 0.0;    // total line charging
    double tap = 1.0;  // off-nominal ratio on the from side
};

struct NetworkCase {
    double base_mva = 100.0;
    double base_freq_hz = 50.0;
    double omega_ref = 1.0;
    std::vector<Bus> buses;
    std::vector<Branch> branches;
    // PV active dispatch, bus id -> p (pu); slack picks up the balance
    std::map<int, double> p_gen;

    int index_of(int bus_id) const;  // throws CaseError on unknown id
    int size() const { return static_cast<int>(buses.size()); }
    void validate() const;
};

struct AdmittanceMatrix {
    Eigen::SparseMatrix<Complex> Y;
    std::vector<int> bus_ids;  // row/col -> bus id

    int order() const { return static_cast<int>(Y.rows()); }
    int nonzeros() const;
    ComplexVector current(const ComplexVector& v) const { return Y * v; }
};

AdmittanceMatrix assemble_ybus(const NetworkCase& cs);

// Adds dg + j*db to the diagonal of the addressed bus; the negated delta
// restores the matrix bit-exactly.
void apply_admittance_delta(AdmittanceMatrix& ybus, int bus_id, double dg, double db);

struct PowerFlowResult {
    Vector v;      // pu
    Vector theta;  // rad
    ComplexVector injection;  // solved net injection per bus, pu
    int iterations = 0;
    double mismatch = 0.0;
};

struct PowerFlowOptions {
    double tol = 1e-10;
    int max_iter = 20;
};

PowerFlowResult solve_powerflow(const NetworkCase& cs, const PowerFlowOptions& opt = {});

// S_i = v_i * conj((Y v)_i) for a polar voltage profile.
ComplexVector bus_injections(const AdmittanceMatrix& ybus, const Vector& v, const Vector& theta);

}  // namespace dualgfm
