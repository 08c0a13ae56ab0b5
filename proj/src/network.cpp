#include "dualgfm/network.hpp"

#include <Eigen/LU>
#include <cmath>

namespace dualgfm {

int NetworkCase::index_of(int bus_id) const {
    for (size_t i = 0; i < buses.size(); ++i)
        if (buses[i].id == bus_id) return static_cast<int>(i);
    throw CaseError("unknown bus id " + std::to_string(bus_id));
}

void NetworkCase::validate() const {
    if (buses.empty()) throw CaseError("case has no buses");
    int slacks = 0;
    for (const auto& b : buses) slacks += (b.kind == BusKind::Slack) ? 1 : 0;
    if (slacks != 1) throw CaseError("case must have exactly one slack bus");
    for (const auto& br : branches) {
        index_of(br.from);
        index_of(br.to);
        if (br.r * br.r + br.x * br.x <= 0.0)
            throw CaseError("zero series impedance on branch " + std::to_string(br.from) +
                            "-" + std::to_string(br.to));
        if (br.tap <= 0.0) throw CaseError("non-positive tap on branch");
    }
    for (const auto& [id, p] : p_gen) index_of(id);
}

AdmittanceMatrix assemble_ybus(const NetworkCase& cs) {
    cs.validate();
    const int n = cs.size();
    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(cs.branches.size() * 4 + n);
    for (const auto& br : cs.branches) {
        const int i = cs.index_of(br.from);
        const int j = cs.index_of(br.to);
        const Complex ys = 1.0 / Complex(br.r, br.x);
        const Complex ysh(0.0, br.b / 2.0);
        const double t = br.tap;
        trip.emplace_back(i, i, (ys + ysh) / (t * t));
        trip.emplace_back(j, j, ys + ysh);
        trip.emplace_back(i, j, -ys / t);
        trip.emplace_back(j, i, -ys / t);
    }
    for (int i = 0; i < n; ++i) {
        const auto& b = cs.buses[i];
        if (b.shunt_g != 0.0 || b.shunt_b != 0.0)
            trip.emplace_back(i, i, Complex(b.shunt_g, b.shunt_b));
    }
    AdmittanceMatrix out;
    out.Y.resize(n, n);
    out.Y.setFromTriplets(trip.begin(), trip.end());
    out.bus_ids.resize(n);
    for (int i = 0; i < n; ++i) out.bus_ids[i] = cs.buses[i].id;
    return out;
}

int AdmittanceMatrix::nonzeros() const {
    int count = 0;
    for (int k = 0; k < Y.outerSize(); ++k)
        for (Eigen::SparseMatrix<Complex>::InnerIterator it(Y, k); it; ++it)
            if (it.value() != Complex(0.0, 0.0)) ++count;
    return count;
}

void apply_admittance_delta(AdmittanceMatrix& ybus, int bus_id, double dg, double db) {
    for (size_t i = 0; i < ybus.bus_ids.size(); ++i) {
        if (ybus.bus_ids[i] == bus_id) {
            ybus.Y.coeffRef(static_cast<int>(i), static_cast<int>(i)) += Complex(dg, db);
            return;
        }
    }
    throw CaseError("apply_admittance_delta: unknown bus id " + std::to_string(bus_id));
}

ComplexVector bus_injections(const AdmittanceMatrix& ybus, const Vector& v, const Vector& theta) {
    const int n = ybus.order();
    ComplexVector vc(n);
    for (int i = 0; i < n; ++i) vc(i) = std::polar(v(i), theta(i));
    ComplexVector iv = ybus.Y * vc;
    ComplexVector s(n);
    for (int i = 0; i < n; ++i) s(i) = vc(i) * std::conj(iv(i));
    return s;
}

PowerFlowResult solve_powerflow(const NetworkCase& cs, const PowerFlowOptions& opt) {
    cs.validate();
    const int n = cs.size();
    const AdmittanceMatrix ybus = assemble_ybus(cs);

    Vector v(n), theta(n);
    Vector p_sched(n), q_sched(n);
    std::vector<int> ang_idx, mag_idx;  // unknown angles (PV+PQ), unknown magnitudes (PQ)
    for (int i = 0; i < n; ++i) {
        const auto& b = cs.buses[i];
        v(i) = (b.kind == BusKind::PQ) ? 1.0 : b.v;  // flat start, PV/slack pinned
        theta(i) = 0.0;
        p_sched(i) = -b.p_load;
        q_sched(i) = -b.q_load;
        if (b.kind != BusKind::Slack) ang_idx.push_back(i);
        if (b.kind == BusKind::PQ) mag_idx.push_back(i);
    }
    for (const auto& [id, p] : cs.p_gen) p_sched(cs.index_of(id)) += p;

    const int na = static_cast<int>(ang_idx.size());
    const int nm = static_cast<int>(mag_idx.size());
    const int m = na + nm;

    auto mismatch = [&](const Vector& vv, const Vector& th) {
        ComplexVector s = bus_injections(ybus, vv, th);
        Vector f(m);
        for (int k = 0; k < na; ++k) f(k) = p_sched(ang_idx[k]) - s(ang_idx[k]).real();
        for (int k = 0; k < nm; ++k) f(na + k) = q_sched(mag_idx[k]) - s(mag_idx[k]).imag();
        return f;
    };

    PowerFlowResult res;
    for (int it = 0; it <= opt.max_iter; ++it) {
        Vector f = mismatch(v, theta);
        res.mismatch = (m > 0) ? f.cwiseAbs().maxCoeff() : 0.0;
        if (res.mismatch < opt.tol) {
            res.v = v;
            res.theta = theta;
            res.iterations = it;
            res.injection = bus_injections(ybus, v, theta);
            return res;
        }
        if (it == opt.max_iter) break;
        // forward-difference Jacobian; n < 100 grids, dense solve is fine
        Eigen::MatrixXd J(m, m);
        const double h = 1e-7;
        for (int k = 0; k < na; ++k) {
            Vector th2 = theta;
            th2(ang_idx[k]) += h;
            J.col(k) = (mismatch(v, th2) - f) / h;
        }
        for (int k = 0; k < nm; ++k) {
            Vector v2 = v;
            v2(mag_idx[k]) += h;
            J.col(na + k) = (mismatch(v2, theta) - f) / h;
        }
        Vector dz = J.partialPivLu().solve(-f);
        for (int k = 0; k < na; ++k) theta(ang_idx[k]) += dz(k);
        for (int k = 0; k < nm; ++k) v(mag_idx[k]) += dz(na + k);
    }
    throw ConvergenceError("power flow did not converge, last mismatch " +
                               std::to_string(res.mismatch),
                           {res.mismatch});
}

}  // namespace dualgfm
