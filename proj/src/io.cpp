#include "dualgfm/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace dualgfm {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string simresult_csv(const GridSystem& sys, const SimResult& result, OutputSet set) {
    const bool devices = set != OutputSet::Buses;
    const bool buses = set != OutputSet::Devices;
    const int rows = static_cast<int>(result.time.size());
    const int nbus = sys.n_bus();

    std::ostringstream out;
    out << "t";
    int ndev = 0;
    if (devices) {
        const auto outs = sys.device_outputs(result.x.row(0), result.y.row(0));
        ndev = static_cast<int>(outs.size());
        int k = 0;
        for (const auto& m : sys.machines()) {
            (void)m;
            const std::string p = outs[k++].name;
            out << "," << p << ".delta," << p << ".omega," << p << ".eq_t," << p << ".p,"
                << p << ".q";
        }
        for (const auto& d : sys.gfms()) {
            (void)d;
            const std::string p = outs[k++].name;
            out << "," << p << ".e," << p << ".rho," << p << ".delta," << p << ".omega_est,"
                << p << ".p," << p << ".q";
        }
    }
    if (buses)
        for (int i = 0; i < nbus; ++i)
            out << "," << result.bus_names[i] << ".v," << result.bus_names[i] << ".theta";
    out << "\n";

    const int nm = static_cast<int>(sys.machines().size());
    for (int r = 0; r < rows; ++r) {
        out << format_number(result.time[r]);
        if (devices) {
            const auto outs = sys.device_outputs(result.x.row(r), result.y.row(r));
            for (int k = 0; k < nm; ++k) {
                const int off = sys.machine_offset(k);
                out << "," << format_number(result.x(r, off))
                    << "," << format_number(result.x(r, off + 1))
                    << "," << format_number(result.x(r, off + 2))
                    << "," << format_number(outs[k].p) << "," << format_number(outs[k].q);
            }
            for (int k = 0; k + nm < ndev; ++k) {
                const int off = sys.gfm_offset(k);
                const auto& o = outs[nm + k];
                out << "," << format_number(result.x(r, off))
                    << "," << format_number(result.x(r, off + 1))
                    << "," << format_number(result.x(r, off + 2))
                    << "," << format_number(o.omega_est)
                    << "," << format_number(o.p) << "," << format_number(o.q);
            }
        }
        if (buses)
            for (int i = 0; i < nbus; ++i)
                out << "," << format_number(result.y(r, 2 * i)) << ","
                    << format_number(result.y(r, 2 * i + 1));
        out << "\n";
    }
    return out.str();
}

std::string spectrum_csv(const Spectrum& sp, double base_freq_hz) {
    (void)base_freq_hz;
    std::ostringstream out;
    out << "re,im,freq_hz,damping\n";
    for (size_t i = 0; i < sp.eigenvalues.size(); ++i) {
        const auto l = sp.eigenvalues[i];
        out << format_number(l.real()) << "," << format_number(l.imag()) << ","
            << format_number(std::abs(l.imag()) / (2.0 * std::numbers::pi)) << ","
            << format_number(sp.damping[i]) << "\n";
    }
    return out.str();
}

std::string powerflow_csv(const NetworkCase& cs, const PowerFlowResult& pf) {
    std::ostringstream out;
    out << "bus,v,theta,p_inj,q_inj\n";
    for (int i = 0; i < cs.size(); ++i)
        out << cs.buses[i].id << "," << format_number(pf.v(i)) << ","
            << format_number(pf.theta(i)) << "," << format_number(pf.injection(i).real())
            << "," << format_number(pf.injection(i).imag()) << "\n";
    return out.str();
}

std::string metrics_report(const Metrics& m) {
    std::ostringstream out;
    out << "freq_extremum=" << format_number(m.freq_extremum) << "\n"
        << "settling_time=" << format_number(m.settling_time) << "\n"
        << "settled=" << (m.settled ? 1 : 0) << "\n"
        << "steady_state_freq_dev=" << format_number(m.steady_state_freq_dev) << "\n"
        << "max_voltage_dev=" << format_number(m.max_voltage_dev) << "\n"
        << "rho_final_max=" << format_number(m.rho_final_max) << "\n";
    return out.str();
}

}  // namespace dualgfm
