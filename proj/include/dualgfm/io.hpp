#pragma once

#include <string>

#include "dualgfm/analysis.hpp"
#include "dualgfm/dae.hpp"

namespace dualgfm {

// 17 significant digits, '.' decimal point, locale-independent
std::string format_number(double v);

// temp file + rename in the target directory
void write_file_atomic(const std::string& path, const std::string& content);

enum class OutputSet { Devices, Buses, All };

// Header row `t,dev1.e,...,bus1.v,bus1.theta,...`; LF line endings.
std::string simresult_csv(const GridSystem& sys, const SimResult& result, OutputSet set);

std::string spectrum_csv(const Spectrum& sp, double base_freq_hz);

std::string powerflow_csv(const NetworkCase& cs, const PowerFlowResult& pf);

std::string metrics_report(const Metrics& m);

}  // namespace dualgfm
