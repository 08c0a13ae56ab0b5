#pragma once

#include <string>
#include <vector>

#include "dualgfm/dae.hpp"
#include "dualgfm/devices.hpp"
#include "dualgfm/network.hpp"

namespace dualgfm {

struct ParseError : std::runtime_error {
    ParseError(const std::string& what, int line, int column)
        : std::runtime_error("line " + std::to_string(line) + ", col " +
                             std::to_string(column) + ": " + what),
          line(line),
          column(column) {}
    int line;
    int column;
};

// Everything a simulation needs, as described by one case file.
struct CaseFile {
    NetworkCase network;
    std::vector<MachineDevice> machines;
    std::vector<DualGfmDevice> gfms;
    std::vector<Event> events;
    bool gfm_common_omega_set = false;
};

// Line-oriented sectioned text, header line `dualgfm-case v1`, key=value
// records, angles in degrees. Unknown sections and keys are rejected with
// line/column diagnostics.
CaseFile parse_case(const std::string& text);
std::string serialize_case(const CaseFile& cf);

enum class Wscc9Variant { Machines, DualGfm, Mixed, DualGfmIrish };

CaseFile builtin_wscc9(Wscc9Variant variant);

// Resolves a builtin name like "wscc9-dualgfm"; empty optional when unknown.
const char* builtin_case_text_name(Wscc9Variant variant);
bool lookup_builtin(const std::string& name, Wscc9Variant& out);

enum class PaperScenario { Fig3, Fig4 };

std::vector<Event> paper_events(PaperScenario scenario);

}  // namespace dualgfm
