#include "dualgfm/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

namespace dualgfm {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

struct Token {
    std::string key, value;
    int column;
};

// one key=value record per line inside a section
std::vector<Token> split_record(const std::string& line, int lineno) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i >= line.size() || line[i] == '#') break;
        const size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const std::string tok = line.substr(start, i - start);
        const size_t eq = tok.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 > tok.size())
            throw ParseError("expected key=value, got '" + tok + "'", lineno,
                             static_cast<int>(start + 1));
        out.push_back({tok.substr(0, eq), tok.substr(eq + 1), static_cast<int>(start + 1)});
    }
    return out;
}

double to_number(const Token& t, int lineno) {
    try {
        size_t pos = 0;
        const double v = std::stod(t.value, &pos);
        if (pos != t.value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ParseError("invalid number '" + t.value + "' for key '" + t.key + "'",
                         lineno, t.column);
    }
}

int to_int(const Token& t, int lineno) {
    const double v = to_number(t, lineno);
    if (v != std::floor(v))
        throw ParseError("expected integer for key '" + t.key + "'", lineno, t.column);
    return static_cast<int>(v);
}

class Record {
  public:
    Record(std::vector<Token> toks, int lineno) : lineno_(lineno) {
        for (auto& t : toks) map_[t.key] = t;
    }
    bool has(const std::string& k) const { return map_.count(k) > 0; }
    double num(const std::string& k) { return to_number(take(k), lineno_); }
    double num(const std::string& k, double fallback) {
        return has(k) ? num(k) : (void(used_.insert(k)), fallback);
    }
    int integer(const std::string& k) { return to_int(take(k), lineno_); }
    std::string str(const std::string& k) { return take(k).value; }
    std::string str(const std::string& k, const std::string& fallback) {
        return has(k) ? str(k) : (void(used_.insert(k)), fallback);
    }
    void reject_unknown() const {
        for (const auto& [k, t] : map_)
            if (!used_.count(k))
                throw ParseError("unknown key '" + k + "'", lineno_, t.column);
    }
    int line() const { return lineno_; }

  private:
    Token take(const std::string& k) {
        auto it = map_.find(k);
        if (it == map_.end()) throw ParseError("missing mandatory key '" + k + "'", lineno_, 1);
        used_.insert(k);
        return it->second;
    }
    std::map<std::string, Token> map_;
    mutable std::set<std::string> used_;
    int lineno_;
};

PssState::Input pss_input_from(const std::string& s, int lineno) {
    if (s == "q") return PssState::Input::Q;
    if (s == "p") return PssState::Input::P;
    if (s == "rho") return PssState::Input::Rho;
    if (s == "omega") return PssState::Input::OmegaDev;
    throw ParseError("unknown pss input '" + s + "'", lineno, 1);
}

std::string pss_input_name(PssState::Input in) {
    switch (in) {
        case PssState::Input::Q: return "q";
        case PssState::Input::P: return "p";
        case PssState::Input::Rho: return "rho";
        case PssState::Input::OmegaDev: return "omega";
    }
    return "q";
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

CaseFile parse_case(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::string section;
    bool header_seen = false;
    CaseFile cf;
    std::map<int, DualGfmDevice*> gfm_by_bus;

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string trimmed = line;
        const size_t first = trimmed.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        trimmed = trimmed.substr(first);
        if (trimmed[0] == '#') continue;

        if (!header_seen) {
            if (trimmed != "dualgfm-case v1")
                throw ParseError("expected header 'dualgfm-case v1'", lineno, 1);
            header_seen = true;
            continue;
        }
        if (trimmed[0] == '[') {
            const size_t close = trimmed.find(']');
            if (close == std::string::npos) throw ParseError("unterminated section", lineno, 1);
            section = trimmed.substr(1, close - 1);
            static const std::set<std::string> known = {"system",   "buses", "branches",
                                                        "machines", "dualgfms", "events"};
            if (!known.count(section))
                throw ParseError("unknown section '" + section + "'", lineno, 1);
            continue;
        }
        if (section.empty()) throw ParseError("record outside any section", lineno, 1);

        Record rec(split_record(line, lineno), lineno);
        if (section == "system") {
            cf.network.base_mva = rec.num("base_mva", cf.network.base_mva);
            cf.network.base_freq_hz = rec.num("base_freq_hz", cf.network.base_freq_hz);
            cf.network.omega_ref = rec.num("omega_ref", cf.network.omega_ref);
            const std::string mode = rec.str("gfm_omega_set", "device");
            if (mode != "device" && mode != "common")
                throw ParseError("gfm_omega_set must be device|common", rec.line(), 1);
            cf.gfm_common_omega_set = (mode == "common");
        } else if (section == "buses") {
            Bus b;
            b.id = rec.integer("id");
            const std::string kind = rec.str("kind");
            if (kind == "slack") b.kind = BusKind::Slack;
            else if (kind == "pv") b.kind = BusKind::PV;
            else if (kind == "pq") b.kind = BusKind::PQ;
            else throw ParseError("bus kind must be slack|pv|pq", rec.line(), 1);
            b.v = rec.num("v", 1.0);
            b.theta = rec.num("theta", 0.0) * kDegToRad;
            b.p_load = rec.num("p", 0.0);
            b.q_load = rec.num("q", 0.0);
            b.shunt_g = rec.num("g", 0.0);
            b.shunt_b = rec.num("b", 0.0);
            b.infinite = rec.num("inf", 0.0) != 0.0;
            if (rec.has("pgen")) cf.network.p_gen[b.id] = rec.num("pgen");
            cf.network.buses.push_back(b);
        } else if (section == "branches") {
            Branch br;
            br.from = rec.integer("from");
            br.to = rec.integer("to");
            br.r = rec.num("r", 0.0);
            br.x = rec.num("x");
            br.b = rec.num("b", 0.0);
            br.tap = rec.num("tap", 1.0);
            cf.network.branches.push_back(br);
        } else if (section == "machines") {
            MachineDevice m;
            m.bus = rec.integer("bus");
            m.rating = rec.num("rating", 100.0);
            m.M = rec.num("M");
            m.D = rec.num("D", 0.0);
            m.r_a = rec.num("ra", 0.0);
            m.x_d = rec.num("xd");
            m.x_d_t = rec.num("xdt");
            m.T_d0_t = rec.num("Td0t");
            m.T_m = rec.num("Tm", 2.0);
            m.R = rec.num("R", 0.05);
            m.K_r = rec.num("Kr", 20.0);
            m.T_r = rec.num("Tr", 0.2);
            m.gov_enabled = rec.num("gov", 1.0) != 0.0;
            m.avr_enabled = rec.num("avr", 1.0) != 0.0;
            cf.machines.push_back(m);
        } else if (section == "dualgfms") {
            DualGfmDevice d;
            d.bus = rec.integer("bus");
            d.rating = rec.num("rating", 100.0);
            d.K = rec.num("K");
            d.M_t = rec.num("Mt");
            d.D_t = rec.num("Dt");
            d.T_m_t = rec.num("Tmt", 2.0);
            d.R_t = rec.num("Rt", 0.05);
            d.K_q = rec.num("Kq", 10.0);
            d.T_q = rec.num("Tq", 5.0);
            d.K_r_t = rec.num("Krt", 40.0);
            d.T_r_t = rec.num("Trt", 1.0);
            d.perfect_tracking = rec.num("pt", 0.0) != 0.0;
            d.pll.t_filter = rec.num("Tpll", 0.02);
            d.pll.v_freeze = rec.num("pll_vmin", 0.3);
            d.pss.enabled = rec.num("pss", 0.0) != 0.0;
            if (d.pss.enabled) {
                d.pss.gain = rec.num("pss_K", 2.0);
                d.pss.t_washout = rec.num("pss_Tw", 5.0);
                d.pss.t1 = rec.num("pss_T1", 0.3);
                d.pss.t2 = rec.num("pss_T2", 0.1);
                d.pss.t3 = rec.num("pss_T3", 0.3);
                d.pss.t4 = rec.num("pss_T4", 0.1);
                d.pss.lim = rec.num("pss_lim", 0.1);
                d.pss.input = pss_input_from(rec.str("pss_in", "q"), rec.line());
                d.pss.place = rec.str("pss_at", "delta") == "qref" ? PssState::Place::QrefEq
                                                                   : PssState::Place::DeltaEq;
            }
            cf.gfms.push_back(d);
            gfm_by_bus[d.bus] = &cf.gfms.back();
        } else if (section == "events") {
            Event ev;
            ev.t = rec.num("t");
            const std::string kind = rec.str("kind");
            if (kind == "load_scale") {
                ev.kind = Event::Kind::LoadScale;
                ev.bus = rec.integer("bus");
                ev.factor = rec.num("factor");
            } else if (kind == "fault_apply") {
                ev.kind = Event::Kind::FaultApply;
                ev.bus = rec.integer("bus");
                ev.g_fault = rec.num("g", 1e4);
                ev.b_fault = rec.num("b", 0.0);
            } else if (kind == "fault_clear") {
                ev.kind = Event::Kind::FaultClear;
                ev.bus = rec.integer("bus");
            } else {
                throw ParseError("unknown event kind '" + kind + "'", rec.line(), 1);
            }
            if (ev.t < 0.0) throw ParseError("event time must be >= 0", rec.line(), 1);
            cf.events.push_back(ev);
        }
        rec.reject_unknown();
    }
    if (!header_seen) throw ParseError("empty case file", 1, 1);

    // structural validation with file-level diagnostics
    try {
        cf.network.validate();
        for (const auto& m : cf.machines) cf.network.index_of(m.bus);
        for (const auto& d : cf.gfms) cf.network.index_of(d.bus);
        for (const auto& e : cf.events)
            if (e.kind != Event::Kind::DeviceTrip) cf.network.index_of(e.bus);
    } catch (const CaseError& err) {
        throw ParseError(err.what(), lineno, 1);
    }
    return cf;
}

std::string serialize_case(const CaseFile& cf) {
    std::ostringstream out;
    out << "dualgfm-case v1\n\n[system]\n";
    out << "base_mva=" << fmt(cf.network.base_mva)
        << " base_freq_hz=" << fmt(cf.network.base_freq_hz)
        << " omega_ref=" << fmt(cf.network.omega_ref)
        << " gfm_omega_set=" << (cf.gfm_common_omega_set ? "common" : "device") << "\n";
    out << "\n[buses]\n";
    for (const auto& b : cf.network.buses) {
        out << "id=" << b.id << " kind="
            << (b.kind == BusKind::Slack ? "slack" : b.kind == BusKind::PV ? "pv" : "pq")
            << " v=" << fmt(b.v) << " theta=" << fmt(b.theta / kDegToRad);
        if (b.p_load != 0.0) out << " p=" << fmt(b.p_load);
        if (b.q_load != 0.0) out << " q=" << fmt(b.q_load);
        if (b.shunt_g != 0.0) out << " g=" << fmt(b.shunt_g);
        if (b.shunt_b != 0.0) out << " b=" << fmt(b.shunt_b);
        if (b.infinite) out << " inf=1";
        auto it = cf.network.p_gen.find(b.id);
        if (it != cf.network.p_gen.end()) out << " pgen=" << fmt(it->second);
        out << "\n";
    }
    out << "\n[branches]\n";
    for (const auto& br : cf.network.branches) {
        out << "from=" << br.from << " to=" << br.to << " r=" << fmt(br.r)
            << " x=" << fmt(br.x) << " b=" << fmt(br.b) << " tap=" << fmt(br.tap) << "\n";
    }
    if (!cf.machines.empty()) {
        out << "\n[machines]\n";
        for (const auto& m : cf.machines) {
            out << "bus=" << m.bus << " rating=" << fmt(m.rating) << " M=" << fmt(m.M)
                << " D=" << fmt(m.D) << " ra=" << fmt(m.r_a) << " xd=" << fmt(m.x_d)
                << " xdt=" << fmt(m.x_d_t) << " Td0t=" << fmt(m.T_d0_t)
                << " Tm=" << fmt(m.T_m) << " R=" << fmt(m.R) << " Kr=" << fmt(m.K_r)
                << " Tr=" << fmt(m.T_r);
            if (!m.gov_enabled) out << " gov=0";
            if (!m.avr_enabled) out << " avr=0";
            out << "\n";
        }
    }
    if (!cf.gfms.empty()) {
        out << "\n[dualgfms]\n";
        for (const auto& d : cf.gfms) {
            out << "bus=" << d.bus << " rating=" << fmt(d.rating) << " K=" << fmt(d.K)
                << " Mt=" << fmt(d.M_t) << " Dt=" << fmt(d.D_t) << " Tmt=" << fmt(d.T_m_t)
                << " Rt=" << fmt(d.R_t) << " Kq=" << fmt(d.K_q) << " Tq=" << fmt(d.T_q)
                << " Krt=" << fmt(d.K_r_t) << " Trt=" << fmt(d.T_r_t)
                << " Tpll=" << fmt(d.pll.t_filter) << " pll_vmin=" << fmt(d.pll.v_freeze);
            if (d.perfect_tracking) out << " pt=1";
            if (d.pss.enabled) {
                out << " pss=1 pss_K=" << fmt(d.pss.gain) << " pss_Tw=" << fmt(d.pss.t_washout)
                    << " pss_T1=" << fmt(d.pss.t1) << " pss_T2=" << fmt(d.pss.t2)
                    << " pss_T3=" << fmt(d.pss.t3) << " pss_T4=" << fmt(d.pss.t4)
                    << " pss_lim=" << fmt(d.pss.lim) << " pss_in=" << pss_input_name(d.pss.input)
                    << " pss_at=" << (d.pss.place == PssState::Place::QrefEq ? "qref" : "delta");
            }
            out << "\n";
        }
    }
    if (!cf.events.empty()) {
        out << "\n[events]\n";
        for (const auto& e : cf.events) {
            out << "t=" << fmt(e.t) << " kind=";
            switch (e.kind) {
                case Event::Kind::LoadScale:
                    out << "load_scale bus=" << e.bus << " factor=" << fmt(e.factor);
                    break;
                case Event::Kind::FaultApply:
                    out << "fault_apply bus=" << e.bus << " g=" << fmt(e.g_fault)
                        << " b=" << fmt(e.b_fault);
                    break;
                case Event::Kind::FaultClear:
                    out << "fault_clear bus=" << e.bus;
                    break;
                case Event::Kind::DeviceTrip:
                    out << "device_trip";
                    break;
            }
            out << "\n";
        }
    }
    return out.str();
}

namespace {

NetworkCase wscc9_network() {
    NetworkCase cs;
    cs.base_mva = 100.0;
    cs.base_freq_hz = 50.0;
    cs.omega_ref = 1.0;
    cs.buses = {
        {1, BusKind::Slack, 1.040, 0.0, 0.00, 0.00, 0.0, 0.0, false},
        {2, BusKind::PV, 1.025, 0.0, 0.00, 0.00, 0.0, 0.0, false},
        {3, BusKind::PV, 1.025, 0.0, 0.00, 0.00, 0.0, 0.0, false},
        {4, BusKind::PQ, 1.000, 0.0, 0.00, 0.00, 0.0, 0.0, false},
        {5, BusKind::PQ, 1.000, 0.0, 1.25, 0.50, 0.0, 0.0, false},
        {6, BusKind::PQ, 1.000, 0.0, 0.90, 0.30, 0.0, 0.0, false},
        {7, BusKind::PQ, 1.000, 0.0, 0.00, 0.00, 0.0, 0.0, false},
        {8, BusKind::PQ, 1.000, 0.0, 1.00, 0.35, 0.0, 0.0, false},
        {9, BusKind::PQ, 1.000, 0.0, 0.00, 0.00, 0.0, 0.0, false},
    };
    cs.branches = {
        {4, 5, 0.0100, 0.0850, 0.176, 1.0},
        {4, 6, 0.0170, 0.0920, 0.158, 1.0},
        {5, 7, 0.0320, 0.1610, 0.306, 1.0},
        {6, 9, 0.0390, 0.1700, 0.358, 1.0},
        {7, 8, 0.0085, 0.0720, 0.149, 1.0},
        {8, 9, 0.0119, 0.1008, 0.209, 1.0},
        {1, 4, 0.0000, 0.0576, 0.000, 1.0},
        {2, 7, 0.0000, 0.0625, 0.000, 1.0},
        {3, 9, 0.0000, 0.0586, 0.000, 1.0},
    };
    cs.p_gen = {{2, 1.63}, {3, 0.85}};
    return cs;
}

MachineDevice wscc9_machine(int bus) {
    MachineDevice m;
    m.bus = bus;
    m.rating = 100.0;  // constants below are already on the 100 MVA system base
    m.D = 2.0;
    m.T_m = 2.0;
    m.R = 0.05;
    m.K_r = 20.0;
    m.T_r = 0.2;
    if (bus == 1) {
        m.M = 47.28;
        m.x_d = 0.1460;
        m.x_d_t = 0.0608;
        m.T_d0_t = 8.96;
    } else if (bus == 2) {
        m.M = 12.80;
        m.x_d = 0.8958;
        m.x_d_t = 0.1198;
        m.T_d0_t = 6.00;
    } else {
        m.M = 6.02;
        m.x_d = 1.3125;
        m.x_d_t = 0.1813;
        m.T_d0_t = 5.89;
    }
    return m;
}

DualGfmDevice wscc9_gfm(int bus, bool irish) {
    DualGfmDevice d;
    d.bus = bus;
    if (irish) {
        d.K = 1.0;
        d.M_t = 15.0;
        d.D_t = 0.5;
        // converters near full load; see the irish-variant notes in the docs
        d.rating = (bus == 1) ? 75.0 : (bus == 2) ? 172.0 : 90.0;
    } else {
        d.K = 0.1;
        d.M_t = 30.0;
        d.D_t = 20.0;
        // sized so each converter runs inside its stable loading band
        d.rating = (bus == 1) ? 480.0 : (bus == 2) ? 1090.0 : 570.0;
    }
    d.T_m_t = 2.0;
    d.R_t = 0.05;
    d.K_q = 10.0;
    d.T_q = 5.0;
    d.K_r_t = 40.0;
    d.T_r_t = 1.0;
    d.pll.t_filter = 0.02;
    d.pll.v_freeze = 0.3;
    d.pss.enabled = true;
    d.pss.gain = 2.0;
    d.pss.t_washout = 5.0;
    d.pss.t1 = 0.3;
    d.pss.t2 = 0.1;
    d.pss.t3 = 0.3;
    d.pss.t4 = 0.1;
    d.pss.lim = 0.1;
    d.pss.input = PssState::Input::Q;
    d.pss.place = PssState::Place::DeltaEq;
    return d;
}

}  // namespace

CaseFile builtin_wscc9(Wscc9Variant variant) {
    CaseFile cf;
    cf.network = wscc9_network();
    switch (variant) {
        case Wscc9Variant::Machines:
            for (int b : {1, 2, 3}) cf.machines.push_back(wscc9_machine(b));
            break;
        case Wscc9Variant::DualGfm:
            for (int b : {1, 2, 3}) cf.gfms.push_back(wscc9_gfm(b, false));
            break;
        case Wscc9Variant::Mixed:
            cf.gfms.push_back(wscc9_gfm(1, false));
            for (int b : {2, 3}) cf.machines.push_back(wscc9_machine(b));
            break;
        case Wscc9Variant::DualGfmIrish:
            for (int b : {1, 2, 3}) cf.gfms.push_back(wscc9_gfm(b, true));
            cf.gfm_common_omega_set = true;
            break;
    }
    return cf;
}

const char* builtin_case_text_name(Wscc9Variant variant) {
    switch (variant) {
        case Wscc9Variant::Machines: return "wscc9-machines";
        case Wscc9Variant::DualGfm: return "wscc9-dualgfm";
        case Wscc9Variant::Mixed: return "wscc9-mixed";
        case Wscc9Variant::DualGfmIrish: return "wscc9-dualgfm-irish";
    }
    return "";
}

bool lookup_builtin(const std::string& name, Wscc9Variant& out) {
    for (auto v : {Wscc9Variant::Machines, Wscc9Variant::DualGfm, Wscc9Variant::Mixed,
                   Wscc9Variant::DualGfmIrish}) {
        if (name == builtin_case_text_name(v)) {
            out = v;
            return true;
        }
    }
    return false;
}

std::vector<Event> paper_events(PaperScenario scenario) {
    if (scenario == PaperScenario::Fig3) {
        Event ev;
        ev.t = 1.0;
        ev.kind = Event::Kind::LoadScale;
        ev.bus = 5;
        ev.factor = 0.8;
        return {ev};
    }
    Event on, off;
    on.t = 1.0;
    on.kind = Event::Kind::FaultApply;
    on.bus = 7;
    on.g_fault = 1e4;
    on.b_fault = 0.0;
    off.t = 1.06;  // three cycles at 50 Hz
    off.kind = Event::Kind::FaultClear;
    off.bus = 7;
    return {on, off};
}

}  // namespace dualgfm
