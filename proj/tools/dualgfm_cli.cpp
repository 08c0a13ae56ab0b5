#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dualgfm/analysis.hpp"
#include "dualgfm/io.hpp"
#include "dualgfm/scenario.hpp"

namespace {

using namespace dualgfm;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConvergence = 2;
constexpr int kExitCase = 3;

CaseFile load_case(const std::string& spec) {
    Wscc9Variant v;
    if (lookup_builtin(spec, v)) return builtin_wscc9(v);
    std::ifstream in(spec, std::ios::binary);
    if (!in) throw CaseError("cannot open case file '" + spec + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_case(buf.str());
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-")
        std::cout << content;
    else
        write_file_atomic(path, content);
}

struct Options {
    std::string case_spec;
    std::string scenario = "none";
    std::string out;
    std::string select = "all";
    double t_stop = 20.0;
    double dt = 0.005;
    int verbosity = 0;
};

int run_pf(const Options& opt) {
    CaseFile cf = load_case(opt.case_spec);
    const PowerFlowResult pf = solve_powerflow(cf.network);
    emit(opt.out, powerflow_csv(cf.network, pf));
    if (opt.verbosity > 0)
        std::cerr << "power flow converged in " << pf.iterations
                  << " iterations, mismatch " << pf.mismatch << "\n";
    return kExitOk;
}

int run_eq(const Options& opt) {
    CaseFile cf = load_case(opt.case_spec);
    GridSystem sys(cf.network, cf.machines, cf.gfms);
    SystemState guess = sys.initial_guess(cf.gfm_common_omega_set);
    EquilibriumInfo info;
    const SystemState eq = solve_equilibrium(sys, guess, {}, &info);

    std::ostringstream out;
    out << "name,value\n";
    out << "delta_omega," << format_number(info.delta_omega) << "\n";
    out << "residual," << format_number(info.residual) << "\n";
    const auto names = sys.state_names();
    for (size_t i = 0; i < names.size(); ++i)
        out << names[i] << "," << format_number(eq.x(static_cast<int>(i))) << "\n";
    for (int i = 0; i < sys.n_bus(); ++i) {
        out << "bus" << sys.network().buses[i].id << ".v," << format_number(eq.y(2 * i))
            << "\n";
        out << "bus" << sys.network().buses[i].id << ".theta,"
            << format_number(eq.y(2 * i + 1)) << "\n";
    }
    emit(opt.out, out.str());
    return kExitOk;
}

int run_run(const Options& opt) {
    if (opt.dt <= 0.0 || opt.t_stop <= 0.0 || opt.t_stop < opt.dt)
        throw CLI::ValidationError("run", "t_stop and dt must be positive with t_stop >= dt");
    CaseFile cf = load_case(opt.case_spec);
    std::vector<Event> events = cf.events;
    if (opt.scenario == "fig3")
        events = paper_events(PaperScenario::Fig3);
    else if (opt.scenario == "fig4")
        events = paper_events(PaperScenario::Fig4);
    else if (opt.scenario != "none")
        throw CLI::ValidationError("run", "scenario must be fig3|fig4|none");

    GridSystem sys(cf.network, cf.machines, cf.gfms);
    SystemState eq = solve_equilibrium(sys, sys.initial_guess(cf.gfm_common_omega_set));
    SolverConfig cfg;
    cfg.dt = opt.dt;
    cfg.t_stop = opt.t_stop;
    const SimResult res = run_simulation(sys, eq, events, cfg);

    OutputSet set = OutputSet::All;
    if (opt.select == "devices") set = OutputSet::Devices;
    else if (opt.select == "buses") set = OutputSet::Buses;
    else if (opt.select != "all")
        throw CLI::ValidationError("run", "select must be devices|buses|all");

    emit(opt.out, simresult_csv(sys, res, set));
    if (opt.verbosity > 0) {
        const Metrics m = compute_metrics(sys, res);
        std::cerr << metrics_report(m);
    }
    if (!res.complete) {
        std::cerr << "simulation aborted early; partial results written\n";
        return kExitConvergence;
    }
    return kExitOk;
}

int run_eig(const Options& opt) {
    CaseFile cf = load_case(opt.case_spec);
    GridSystem sys(cf.network, cf.machines, cf.gfms);
    const SystemState eq = solve_equilibrium(sys, sys.initial_guess(cf.gfm_common_omega_set));
    const Eigen::MatrixXd A = linearize(sys, eq);
    emit(opt.out, spectrum_csv(eigenvalues(A), sys.network().base_freq_hz));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dual grid-forming converter phasor simulator"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* sub, bool sim) {
        sub->add_option("--case", opt.case_spec,
                        "case file path or builtin name (wscc9-machines, wscc9-dualgfm, "
                        "wscc9-mixed, wscc9-dualgfm-irish)")
            ->required();
        sub->add_option("--out", opt.out, "output path ('-' for stdout)");
        sub->add_flag_function("-v", [&](int n) { opt.verbosity = n; }, "verbose diagnostics");
        if (sim) {
            sub->add_option("--scenario", opt.scenario, "fig3|fig4|none");
            sub->add_option("--tstop", opt.t_stop, "simulation horizon, s");
            sub->add_option("--dt", opt.dt, "integration step, s");
            sub->add_option("--select", opt.select, "output set: devices|buses|all");
        }
    };
    add_common(app.add_subcommand("pf", "Newton-Raphson power flow"), false);
    add_common(app.add_subcommand("eq", "equilibrium initialization"), false);
    add_common(app.add_subcommand("run", "time-domain simulation"), true);
    add_common(app.add_subcommand("eig", "small-signal spectrum"), false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand("pf")) return run_pf(opt);
        if (app.got_subcommand("eq")) return run_eq(opt);
        if (app.got_subcommand("run")) return run_run(opt);
        if (app.got_subcommand("eig")) return run_eig(opt);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "case error: " << e.what() << "\n";
        return kExitCase;
    } catch (const CaseError& e) {
        std::cerr << "case error: " << e.what() << "\n";
        return kExitCase;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence failure: " << e.what() << "\n";
        return kExitConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConvergence;
    }
    return kExitUsage;
}
