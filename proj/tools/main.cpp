// Command-line driver: fidelity sweeps, single operating points, EPR-pair
// generation, dispersive validity checks and a quick selftest.
//
// Exit codes: 0 success, 1 invalid configuration, 2 numerical failure.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cavityswap/harness.hpp"

using namespace cavityswap;

namespace {

struct CommonArgs {
    std::string config;
    std::string out;
    int cutoff = 0;
    bool no_dissipation = false;
    std::string sz_convention;
    std::string format;
    bool ideal_limit = false;
    int jobs = -1;
};

void add_common_options(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config, "JSON configuration file");
    cmd->add_option("--out", args.out, "output file path");
    cmd->add_option("--cutoff", args.cutoff, "Fock levels kept per mode (d >= 2)");
    cmd->add_flag("--no-dissipation", args.no_dissipation, "zero all decoherence rates");
    cmd->add_option("--sz-convention", args.sz_convention,
                    "qubit Sz normalization in the dephasing term")
        ->check(CLI::IsMember({"unhalved", "halved"}));
    cmd->add_option("--format", args.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_flag("--ideal-limit", args.ideal_limit,
                  "evolve under the dispersive effective Hamiltonian H0 + HI");
    cmd->add_option("--jobs", args.jobs, "worker threads (0 = hardware count)");
}

SweepSpec build_spec(const CommonArgs& args) {
    SweepSpec spec = args.config.empty() ? default_sweep_spec() : load_spec(args.config);
    if (args.cutoff > 0) spec.fock_cutoff = args.cutoff;
    if (args.no_dissipation) spec.decoherence = DecoherenceConfig::none(spec.n_pairs);
    if (args.sz_convention == "halved")
        spec.decoherence.sz_convention = SzConvention::Halved;
    else if (args.sz_convention == "unhalved")
        spec.decoherence.sz_convention = SzConvention::Unhalved;
    if (args.format == "csv") spec.format = OutputFormat::Csv;
    else if (args.format == "json") spec.format = OutputFormat::Json;
    if (args.ideal_limit) spec.hamiltonian = HamiltonianKind::Effective;
    if (args.jobs >= 0) spec.jobs = args.jobs;
    if (!args.out.empty()) spec.output_path = args.out;
    return spec;
}

void emit(const std::string& body, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << body;
    } else {
        write_file_atomic(out_path, body);
        std::cout << "wrote " << out_path << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simultaneous cavity-set state exchange via one coupler qubit"};
    app.require_subcommand(1);

    CommonArgs sweep_args;
    double b_min = 11.0, b_max = 31.0;
    int b_steps = 0;
    bool fine = false;
    std::vector<std::string> sweep_scenarios;
    CLI::App* sweep = app.add_subcommand("sweep", "fidelity versus b = Delta_1/g_1");
    add_common_options(sweep, sweep_args);
    sweep->add_option("--b-min", b_min, "lowest b");
    sweep->add_option("--b-max", b_max, "highest b");
    sweep->add_option("--b-steps", b_steps, "number of grid points");
    sweep->add_flag("--fine", fine, "double the default grid density (step 1)");
    sweep->add_option("--scenario", sweep_scenarios, "scenarios to run (i ii iii iv)");

    CommonArgs point_args;
    double point_b = 21.0;
    std::string point_scenario = "i";
    CLI::App* point = app.add_subcommand("point", "single (b, scenario) fidelity");
    add_common_options(point, point_args);
    point->add_option("--b", point_b, "operating point b = Delta_1/g_1")->required();
    point->add_option("--scenario", point_scenario, "scenario name")->required();

    CommonArgs epr_args;
    double epr_b = 21.0;
    int epr_pairs = 0;
    CLI::App* epr = app.add_subcommand("epr", "simultaneous EPR-pair generation");
    add_common_options(epr, epr_args);
    epr->add_option("--b", epr_b, "operating point b = Delta_1/g_1");
    epr->add_option("--n-pairs", epr_pairs, "number of cavity pairs");

    CommonArgs check_args;
    double check_b = 21.0;
    CLI::App* check = app.add_subcommand("check", "dispersive validity report");
    add_common_options(check, check_args);
    check->add_option("--b", check_b, "operating point b = Delta_1/g_1");

    app.add_subcommand("selftest", "run the built-in invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (sweep->parsed()) {
            SweepSpec spec = build_spec(sweep_args);
            if (b_steps > 0) {
                spec.b_values.clear();
                for (int k = 0; k < b_steps; ++k) {
                    spec.b_values.push_back(
                        b_steps == 1 ? b_min
                                     : b_min + (b_max - b_min) * double(k) / double(b_steps - 1));
                }
            } else if (fine) {
                spec.b_values.clear();
                for (double b = b_min; b <= b_max + 1e-9; b += 1.0) spec.b_values.push_back(b);
            }
            if (!sweep_scenarios.empty()) {
                spec.scenarios.clear();
                for (const auto& name : sweep_scenarios)
                    spec.scenarios.push_back(scenario_from_name(name));
            }
            const auto records = run_fidelity_sweep(spec);
            std::cout << "wrote " << records.size() << " records to " << spec.output_path
                      << "\n";
            for (const auto& r : records) {
                if (r.flagged)
                    std::cerr << "warning: trace error " << r.trace_error << " at b = " << r.b
                              << ", scenario " << scenario_name(r.scenario) << "\n";
            }
        } else if (point->parsed()) {
            SweepSpec spec = build_spec(point_args);
            const SweepRecord rec =
                run_swap_point(point_b, scenario_from_name(point_scenario), spec);
            const std::vector<SweepRecord> one{rec};
            emit(spec.format == OutputFormat::Json ? to_json(one) : to_csv(one),
                 point_args.out);
        } else if (epr->parsed()) {
            SweepSpec spec = build_spec(epr_args);
            const int n = epr_pairs > 0 ? epr_pairs : spec.n_pairs;
            const EprRecord rec = run_epr_generation(n, epr_b, spec);
            emit(to_json(rec), epr_args.out);
        } else if (check->parsed()) {
            SweepSpec spec = build_spec(check_args);
            const ValidityReport report = run_validity_check(check_b, spec);
            emit(spec.format == OutputFormat::Json ? to_json(report)
                                                   : format_validity_report(report),
                 check_args.out);
        } else {
            const int failures = run_selftest(std::cout);
            if (failures > 0) {
                std::cerr << failures << " selftest check(s) failed\n";
                return 2;
            }
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
