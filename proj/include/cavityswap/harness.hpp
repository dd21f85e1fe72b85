#pragma once

// Experiment definitions: the four exchange scenarios, the fidelity-vs-b
// sweep, EPR-pair generation, configuration loading and CSV/JSON emission.

#include <iosfwd>
#include <string>
#include <vector>

#include "cavityswap/analytic.hpp"
#include "cavityswap/dynamics.hpp"
#include "cavityswap/metrics.hpp"

namespace cavityswap {

enum class OutputFormat { Csv, Json };

struct SweepSpec {
    std::vector<double> b_values;       // all > 1
    std::vector<Scenario> scenarios;
    int n_pairs = 2;
    int fock_cutoff = 3;
    long dimension_cap = 10'000;
    // Pair detunings (rad/s).  Missing entries extend geometrically,
    // Delta_{j+1} = Delta_j / 2, matching the paper's 1 GHz / 0.5 GHz split.
    std::vector<double> deltas;
    DecoherenceConfig decoherence;
    IntegratorOptions integrator;
    HamiltonianKind hamiltonian = HamiltonianKind::Rotating;
    std::string output_path = "sweep.csv";
    OutputFormat format = OutputFormat::Csv;
    int jobs = 0;                        // worker threads; 0 = hardware count

    void validate() const;
};

// Paper defaults: b in {11, 13, ..., 31}, scenarios (i)-(iv), N = 2, d = 3,
// Delta/2pi = 1 and 0.5 GHz, paper decoherence rates.
SweepSpec default_sweep_spec();

// JSON document with top-level keys {system, couplings, decoherence,
// integrator, sweep, output}; all keys optional, missing ones keep the
// defaults.  Frequencies are given as {"value": x, "unit": "GHz"} meaning
// x = omega/2pi; decoherence entries accept a rate ("1/us") or a lifetime
// ("us").
SweepSpec load_spec(const std::string& path);

struct SweepRecord {
    double b = 0.0;
    Scenario scenario = Scenario::Custom;
    double fidelity = 0.0;
    double t_swap = 0.0;            // seconds
    double trace_error = 0.0;
    double min_eig = 0.0;
    double qubit_e_pop_max = 0.0;
    double wall_time = 0.0;         // seconds
    bool flagged = false;           // trace_error exceeded 1e-8
};

struct EprRecord {
    int n_pairs = 0;
    double b = 0.0;
    double t_epr = 0.0;             // seconds
    double fidelity = 0.0;          // against the full N-pair target
    std::vector<double> pair_fidelities;
    double trace_error = 0.0;
    double min_eig = 0.0;
    double qubit_e_pop_max = 0.0;
    double wall_time = 0.0;
};

// Initial cavity states with the qubit in |g>.  Scenarios i-iv require
// N = 2; epr-input works for any N.
ScenarioState scenario_initial_state(Scenario scenario, const SystemLayout& layout);

// One (b, scenario) point: derive the operating parameters, integrate the
// master equation to t_swap, map to the interaction picture and compare
// against the analytic ideal.
SweepRecord run_swap_point(double b, Scenario scenario, const SweepSpec& spec);

// Full sweep; rows ordered scenario-major with b ascending, written
// atomically to spec.output_path.
std::vector<SweepRecord> run_fidelity_sweep(const SweepSpec& spec);

// EPR generation from the epr-input state for t_epr = pi/(4 lambda),
// with per-pair fidelities from the reduced pair states.
EprRecord run_epr_generation(int n_pairs, double b, const SweepSpec& spec);

ValidityReport run_validity_check(double b, const SweepSpec& spec);

// Header exactly: b,scenario,fidelity,t_swap_ns,trace_error,min_eig,
// qubit_e_pop_max,wall_time_s
std::string to_csv(const std::vector<SweepRecord>& records);
std::string to_json(const std::vector<SweepRecord>& records);
std::string to_json(const EprRecord& record);
std::string to_json(const ValidityReport& report);
std::string format_validity_report(const ValidityReport& report);

// Writes via a temp file in the same directory plus rename.
void write_file_atomic(const std::string& path, const std::string& content);

// Fast invariant suite; prints one line per check, returns failure count.
int run_selftest(std::ostream& out);

} // namespace cavityswap
