#pragma once

// Closed-form propagation under the beam-splitter Hamiltonian He: exact
// swap/transfer maps, photon-number phase bookkeeping, ideal target states
// and EPR-pair states.

#include <string>
#include <string_view>

#include "cavityswap/model.hpp"

namespace cavityswap {

// Photon-number-dependent phase shifts acquired on top of the bare swap:
// phi_k = 1/2 + (g_k^2/Delta_k)/(2 lambda), theta_j likewise with mu_j.
// All exactly 1 under the standard protocol.
struct PhaseFactors {
    std::vector<double> phi;     // one per pair, a-set phases
    std::vector<double> theta;   // one per pair, b-set phases
};
PhaseFactors phase_factors(const ProtocolConfig& config);

enum class Scenario { I, II, III, IV, EprInput, Custom };
Scenario scenario_from_name(std::string_view name);
std::string scenario_name(Scenario s);

// An initial condition of all 2N cavities with the qubit in |g>.
struct ScenarioState {
    Scenario scenario = Scenario::Custom;
    QuantumState state;
};

// Two-mode beam-splitter rotation generated by He on one pair:
// a^dag -> cos(lambda t) a^dag + i sin(lambda t) b^dag and symmetrically.
struct BeamSplitterMap {
    double lambda = 0.0;
    double t = 0.0;
    Eigen::Matrix2cd mode_map() const;   // [[cos, i sin], [i sin, cos]]
};
BeamSplitterMap beam_splitter_map(double lambda, double t);

// exp(-i He t) restricted to a single (a_j, b_j) pair, as a d^2 x d^2
// unitary (a varying fastest).
Operator pair_unitary(double lambda, double t, int fock_cutoff);

struct IdealSwapResult {
    QuantumState state;    // interaction picture, qubit in |g>
    PhaseFactors phases;
};

// The decoherence-free outcome of the exchange at t = pi/(2 lambda):
// exp(-i H0 t) exp(-i He t) applied to the initial state.  The initial
// state must live in the qubit |g> sector.
IdealSwapResult ideal_swapped_state(const ScenarioState& initial,
                                    const ProtocolConfig& config,
                                    const SystemLayout& layout);

// tensor_j (|1>_aj |0>_bj + i |0>_aj |1>_bj)/sqrt(2) with the accumulated
// global phase e^{i N lambda t} at lambda t = pi/4, qubit in |g>.
QuantumState epr_target_state(int n_pairs, const ProtocolConfig& config,
                              const SystemLayout& layout);

} // namespace cavityswap
