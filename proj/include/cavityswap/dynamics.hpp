#pragma once

// Time evolution: exact Schrodinger propagation (validation path) and
// Lindblad master-equation integration with cavity decay, qubit relaxation
// and qubit dephasing.
//
// Integration happens in the time-independent rotating frame; apply
// frame_to_interaction before comparing against interaction-picture targets.
// The frame change commutes with every dissipator used here, so the two
// descriptions are physically identical.

#include <functional>

#include "cavityswap/expv.hpp"
#include "cavityswap/model.hpp"

namespace cavityswap {

struct IntegratorOptions {
    enum class Method { FixedRk4, Adaptive };
    Method method = Method::Adaptive;

    // Fixed-RK4 step (seconds).  0 selects the default
    // min(0.002/max|Delta_j|, t_final/2000).
    double dt = 0.0;
    // Steps between recorded samples for fixed-rk4; 0 aims for ~32 samples.
    int record_stride = 0;

    // Adaptive (Krylov) local error tolerance and subspace dimension.
    double tolerance = 1e-11;
    int krylov_dim = 30;
    // Recorded samples including both endpoints (adaptive method).
    int samples = 33;

    // Positivity/trace monitoring at recorded samples.
    bool monitor = true;

    void validate() const;
};

struct SampleDiagnostics {
    double trace_error = 0.0;         // |Tr rho - 1|
    double hermiticity_error = 0.0;   // max |rho - rho^dag|
    double min_eigenvalue = 0.0;
    double qubit_e_population = 0.0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<QuantumState> states;
    std::vector<SampleDiagnostics> diagnostics;

    const QuantumState& final_state() const;
    double max_trace_error() const;
    double max_hermiticity_error() const;
    double min_eigenvalue() const;
    double max_qubit_e_population() const;
};

// Which Hamiltonian drives the Lindblad evolution: the full rotating-frame
// Hamiltonian, or the dispersive effective one (H0 + HI, already in the
// interaction picture).  Output states are frame-tagged accordingly.
enum class HamiltonianKind { Rotating, Effective };

using HamiltonianBuilder = std::function<Operator(double)>;

// Constant Hamiltonian.  Adaptive method propagates by exact
// eigendecomposition; fixed-rk4 steps the ODE.
Trajectory evolve_schrodinger(const Operator& h, const QuantumState& psi0,
                              double t_final, const IntegratorOptions& options = {});

// Time-dependent Hamiltonian, stepped with midpoint exponentials (adaptive)
// or RK4.  options.dt must be set small enough to resolve the fastest phase
// in h_of_t (dt <= 0.01/max|Delta_j| for the full Hamiltonian).
Trajectory evolve_schrodinger(const HamiltonianBuilder& h_of_t, const QuantumState& psi0,
                              double t_final, const IntegratorOptions& options);

// d rho/dt = -i[H, rho] + sum_j kappa_j L[a_j] + sum_j kappa'_j L[b_j]
//            + gamma_phi (Sz rho Sz - rho) + gamma L[S-]
Trajectory evolve_lindblad(const ProtocolConfig& config, const DecoherenceConfig& decoherence,
                           const SystemLayout& layout, const QuantumState& rho0,
                           double t_final, const IntegratorOptions& options = {},
                           HamiltonianKind kind = HamiltonianKind::Rotating);

// Applies the diagonal frame map D(t) = exp(-i sum_j Delta_j (n_aj + n_bj) t)
// taking a rotating-frame state to the interaction picture.
QuantumState frame_to_interaction(const QuantumState& rho_rotating, double t,
                                  const ProtocolConfig& config, const SystemLayout& layout);

} // namespace cavityswap
