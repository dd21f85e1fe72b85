#pragma once

// State comparison and diagnostics: Uhlmann fidelity, purity, populations,
// excitation counts.

#include "cavityswap/hilbert.hpp"

namespace cavityswap {

struct FidelityValue {
    double raw = 0.0;   // may exceed 1 by roundoff
    double value() const;   // clamped to [0, 1]
};

// F = Tr sqrt( sqrt(rho_target) rho sqrt(rho_target) ).  Pure targets take
// the sqrt(<psi|rho|psi>) shortcut.  Eigenvalues in [-1e-12, 0) are clipped
// to zero; anything below -1e-6 raises NumericalError.
FidelityValue uhlmann_fidelity(const QuantumState& target, const QuantumState& actual);

double purity(const QuantumState& state);                                   // Tr rho^2
double excitation_expectation(const QuantumState& state, const SystemLayout& layout);
double qubit_e_population(const QuantumState& state, const SystemLayout& layout);
Eigen::VectorXd mode_populations(const QuantumState& state, const SystemLayout& layout);

} // namespace cavityswap
