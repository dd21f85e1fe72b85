#include "cavityswap/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace cavityswap {

namespace {

// Clips tiny negative roundoff eigenvalues; rejects genuine negativity.
Eigen::VectorXd clipped_eigenvalues(const Eigen::VectorXd& eigs, const char* what) {
    const double min_eig = eigs.minCoeff();
    if (min_eig < -1e-6)
        throw NumericalError(std::string(what) + " is not positive semidefinite (min eig " +
                             std::to_string(min_eig) + ")");
    return eigs.cwiseMax(0.0);
}

Operator psd_sqrt(const Operator& rho, const char* what) {
    Eigen::SelfAdjointEigenSolver<Operator> es(0.5 * (rho + rho.adjoint()));
    if (es.info() != Eigen::Success)
        throw NumericalError("eigendecomposition failed in fidelity");
    const Eigen::VectorXd eigs = clipped_eigenvalues(es.eigenvalues(), what);
    return es.eigenvectors() * eigs.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace

double FidelityValue::value() const { return std::clamp(raw, 0.0, 1.0); }

FidelityValue uhlmann_fidelity(const QuantumState& target, const QuantumState& actual) {
    if (target.dim() != actual.dim())
        throw ConfigError("fidelity requires states of equal dimension");

    if (target.is_pure()) {
        const StateVector& psi = target.vector();
        double overlap;
        if (actual.is_pure()) {
            overlap = std::norm(psi.dot(actual.vector()));
        } else {
            overlap = (psi.adjoint() * actual.matrix() * psi)(0).real();
        }
        overlap = std::max(overlap, 0.0);
        return FidelityValue{std::sqrt(overlap)};
    }
    if (actual.is_pure()) {
        // F is symmetric; reuse the pure shortcut.
        return uhlmann_fidelity(actual, target);
    }

    const Operator root = psd_sqrt(target.matrix(), "target state");
    const Operator inner = root * actual.matrix() * root;
    Eigen::SelfAdjointEigenSolver<Operator> es(0.5 * (inner + inner.adjoint()),
                                               Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericalError("eigendecomposition failed in fidelity");
    const Eigen::VectorXd eigs = clipped_eigenvalues(es.eigenvalues(), "fidelity kernel");
    return FidelityValue{eigs.cwiseSqrt().sum()};
}

double purity(const QuantumState& state) {
    if (state.is_pure()) return 1.0;
    return (state.matrix() * state.matrix()).trace().real();
}

double excitation_expectation(const QuantumState& state, const SystemLayout& layout) {
    if (state.dim() != layout.dim())
        throw ConfigError("state does not match layout");
    const Operator n_tot = total_excitation_op(layout);
    if (state.is_pure())
        return (state.vector().adjoint() * n_tot * state.vector())(0).real();
    return (n_tot * state.matrix()).trace().real();
}

double qubit_e_population(const QuantumState& state, const SystemLayout& layout) {
    if (state.dim() != layout.dim())
        throw ConfigError("state does not match layout");
    const long half = layout.dim() / 2;
    if (state.is_pure()) return state.vector().tail(half).squaredNorm();
    double pop = 0.0;
    for (long i = half; i < layout.dim(); ++i) pop += state.matrix()(i, i).real();
    return pop;
}

Eigen::VectorXd mode_populations(const QuantumState& state, const SystemLayout& layout) {
    if (state.dim() != layout.dim())
        throw ConfigError("state does not match layout");
    Eigen::VectorXd pops = Eigen::VectorXd::Zero(layout.n_modes());
    std::vector<int> occ(layout.n_modes());
    int qubit = 0;
    if (state.is_pure()) {
        const StateVector& psi = state.vector();
        for (long idx = 0; idx < layout.dim(); ++idx) {
            const double w = std::norm(psi(idx));
            if (w == 0.0) continue;
            layout.basis_occupations(idx, occ, qubit);
            for (int m = 0; m < layout.n_modes(); ++m) pops(m) += w * occ[m];
        }
        return pops;
    }
    const Operator& rho = state.matrix();
    for (long idx = 0; idx < layout.dim(); ++idx) {
        const double w = rho(idx, idx).real();
        if (w == 0.0) continue;
        layout.basis_occupations(idx, occ, qubit);
        for (int m = 0; m < layout.n_modes(); ++m) pops(m) += w * occ[m];
    }
    return pops;
}

} // namespace cavityswap
