#include "cavityswap/analytic.hpp"

#include <cmath>
#include <numbers>

namespace cavityswap {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw ConfigError(msg);
}

} // namespace

PhaseFactors phase_factors(const ProtocolConfig& config) {
    require(config.lambda() > 0.0, "phase factors undefined for lambda <= 0");
    PhaseFactors f;
    for (const auto& p : config.pairs()) {
        f.phi.push_back(0.5 + (p.g * p.g / p.delta) / (2.0 * config.lambda()));
        f.theta.push_back(0.5 + (p.mu * p.mu / p.delta) / (2.0 * config.lambda()));
    }
    return f;
}

Scenario scenario_from_name(std::string_view name) {
    if (name == "i") return Scenario::I;
    if (name == "ii") return Scenario::II;
    if (name == "iii") return Scenario::III;
    if (name == "iv") return Scenario::IV;
    if (name == "epr-input") return Scenario::EprInput;
    if (name == "custom") return Scenario::Custom;
    throw ConfigError("unknown scenario name: " + std::string(name));
}

std::string scenario_name(Scenario s) {
    switch (s) {
        case Scenario::I: return "i";
        case Scenario::II: return "ii";
        case Scenario::III: return "iii";
        case Scenario::IV: return "iv";
        case Scenario::EprInput: return "epr-input";
        case Scenario::Custom: return "custom";
    }
    return "unknown";
}

Eigen::Matrix2cd BeamSplitterMap::mode_map() const {
    const double c = std::cos(lambda * t);
    const Complex is(0.0, std::sin(lambda * t));
    Eigen::Matrix2cd m;
    m << c, is, is, c;
    return m;
}

BeamSplitterMap beam_splitter_map(double lambda, double t) {
    require(lambda > 0.0, "lambda must be positive");
    require(t >= 0.0, "t must be non-negative");
    return BeamSplitterMap{lambda, t};
}

Operator pair_unitary(double lambda, double t, int fock_cutoff) {
    const int d = fock_cutoff;
    require(d >= 2, "fock_cutoff must be >= 2");
    // He restricted to one pair: -lambda (a b^dag + a^dag b) on d x d modes,
    // a varying fastest.
    const long dim = static_cast<long>(d) * d;
    Operator he = Operator::Zero(dim, dim);
    auto idx = [d](int na, int nb) { return na + d * nb; };
    for (int na = 1; na < d; ++na) {
        for (int nb = 0; nb + 1 < d; ++nb) {
            // a b^dag |na, nb> = sqrt(na (nb+1)) |na-1, nb+1>
            const double amp = std::sqrt(double(na) * double(nb + 1));
            he(idx(na - 1, nb + 1), idx(na, nb)) = -lambda * amp;
            he(idx(na, nb), idx(na - 1, nb + 1)) = -lambda * amp;
        }
    }
    return expm(he, Complex(0.0, -t));
}

IdealSwapResult ideal_swapped_state(const ScenarioState& initial,
                                    const ProtocolConfig& config,
                                    const SystemLayout& layout) {
    const QuantumState& in = initial.state;
    require(in.dim() == layout.dim(), "initial state does not match layout");

    const QubitOps q = qubit_ops(layout);
    const Operator rho0 = in.density_matrix();
    const double e_pop = (q.proj_e * rho0).trace().real();
    if (std::abs(e_pop) > 1e-12)
        throw ConfigError("ideal swap requires the qubit in the |g> sector");

    const double t = config.t_swap();
    const EffectiveHamiltonians eff = effective_hamiltonians(config, layout);
    const Operator he = swap_hamiltonian(config, layout);
    const Operator u = expm(eff.h0, Complex(0.0, -t)) * expm(he, Complex(0.0, -t));

    const PhaseFactors phases = phase_factors(config);
    if (in.is_pure())
        return IdealSwapResult{QuantumState::pure(u * in.vector(), Frame::Interaction),
                               phases};
    return IdealSwapResult{
        QuantumState::mixed(u * rho0 * u.adjoint(), Frame::Interaction), phases};
}

QuantumState epr_target_state(int n_pairs, const ProtocolConfig& config,
                              const SystemLayout& layout) {
    require(n_pairs >= 1, "n_pairs must be >= 1");
    require(layout.n_pairs() == n_pairs, "layout does not match n_pairs");
    require(config.n_pairs() == n_pairs, "config does not match n_pairs");

    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    const Complex i_unit(0.0, 1.0);
    // Accumulated Stark phase at lambda t = pi/4 with one photon per pair.
    const Complex global = std::exp(i_unit * (double(n_pairs) * std::numbers::pi / 4.0));

    StateVector psi = StateVector::Zero(layout.dim());
    std::vector<int> occ(layout.n_modes(), 0);
    // Sum over the 2^N choices of which side of each pair holds the photon.
    for (long mask = 0; mask < (1L << n_pairs); ++mask) {
        Complex amp = global;
        for (int j = 0; j < n_pairs; ++j) {
            const bool photon_in_b = (mask >> j) & 1;
            occ[layout.mode_a(j)] = photon_in_b ? 0 : 1;
            occ[layout.mode_b(j)] = photon_in_b ? 1 : 0;
            amp *= photon_in_b ? i_unit * inv_sqrt2 : Complex(inv_sqrt2, 0.0);
        }
        psi(layout.basis_index(occ, QubitLevel::Ground)) = amp;
    }
    return QuantumState::pure(std::move(psi), Frame::Interaction);
}

} // namespace cavityswap
