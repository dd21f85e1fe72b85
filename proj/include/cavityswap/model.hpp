#pragma once

// Protocol parameterization and Hamiltonian construction for 2N cavities
// dispersively coupled to one two-level qubit.  All frequencies are angular
// (rad/s); quoted lab values like "Delta/2pi = 1 GHz" convert on load.

#include <string>
#include <vector>

#include "cavityswap/hilbert.hpp"

namespace cavityswap {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Paper operating point defaults: Delta_1/2pi = 1 GHz, Delta_2/2pi = 0.5 GHz.
inline constexpr double kDefaultDelta1 = kTwoPi * 1.0e9;
inline constexpr double kDefaultDelta2 = kTwoPi * 0.5e9;

struct PairCoupling {
    double g = 0.0;      // qubit <-> a_j coupling (rad/s)
    double mu = 0.0;     // qubit <-> b_j coupling (rad/s)
    double delta = 0.0;  // common detuning of the pair (rad/s)
    double lambda() const { return g * mu / delta; }
};

class ProtocolConfig {
public:
    // Standard protocol: g_j = mu_j exactly and lambda_j identical across
    // pairs within 1e-12 relative.  Throws ConfigError otherwise.
    static ProtocolConfig standard(std::vector<PairCoupling> pairs);
    // No g = mu / lambda constraints; the target lambda is supplied.
    static ProtocolConfig custom(std::vector<PairCoupling> pairs, double lambda_target);

    int n_pairs() const { return static_cast<int>(pairs_.size()); }
    const PairCoupling& pair(int j) const { return pairs_.at(j); }
    const std::vector<PairCoupling>& pairs() const { return pairs_; }
    bool is_standard() const { return standard_; }

    double lambda() const { return lambda_; }
    double t_swap() const;   // pi / (2 lambda)
    double t_epr() const;    // pi / (4 lambda)
    double max_delta() const;

private:
    ProtocolConfig() = default;
    std::vector<PairCoupling> pairs_;
    double lambda_ = 0.0;
    bool standard_ = false;
};

struct DecoherenceConfig {
    std::vector<double> kappa_a;   // photon decay rate of a_j (1/s)
    std::vector<double> kappa_b;   // photon decay rate of b_j (1/s)
    double gamma = 0.0;            // qubit relaxation rate (1/s)
    double gamma_phi = 0.0;        // qubit pure dephasing rate (1/s)
    SzConvention sz_convention = SzConvention::Unhalved;

    // Paper rates: kappa^-1 = 20 us for all cavities, gamma^-1 = 50 us,
    // gamma_phi^-1 = 5 us.
    static DecoherenceConfig paper_defaults(int n_pairs);
    static DecoherenceConfig none(int n_pairs);

    bool all_zero() const;
    void validate(int n_pairs) const;   // rates >= 0, sizes match
};

enum class Verdict { Pass, Warn, Fail };
std::string verdict_name(Verdict v);
Verdict worst(Verdict a, Verdict b);

// Dimensionless "much greater than" score thresholds: >= 50 pass,
// [10, 50) warn, < 10 fail.
inline constexpr double kValidityPassRatio = 50.0;
inline constexpr double kValidityWarnRatio = 10.0;
Verdict classify_ratio(double ratio);

struct PairDetuningCheck {
    int pair;               // 0-based
    double delta_over_g;
    double delta_over_mu;
    Verdict verdict;
};

struct CrossPairCheck {
    int pair_j, pair_k;     // 0-based, j < k
    double detuning_scale;  // |Delta_j - Delta_k| / (Delta_j^-1 + Delta_k^-1), rad^2/s^2
    double vs_gg;           // detuning_scale / (g_j g_k)
    double vs_gmu;          // detuning_scale / (g_j mu_k)
    double vs_mumu;         // detuning_scale / (mu_j mu_k)
    Verdict verdict;
};

struct ValidityReport {
    std::vector<PairDetuningCheck> large_detuning;
    std::vector<CrossPairCheck> cross_pair;
    Verdict overall = Verdict::Pass;
    std::string note;
};

// H(t) = sum_j (g_j e^{i Delta_j t} a_j S+ + mu_j e^{i Delta_j t} b_j S+ + h.c.)
Operator full_hamiltonian_at(const ProtocolConfig& config, const SystemLayout& layout,
                             double t);

// Time-independent equivalent of H(t):
//   H_R = -sum_j Delta_j (n_aj + n_bj) + sum_j (g_j a_j S+ + mu_j b_j S+ + h.c.)
// States evolved under H_R map back with dynamics::frame_to_interaction.
Operator rotating_frame_hamiltonian(const ProtocolConfig& config, const SystemLayout& layout);

struct EffectiveHamiltonians {
    Operator h0;   // ac-Stark shifts, diagonal in the Fock basis
    Operator h_i;  // qubit-conditioned beam-splitter coupling
};
EffectiveHamiltonians effective_hamiltonians(const ProtocolConfig& config,
                                             const SystemLayout& layout);

// He = -sum_j lambda_j (a_j b_j^dag + a_j^dag b_j), identity on the qubit.
Operator swap_hamiltonian(const ProtocolConfig& config, const SystemLayout& layout);

ValidityReport check_validity(const ProtocolConfig& config);

// Operating point parameterized by b = Delta_1/g_1:
//   g_1 = mu_1 = Delta_1/b,  g_j = mu_j = sqrt(Delta_j/Delta_1) g_1,
// which makes lambda_j = g_1^2/Delta_1 for every pair.
ProtocolConfig derive_parameters(double b, std::vector<double> deltas);
ProtocolConfig derive_paper_parameters(double b, double delta1 = kDefaultDelta1,
                                       double delta2 = kDefaultDelta2);

} // namespace cavityswap
