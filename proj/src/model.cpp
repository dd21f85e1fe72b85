#include "cavityswap/model.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace cavityswap {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw ConfigError(msg);
}

void check_pairs(const std::vector<PairCoupling>& pairs) {
    require(!pairs.empty(), "protocol needs at least one cavity pair");
    for (const auto& p : pairs) {
        require(p.delta > 0.0, "detunings must be positive");
        require(p.g >= 0.0 && p.mu >= 0.0, "couplings must be non-negative");
    }
}

void check_distinct_deltas(const std::vector<PairCoupling>& pairs) {
    for (size_t j = 0; j < pairs.size(); ++j)
        for (size_t k = j + 1; k < pairs.size(); ++k)
            require(pairs[j].delta != pairs[k].delta, "detunings must be pairwise distinct");
}

void check_layout(const ProtocolConfig& config, const SystemLayout& layout) {
    require(config.n_pairs() == layout.n_pairs(),
            "protocol has " + std::to_string(config.n_pairs()) + " pairs but layout has " +
                std::to_string(layout.n_pairs()));
}

double safe_ratio(double num, double den) {
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return num / den;
}

} // namespace

ProtocolConfig ProtocolConfig::standard(std::vector<PairCoupling> pairs) {
    check_pairs(pairs);
    check_distinct_deltas(pairs);
    const double lambda0 = pairs.front().lambda();
    for (const auto& p : pairs) {
        require(p.g == p.mu, "standard protocol requires g_j = mu_j exactly");
        require(std::abs(p.lambda() - lambda0) <= 1e-12 * std::abs(lambda0),
                "standard protocol requires a common lambda across pairs");
    }
    require(lambda0 > 0.0, "standard protocol requires lambda > 0");
    ProtocolConfig c;
    c.pairs_ = std::move(pairs);
    c.lambda_ = lambda0;
    c.standard_ = true;
    return c;
}

// Duplicate detunings are allowed here so check_validity can still grade
// them; only the standard protocol insists on distinct values.
ProtocolConfig ProtocolConfig::custom(std::vector<PairCoupling> pairs, double lambda_target) {
    check_pairs(pairs);
    require(lambda_target > 0.0, "lambda target must be positive");
    ProtocolConfig c;
    c.pairs_ = std::move(pairs);
    c.lambda_ = lambda_target;
    c.standard_ = false;
    return c;
}

double ProtocolConfig::t_swap() const { return std::numbers::pi / (2.0 * lambda_); }

double ProtocolConfig::t_epr() const { return std::numbers::pi / (4.0 * lambda_); }

double ProtocolConfig::max_delta() const {
    double m = 0.0;
    for (const auto& p : pairs_) m = std::max(m, p.delta);
    return m;
}

DecoherenceConfig DecoherenceConfig::paper_defaults(int n_pairs) {
    DecoherenceConfig d;
    d.kappa_a.assign(n_pairs, 1.0 / 20e-6);
    d.kappa_b.assign(n_pairs, 1.0 / 20e-6);
    d.gamma = 1.0 / 50e-6;
    d.gamma_phi = 1.0 / 5e-6;
    return d;
}

DecoherenceConfig DecoherenceConfig::none(int n_pairs) {
    DecoherenceConfig d;
    d.kappa_a.assign(n_pairs, 0.0);
    d.kappa_b.assign(n_pairs, 0.0);
    return d;
}

bool DecoherenceConfig::all_zero() const {
    if (gamma != 0.0 || gamma_phi != 0.0) return false;
    for (double k : kappa_a)
        if (k != 0.0) return false;
    for (double k : kappa_b)
        if (k != 0.0) return false;
    return true;
}

void DecoherenceConfig::validate(int n_pairs) const {
    require(static_cast<int>(kappa_a.size()) == n_pairs &&
                static_cast<int>(kappa_b.size()) == n_pairs,
            "decoherence rate lists must have one entry per pair");
    for (double k : kappa_a) require(k >= 0.0, "kappa_a rates must be >= 0");
    for (double k : kappa_b) require(k >= 0.0, "kappa_b rates must be >= 0");
    require(gamma >= 0.0, "gamma must be >= 0");
    require(gamma_phi >= 0.0, "gamma_phi must be >= 0");
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Warn: return "warn";
        case Verdict::Fail: return "fail";
    }
    return "unknown";
}

Verdict worst(Verdict a, Verdict b) {
    return static_cast<Verdict>(std::max(static_cast<int>(a), static_cast<int>(b)));
}

Verdict classify_ratio(double ratio) {
    if (ratio >= kValidityPassRatio) return Verdict::Pass;
    if (ratio >= kValidityWarnRatio) return Verdict::Warn;
    return Verdict::Fail;
}

Operator full_hamiltonian_at(const ProtocolConfig& config, const SystemLayout& layout,
                             double t) {
    check_layout(config, layout);
    const QubitOps q = qubit_ops(layout);
    Operator h = Operator::Zero(layout.dim(), layout.dim());
    for (int j = 0; j < config.n_pairs(); ++j) {
        const PairCoupling& p = config.pair(j);
        const Complex phase = std::exp(Complex(0.0, p.delta * t));
        const Operator term = phase * (p.g * annihilation_op(layout, layout.mode_a(j)) +
                                       p.mu * annihilation_op(layout, layout.mode_b(j))) *
                              q.s_plus;
        h += term + term.adjoint();
    }
    return h;
}

Operator rotating_frame_hamiltonian(const ProtocolConfig& config, const SystemLayout& layout) {
    check_layout(config, layout);
    const QubitOps q = qubit_ops(layout);
    Operator h = Operator::Zero(layout.dim(), layout.dim());
    for (int j = 0; j < config.n_pairs(); ++j) {
        const PairCoupling& p = config.pair(j);
        h -= p.delta * (number_op(layout, layout.mode_a(j)) + number_op(layout, layout.mode_b(j)));
        const Operator term = (p.g * annihilation_op(layout, layout.mode_a(j)) +
                               p.mu * annihilation_op(layout, layout.mode_b(j))) *
                              q.s_plus;
        h += term + term.adjoint();
    }
    return h;
}

EffectiveHamiltonians effective_hamiltonians(const ProtocolConfig& config,
                                             const SystemLayout& layout) {
    check_layout(config, layout);
    const QubitOps q = qubit_ops(layout);
    const long dim = layout.dim();
    Operator stark_e = Operator::Zero(dim, dim);
    Operator stark_g = Operator::Zero(dim, dim);
    Operator exchange = Operator::Zero(dim, dim);
    const Operator identity = Operator::Identity(dim, dim);
    for (int j = 0; j < config.n_pairs(); ++j) {
        const PairCoupling& p = config.pair(j);
        const Operator n_a = number_op(layout, layout.mode_a(j));
        const Operator n_b = number_op(layout, layout.mode_b(j));
        const double chi_a = p.g * p.g / p.delta;
        const double chi_b = p.mu * p.mu / p.delta;
        // a a^dag written as n + 1; the literal truncated product flips the
        // clipped top Fock level and would spoil [H0, HI] = 0.
        stark_e += chi_a * (n_a + identity) + chi_b * (n_b + identity);
        stark_g += chi_a * n_a + chi_b * n_b;

        const Operator ab = annihilation_op(layout, layout.mode_a(j)) *
                            creation_op(layout, layout.mode_b(j));
        exchange += p.lambda() * (ab + ab.adjoint());
    }
    EffectiveHamiltonians eff;
    eff.h0 = stark_e * q.proj_e - stark_g * q.proj_g;
    eff.h_i = exchange * (q.proj_e - q.proj_g);
    return eff;
}

Operator swap_hamiltonian(const ProtocolConfig& config, const SystemLayout& layout) {
    check_layout(config, layout);
    Operator h = Operator::Zero(layout.dim(), layout.dim());
    for (int j = 0; j < config.n_pairs(); ++j) {
        const Operator ab = annihilation_op(layout, layout.mode_a(j)) *
                            creation_op(layout, layout.mode_b(j));
        h -= config.pair(j).lambda() * (ab + ab.adjoint());
    }
    return h;
}

ValidityReport check_validity(const ProtocolConfig& config) {
    ValidityReport report;
    for (int j = 0; j < config.n_pairs(); ++j) {
        const PairCoupling& p = config.pair(j);
        PairDetuningCheck c;
        c.pair = j;
        c.delta_over_g = safe_ratio(p.delta, p.g);
        c.delta_over_mu = safe_ratio(p.delta, p.mu);
        c.verdict = worst(classify_ratio(c.delta_over_g), classify_ratio(c.delta_over_mu));
        report.overall = worst(report.overall, c.verdict);
        report.large_detuning.push_back(c);
    }
    for (int j = 0; j < config.n_pairs(); ++j) {
        for (int k = j + 1; k < config.n_pairs(); ++k) {
            const PairCoupling& pj = config.pair(j);
            const PairCoupling& pk = config.pair(k);
            CrossPairCheck c;
            c.pair_j = j;
            c.pair_k = k;
            c.detuning_scale =
                std::abs(pj.delta - pk.delta) / (1.0 / pj.delta + 1.0 / pk.delta);
            c.vs_gg = safe_ratio(c.detuning_scale, pj.g * pk.g);
            c.vs_gmu = safe_ratio(c.detuning_scale, pj.g * pk.mu);
            c.vs_mumu = safe_ratio(c.detuning_scale, pj.mu * pk.mu);
            c.verdict = worst(classify_ratio(c.vs_gg),
                              worst(classify_ratio(c.vs_gmu), classify_ratio(c.vs_mumu)));
            report.overall = worst(report.overall, c.verdict);
            report.cross_pair.push_back(c);
        }
    }
    if (report.overall == Verdict::Warn)
        report.note = "dispersive conditions hold only marginally; expect visible leakage";
    else if (report.overall == Verdict::Fail)
        report.note = "dispersive approximation invalid at this operating point";
    return report;
}

ProtocolConfig derive_parameters(double b, std::vector<double> deltas) {
    require(b > 0.0, "b must be positive");
    require(!deltas.empty(), "at least one detuning required");
    for (double d : deltas) require(d > 0.0, "detunings must be positive");
    const double delta1 = deltas.front();
    const double g1 = delta1 / b;
    std::vector<PairCoupling> pairs;
    pairs.reserve(deltas.size());
    for (double d : deltas) {
        const double g = std::sqrt(d / delta1) * g1;
        pairs.push_back(PairCoupling{g, g, d});
    }
    return ProtocolConfig::standard(std::move(pairs));
}

ProtocolConfig derive_paper_parameters(double b, double delta1, double delta2) {
    require(delta1 > delta2 && delta2 > 0.0, "need Delta1 > Delta2 > 0");
    return derive_parameters(b, {delta1, delta2});
}

} // namespace cavityswap
