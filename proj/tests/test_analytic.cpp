#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cavityswap/analytic.hpp"
#include "cavityswap/metrics.hpp"

using namespace cavityswap;

namespace {

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= double(n - k + i) / double(i);
    return r;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= double(i);
    return r;
}

// Heisenberg-picture oracle for exp(-i He t) on one pair: expand
// (cos a^dag + i sin b^dag)^n (i sin a^dag + cos b^dag)^m |00>.
// Exact whenever n + m fits inside the cutoff.
StateVector closed_form_pair_column(double lambda, double t, int d, int na, int nb) {
    const double c = std::cos(lambda * t);
    const Complex is(0.0, std::sin(lambda * t));
    StateVector out = StateVector::Zero(static_cast<long>(d) * d);
    for (int p = 0; p <= na; ++p) {
        for (int q = 0; q <= nb; ++q) {
            const int n_a = p + q;                  // photons ending in a
            const int n_b = na - p + nb - q;        // photons ending in b
            if (n_a >= d || n_b >= d) continue;
            const Complex amp = binomial(na, p) * binomial(nb, q) *
                                std::pow(c, p) * std::pow(is, double(na - p)) *
                                std::pow(is, double(q)) * std::pow(c, nb - q) *
                                std::sqrt(factorial(n_a) * factorial(n_b)) /
                                std::sqrt(factorial(na) * factorial(nb));
            out(n_a + d * n_b) += amp;
        }
    }
    return out;
}

ProtocolConfig toy_config(double b = 20.0, int n_pairs = 2) {
    std::vector<double> deltas;
    for (int j = 0; j < n_pairs; ++j) deltas.push_back(b / std::pow(2.0, j));
    return derive_parameters(b, deltas);
}

QuantumState fock(const SystemLayout& layout, std::vector<int> occ) {
    return fock_state(layout, occ, QubitLevel::Ground);
}

} // namespace

TEST_CASE("phase factors") {
    SUBCASE("standard protocol gives unity phases") {
        const PhaseFactors f = phase_factors(toy_config());
        for (double phi : f.phi) CHECK(phi == doctest::Approx(1.0).epsilon(1e-14));
        for (double theta : f.theta) CHECK(theta == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("g^2/Delta = 3 lambda gives phi = 2") {
        const ProtocolConfig c =
            ProtocolConfig::custom({{std::sqrt(3.0), std::sqrt(3.0), 1.0}}, 1.0);
        const PhaseFactors f = phase_factors(c);
        CHECK(f.phi[0] == doctest::Approx(2.0).epsilon(1e-14));
    }
    SUBCASE("lambda must stay positive") {
        CHECK_THROWS_AS(ProtocolConfig::custom({{1.0, 1.0, 10.0}}, 0.0), ConfigError);
        CHECK_THROWS_AS(ProtocolConfig::custom({{1.0, 1.0, 10.0}}, -1.0), ConfigError);
    }
}

TEST_CASE("beam splitter map") {
    SUBCASE("lambda t = pi/2 exchanges the modes with phase i") {
        const auto m = beam_splitter_map(1.0, std::numbers::pi / 2.0).mode_map();
        CHECK(std::abs(m(0, 0)) < 1e-15);
        CHECK(std::abs(m(0, 1) - Complex(0.0, 1.0)) < 1e-15);
        CHECK(std::abs(m(1, 0) - Complex(0.0, 1.0)) < 1e-15);
    }
    SUBCASE("t = 0 is the identity") {
        const auto m = beam_splitter_map(2.0, 0.0).mode_map();
        CHECK((m - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("lambda t = pi/4 makes an EPR pair from |10>") {
        const Operator u = pair_unitary(1.0, std::numbers::pi / 4.0, 2);
        // Column of |10> = index 1; expect (|10> + i|01>)/sqrt2.
        CHECK(std::abs(u(1, 1) - Complex(1.0 / std::numbers::sqrt2, 0.0)) < 1e-12);
        CHECK(std::abs(u(2, 1) - Complex(0.0, 1.0 / std::numbers::sqrt2)) < 1e-12);
    }
}

TEST_CASE("pair unitary matches the closed-form map") {
    // Columns with total photon number below the cutoff are exact in the
    // truncated space; compare those.
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> lam(0.2, 2.0);
    std::uniform_real_distribution<double> tim(0.0, 2.0 * std::numbers::pi);
    const int d = 3;
    for (int draw = 0; draw < 20; ++draw) {
        const double lambda = lam(rng);
        const double t = tim(rng);
        const Operator u = pair_unitary(lambda, t, d);
        for (int na = 0; na < d; ++na) {
            for (int nb = 0; nb < d; ++nb) {
                if (na + nb > d - 1) continue;
                const StateVector want = closed_form_pair_column(lambda, t, d, na, nb);
                const StateVector got = u.col(na + d * nb);
                CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-10);
            }
        }
    }
}

TEST_CASE("ideal swapped state") {
    const ProtocolConfig config = toy_config();
    const SystemLayout layout = build_space(2, 3);

    SUBCASE("scenario i transfers the entangled state to the b side") {
        StateVector psi = StateVector::Zero(layout.dim());
        std::vector<int> occ0 = {0, 0, 0, 0};
        std::vector<int> occ1 = {1, 1, 0, 0};
        psi(layout.basis_index(occ0, QubitLevel::Ground)) = 1.0 / std::numbers::sqrt2;
        psi(layout.basis_index(occ1, QubitLevel::Ground)) = 1.0 / std::numbers::sqrt2;
        const ScenarioState init{Scenario::I, QuantumState::pure(psi, Frame::Rotating)};
        const IdealSwapResult res = ideal_swapped_state(init, config, layout);

        // Under the standard protocol the phases are unity and the
        // transferred state is (|00> + |11>)_b / sqrt2 with |00>_a.
        StateVector want = StateVector::Zero(layout.dim());
        std::vector<int> occ_b = {0, 0, 1, 1};
        want(layout.basis_index(occ0, QubitLevel::Ground)) = 1.0 / std::numbers::sqrt2;
        want(layout.basis_index(occ_b, QubitLevel::Ground)) = 1.0 / std::numbers::sqrt2;
        CHECK((res.state.vector() - want).cwiseAbs().maxCoeff() <= 1e-10);
        for (double phi : res.phases.phi) CHECK(phi == doctest::Approx(1.0));
    }
    SUBCASE("vacuum is a fixed point") {
        const ScenarioState init{Scenario::Custom, fock(layout, {0, 0, 0, 0})};
        const IdealSwapResult res = ideal_swapped_state(init, config, layout);
        CHECK(std::abs(std::abs(res.state.vector()(0)) - 1.0) <= 1e-12);
    }
    SUBCASE("diagonal mixtures acquire no relative phase") {
        Operator rho = Operator::Zero(layout.dim(), layout.dim());
        std::vector<int> occ0 = {0, 0, 0, 0};
        std::vector<int> occ1 = {1, 1, 0, 0};
        const long i0 = layout.basis_index(occ0, QubitLevel::Ground);
        const long i1 = layout.basis_index(occ1, QubitLevel::Ground);
        rho(i0, i0) = 0.5;
        rho(i1, i1) = 0.5;
        const ScenarioState init{Scenario::III, QuantumState::mixed(rho, Frame::Rotating)};
        const IdealSwapResult res = ideal_swapped_state(init, config, layout);

        std::vector<int> occ_b = {0, 0, 1, 1};
        const long j1 = layout.basis_index(occ_b, QubitLevel::Ground);
        const Operator& out = res.state.matrix();
        CHECK(std::abs(out(i0, i0) - Complex(0.5, 0.0)) <= 1e-12);
        CHECK(std::abs(out(j1, j1) - Complex(0.5, 0.0)) <= 1e-12);
        CHECK(std::abs(out(i1, i1)) <= 1e-12);
    }
    SUBCASE("qubit must start in the ground sector") {
        std::vector<int> occ = {0, 0, 0, 0};
        const ScenarioState bad{Scenario::Custom,
                                fock_state(layout, occ, QubitLevel::Excited)};
        CHECK_THROWS_AS(ideal_swapped_state(bad, config, layout), ConfigError);
    }
    SUBCASE("linearity over convex mixtures") {
        const QuantumState s1 = fock(layout, {1, 0, 0, 0});
        const QuantumState s2 = fock(layout, {0, 1, 0, 1});
        const Operator mix = 0.3 * s1.density_matrix() + 0.7 * s2.density_matrix();
        const ScenarioState init{Scenario::Custom, QuantumState::mixed(mix, Frame::Rotating)};
        const Operator got = ideal_swapped_state(init, config, layout).state.matrix();
        const Operator want =
            0.3 * ideal_swapped_state({Scenario::Custom, s1}, config, layout)
                      .state.density_matrix() +
            0.7 * ideal_swapped_state({Scenario::Custom, s2}, config, layout)
                      .state.density_matrix();
        CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-12);
    }
    SUBCASE("double swap restores every mode population") {
        const QuantumState start = fock(layout, {1, 0, 0, 1});
        const IdealSwapResult once =
            ideal_swapped_state({Scenario::Custom, start}, config, layout);
        const IdealSwapResult twice = ideal_swapped_state(
            {Scenario::Custom, once.state.with_frame(Frame::Rotating)}, config, layout);
        const Eigen::VectorXd p0 = mode_populations(start, layout);
        const Eigen::VectorXd p2 = mode_populations(twice.state, layout);
        CHECK((p0 - p2).cwiseAbs().maxCoeff() <= 1e-12);
        // And the single swap moved the photons across.
        const Eigen::VectorXd p1 = mode_populations(once.state, layout);
        CHECK(p1(layout.mode_b(0)) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(p1(layout.mode_a(1)) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("pair factorization for product inputs") {
        // One photon per a-cavity: per-pair transfers multiply, so the
        // output concentrates on |00>_a |11>_b with unit weight.
        const QuantumState start = fock(layout, {1, 1, 0, 0});
        const IdealSwapResult res =
            ideal_swapped_state({Scenario::Custom, start}, config, layout);
        std::vector<int> occ_b = {0, 0, 1, 1};
        const long target = layout.basis_index(occ_b, QubitLevel::Ground);
        CHECK(std::abs(std::abs(res.state.vector()(target)) - 1.0) <= 1e-12);
    }
}

TEST_CASE("swap time is independent of N at fixed lambda") {
    const ProtocolConfig two = toy_config(20.0, 2);
    const ProtocolConfig one = toy_config(20.0, 1);
    CHECK(one.t_swap() == doctest::Approx(two.t_swap()).epsilon(1e-15));
    const ProtocolConfig three = toy_config(20.0, 3);
    CHECK(three.t_swap() == doctest::Approx(two.t_swap()).epsilon(1e-15));
}

TEST_CASE("EPR target state") {
    SUBCASE("N = 1 amplitudes carry the pi/4 global phase") {
        const ProtocolConfig config = toy_config(20.0, 1);
        const SystemLayout layout = build_space(1, 3);
        const QuantumState target = epr_target_state(1, config, layout);
        std::vector<int> occ10 = {1, 0};
        std::vector<int> occ01 = {0, 1};
        const Complex global = std::exp(Complex(0.0, std::numbers::pi / 4.0));
        const Complex a10 = target.vector()(layout.basis_index(occ10, QubitLevel::Ground));
        const Complex a01 = target.vector()(layout.basis_index(occ01, QubitLevel::Ground));
        CHECK(std::abs(a10 - global / std::numbers::sqrt2) <= 1e-14);
        CHECK(std::abs(a01 - global * Complex(0.0, 1.0) / std::numbers::sqrt2) <= 1e-14);
        CHECK(target.vector().norm() == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("N = 2 single-cavity marginals are maximally mixed") {
        const ProtocolConfig config = toy_config(20.0, 2);
        const SystemLayout layout = build_space(2, 3);
        const QuantumState target = epr_target_state(2, config, layout);
        const Operator rho = target.density_matrix();
        for (int mode : {layout.mode_a(0), layout.mode_b(1)}) {
            const int keep[1] = {mode};
            const Operator reduced = partial_trace(layout, rho, keep);
            CHECK(std::abs((reduced * reduced).trace().real() - 0.5) <= 1e-12);
        }
    }
    SUBCASE("layout and config must agree with N") {
        const ProtocolConfig config = toy_config(20.0, 2);
        const SystemLayout layout = build_space(1, 3);
        CHECK_THROWS_AS(epr_target_state(1, config, layout), ConfigError);
    }
}
