#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "cavityswap/hilbert.hpp"

using namespace cavityswap;

namespace {

Operator random_hermitian(int dim, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> dist;
    Operator h(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) h(i, j) = Complex(dist(rng), dist(rng));
    return 0.5 * (h + h.adjoint()).eval();
}

} // namespace

TEST_CASE("layout dimensions") {
    CHECK(build_space(2, 3).dim() == 162);
    CHECK(build_space(1, 2).dim() == 8);
    CHECK(build_space(3, 2).dim() == 128);
}

TEST_CASE("layout rejects invalid parameters") {
    CHECK_THROWS_AS(build_space(0, 3), ConfigError);
    CHECK_THROWS_AS(build_space(1, 1), ConfigError);
    // 4^6 * 2 = 8192 fits the default cap, 5^6 * 2 = 31250 does not.
    CHECK_NOTHROW(build_space(3, 4));
    CHECK_THROWS_AS(build_space(3, 5), ConfigError);
    CHECK_NOTHROW(build_space(3, 5, 40'000));
}

TEST_CASE("basis enumeration is little-endian with the qubit slowest") {
    const SystemLayout layout = build_space(2, 3);
    CHECK(layout.mode_a(0) == 0);
    CHECK(layout.mode_a(1) == 1);
    CHECK(layout.mode_b(0) == 2);
    CHECK(layout.mode_b(1) == 3);

    const int occ[4] = {1, 0, 2, 0};
    const long idx = layout.basis_index(occ, QubitLevel::Excited);
    CHECK(idx == 1 + 2 * 9 + 81);

    std::vector<int> back(4);
    int qubit = -1;
    layout.basis_occupations(idx, back, qubit);
    CHECK(back == std::vector<int>{1, 0, 2, 0});
    CHECK(qubit == 1);
}

TEST_CASE("annihilation operator blocks") {
    const SystemLayout one_mode = build_space(1, 2);
    SUBCASE("d = 2 block is [[0,1],[0,0]]") {
        const Operator a = annihilation_op(one_mode, 0);
        // Check the action on basis states: a |1,0,g> = |0,0,g>.
        const int occ1[2] = {1, 0};
        const int occ0[2] = {0, 0};
        const long i1 = one_mode.basis_index(occ1, QubitLevel::Ground);
        const long i0 = one_mode.basis_index(occ0, QubitLevel::Ground);
        CHECK(a(i0, i1) == Complex(1.0, 0.0));
        CHECK(a(i1, i0) == Complex(0.0, 0.0));
    }
    SUBCASE("d = 3 entries are sqrt(n)") {
        const SystemLayout layout = build_space(1, 3);
        const Operator a = annihilation_op(layout, 0);
        const int occ1[2] = {1, 0};
        const int occ2[2] = {2, 0};
        const int occ0[2] = {0, 0};
        CHECK(a(layout.basis_index(occ0, QubitLevel::Ground),
                layout.basis_index(occ1, QubitLevel::Ground)) == Complex(1.0, 0.0));
        CHECK(std::abs(a(layout.basis_index(occ1, QubitLevel::Ground),
                         layout.basis_index(occ2, QubitLevel::Ground)) -
                       Complex(std::numbers::sqrt2, 0.0)) < 1e-15);
    }
    SUBCASE("number operator is a^dag a") {
        const SystemLayout layout = build_space(1, 3);
        const Operator a = annihilation_op(layout, 0);
        const Operator n = number_op(layout, 0);
        CHECK((a.adjoint() * a - n).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("unknown mode index throws") {
        CHECK_THROWS_AS(annihilation_op(one_mode, 2), ConfigError);
        CHECK_THROWS_AS(annihilation_op(one_mode, -1), ConfigError);
    }
}

TEST_CASE("truncated ladder commutator pattern") {
    const SystemLayout layout = build_space(1, 4);
    const Operator a = annihilation_op(layout, 0);
    const Operator comm = a * a.adjoint() - a.adjoint() * a;
    // Identity except on the top Fock level, where the diagonal reads 1 - d.
    std::vector<int> occ(2);
    int qubit = 0;
    for (long i = 0; i < layout.dim(); ++i) {
        layout.basis_occupations(i, occ, qubit);
        const double expected = occ[0] == 3 ? -3.0 : 1.0;
        CHECK(std::abs(comm(i, i) - Complex(expected, 0.0)) < 1e-14);
    }
    CHECK((comm - Operator(comm.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("qubit operators") {
    const SystemLayout layout = build_space(1, 2);
    const QubitOps q = qubit_ops(layout);
    SUBCASE("S+ S- equals the excited projector") {
        CHECK((q.s_plus * q.s_minus - q.proj_e).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("S+ squares to zero") {
        CHECK((q.s_plus * q.s_plus).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("unhalved Sz squares to the identity") {
        CHECK((q.sz * q.sz - Operator::Identity(layout.dim(), layout.dim()))
                  .cwiseAbs()
                  .maxCoeff() == 0.0);
    }
    SUBCASE("halved convention scales Sz by one half") {
        const QubitOps qh = qubit_ops(layout, SzConvention::Halved);
        CHECK((2.0 * qh.sz - q.sz).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("fock state construction") {
    const SystemLayout layout = build_space(1, 2);
    SUBCASE("vacuum with qubit ground sits at index 0") {
        const int occ[2] = {0, 0};
        const QuantumState vac = fock_state(layout, occ, QubitLevel::Ground);
        CHECK(vac.vector()(0) == Complex(1.0, 0.0));
        CHECK(vac.vector().norm() == 1.0);
    }
    SUBCASE("single photon in a_1") {
        const int occ[2] = {1, 0};
        const QuantumState s = fock_state(layout, occ, QubitLevel::Ground);
        CHECK(s.vector()(1) == Complex(1.0, 0.0));
    }
    SUBCASE("occupation at the cutoff throws") {
        const int occ[2] = {2, 0};
        CHECK_THROWS_AS(fock_state(layout, occ, QubitLevel::Ground), ConfigError);
    }
}

TEST_CASE("operators on disjoint modes commute exactly") {
    const SystemLayout layout = build_space(2, 3);
    const Operator x = annihilation_op(layout, layout.mode_a(0));
    const Operator y = creation_op(layout, layout.mode_b(1));
    const Operator z = number_op(layout, layout.mode_a(1));
    CHECK((x * y - y * x).cwiseAbs().maxCoeff() == 0.0);
    CHECK((x * z - z * x).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("adjoint is an involution, bitwise") {
    const Operator h = random_hermitian(12, 3) +
                       Complex(0.0, 1.0) * random_hermitian(12, 4);
    const Operator back = adjoint(adjoint(h));
    CHECK((back - h).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("tensor product dimensions and values") {
    Operator a(2, 2), b(2, 2);
    a << 1, 2, 3, 4;
    b << 0, 1, 1, 0;
    const Operator t = tensor(a, b);
    CHECK(t.rows() == 4);
    CHECK(t(0, 1) == Complex(1.0, 0.0));   // a(0,0) b(0,1)
    CHECK(t(2, 1) == Complex(3.0, 0.0));   // a(1,0) b(0,1)
    CHECK_THROWS_AS(matmul(Operator::Zero(2, 2), Operator::Zero(3, 3)), ConfigError);
}

TEST_CASE("expm basics") {
    SUBCASE("exp of the zero matrix is the identity") {
        const Operator z = Operator::Zero(6, 6);
        CHECK((expm(z, Complex(0.0, -2.5)) - Operator::Identity(6, 6)).cwiseAbs().maxCoeff() ==
              0.0);
    }
    SUBCASE("diagonal phases") {
        Operator d = Operator::Zero(3, 3);
        d(0, 0) = 1.0;
        d(1, 1) = 2.0;
        d(2, 2) = -0.5;
        const double t = 0.7;
        const Operator u = expm(d, Complex(0.0, -t));
        for (int k = 0; k < 3; ++k) {
            CHECK(std::abs(u(k, k) - std::exp(Complex(0.0, -d(k, k).real() * t))) < 1e-14);
        }
    }
    SUBCASE("single-excitation beam-splitter block") {
        // He on span{|10>, |01>} is -lambda sigma_x; exp(-i He t) has
        // cos on the diagonal and i sin off it.
        const double lambda = 0.8, t = 0.6;
        Operator he(2, 2);
        he << 0.0, -lambda, -lambda, 0.0;
        const Operator u = expm(he, Complex(0.0, -t));
        CHECK(std::abs(u(0, 0) - Complex(std::cos(lambda * t), 0.0)) < 1e-12);
        CHECK(std::abs(u(0, 1) - Complex(0.0, std::sin(lambda * t))) < 1e-12);
        CHECK(std::abs(u(1, 0) - Complex(0.0, std::sin(lambda * t))) < 1e-12);
    }
    SUBCASE("unitarity for random Hermitian generators") {
        for (unsigned seed : {11u, 12u, 13u}) {
            const Operator h = random_hermitian(40, seed);
            const Operator u = expm(h, Complex(0.0, -1.3));
            CHECK((u.adjoint() * u - Operator::Identity(40, 40)).cwiseAbs().maxCoeff() <=
                  1e-9);
        }
    }
    SUBCASE("non-Hermitian inputs go through scaling-and-squaring") {
        Operator n(2, 2);
        n << 0.0, 1.0, 0.0, 0.0;   // nilpotent: exp(N) = I + N
        const Operator e = expm(n);
        CHECK(std::abs(e(0, 1) - Complex(1.0, 0.0)) < 1e-14);
        CHECK(std::abs(e(0, 0) - Complex(1.0, 0.0)) < 1e-14);
    }
}

TEST_CASE("quantum state invariants") {
    SUBCASE("pure norm check") {
        StateVector bad = StateVector::Zero(4);
        bad(0) = 1.1;
        CHECK_THROWS_AS(QuantumState::pure(bad, Frame::Rotating), NumericalError);
    }
    SUBCASE("mixed trace and positivity checks") {
        Operator rho = Operator::Zero(2, 2);
        rho(0, 0) = 0.7;
        rho(1, 1) = 0.7;
        CHECK_THROWS_AS(QuantumState::mixed(rho, Frame::Rotating), NumericalError);
        rho(0, 0) = 1.5;
        rho(1, 1) = -0.5;
        CHECK_THROWS_AS(QuantumState::mixed(rho, Frame::Rotating), NumericalError);
    }
    SUBCASE("pure states promote to projectors") {
        StateVector psi = StateVector::Zero(2);
        psi(0) = 1.0 / std::numbers::sqrt2;
        psi(1) = 1.0 / std::numbers::sqrt2;
        const QuantumState s = QuantumState::pure(psi, Frame::Rotating);
        const Operator rho = s.density_matrix();
        CHECK(std::abs(rho(0, 1) - Complex(0.5, 0.0)) < 1e-15);
        CHECK(std::abs(rho.trace() - Complex(1.0, 0.0)) < 1e-15);
    }
}

TEST_CASE("partial trace") {
    const SystemLayout layout = build_space(2, 2);
    // Bell pair between a_1 and b_1, vacuum elsewhere, qubit ground.
    StateVector psi = StateVector::Zero(layout.dim());
    const int occ10[4] = {1, 0, 0, 0};
    const int occ01[4] = {0, 0, 1, 0};
    psi(layout.basis_index(occ10, QubitLevel::Ground)) = 1.0 / std::numbers::sqrt2;
    psi(layout.basis_index(occ01, QubitLevel::Ground)) = Complex(0.0, 1.0 / std::numbers::sqrt2);
    const Operator rho = psi * psi.adjoint();

    SUBCASE("keeping the pair reproduces the Bell state") {
        const int keep[2] = {layout.mode_a(0), layout.mode_b(0)};
        const Operator reduced = partial_trace(layout, rho, keep);
        CHECK(reduced.rows() == 4);
        CHECK(std::abs(reduced.trace() - Complex(1.0, 0.0)) < 1e-14);
        // |10> is index 1, |01> is index 2 inside the kept pair.
        CHECK(std::abs(reduced(1, 1) - Complex(0.5, 0.0)) < 1e-14);
        CHECK(std::abs(reduced(2, 2) - Complex(0.5, 0.0)) < 1e-14);
        CHECK(std::abs(reduced(1, 2) - Complex(0.0, -0.5)) < 1e-14);
        // Purity 1: nothing was traced away but vacuum factors.
        CHECK(std::abs((reduced * reduced).trace() - Complex(1.0, 0.0)) < 1e-12);
    }
    SUBCASE("keeping one side of the pair gives a maximally mixed photon") {
        const int keep[1] = {layout.mode_a(0)};
        const Operator reduced = partial_trace(layout, rho, keep);
        CHECK(reduced.rows() == 2);
        CHECK(std::abs(reduced(0, 0) - Complex(0.5, 0.0)) < 1e-14);
        CHECK(std::abs(reduced(1, 1) - Complex(0.5, 0.0)) < 1e-14);
        CHECK(std::abs(reduced(0, 1)) < 1e-14);
    }
    SUBCASE("keeping the qubit of a ground-state system") {
        const int keep[1] = {layout.mode_a(1)};
        const Operator reduced = partial_trace(layout, rho, keep, true);
        CHECK(reduced.rows() == 4);
        CHECK(std::abs(reduced(0, 0) - Complex(1.0, 0.0)) < 1e-14);   // |0>|g>
    }
}
