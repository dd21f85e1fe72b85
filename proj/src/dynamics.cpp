#include "cavityswap/dynamics.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

namespace cavityswap {

namespace {

constexpr Complex kI(0.0, 1.0);

void require(bool cond, const std::string& msg) {
    if (!cond) throw ConfigError(msg);
}

SparseOperator to_sparse(const Operator& dense) {
    SparseOperator s(dense.rows(), dense.cols());
    std::vector<Eigen::Triplet<Complex>> trips;
    for (Eigen::Index i = 0; i < dense.rows(); ++i)
        for (Eigen::Index j = 0; j < dense.cols(); ++j)
            if (dense(i, j) != Complex(0.0, 0.0)) trips.emplace_back(i, j, dense(i, j));
    s.setFromTriplets(trips.begin(), trips.end());
    return s;
}

SparseOperator sparse_kron(const SparseOperator& x, const SparseOperator& y) {
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(static_cast<size_t>(x.nonZeros()) * y.nonZeros());
    for (int i = 0; i < x.outerSize(); ++i) {
        for (SparseOperator::InnerIterator itx(x, i); itx; ++itx) {
            for (int j = 0; j < y.outerSize(); ++j) {
                for (SparseOperator::InnerIterator ity(y, j); ity; ++ity) {
                    trips.emplace_back(itx.row() * y.rows() + ity.row(),
                                       itx.col() * y.cols() + ity.col(),
                                       itx.value() * ity.value());
                }
            }
        }
    }
    SparseOperator out(x.rows() * y.rows(), x.cols() * y.cols());
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

// Forward-reachable index set of v0's support under the sparsity pattern of
// l (edges j -> k wherever l(k, j) is stored).  The flow e^{tL} v0 stays
// supported on this set for all t, so restricting L to it is exact.
std::vector<long> reachable_support(const SparseOperator& l, const Eigen::VectorXcd& v0) {
    const long n = l.rows();
    // Row j of the transpose lists the targets fed by source j.
    SparseOperator outgoing = l.transpose();
    std::vector<char> seen(n, 0);
    std::vector<long> queue;
    for (long i = 0; i < n; ++i) {
        if (v0(i) != Complex(0.0, 0.0)) {
            seen[i] = 1;
            queue.push_back(i);
        }
    }
    for (size_t head = 0; head < queue.size(); ++head) {
        const long j = queue[head];
        for (SparseOperator::InnerIterator it(outgoing, j); it; ++it) {
            const long k = it.col();
            if (!seen[k]) {
                seen[k] = 1;
                queue.push_back(k);
            }
        }
    }
    std::sort(queue.begin(), queue.end());
    return queue;
}

SparseOperator restrict_to(const SparseOperator& l, const std::vector<long>& support) {
    std::vector<long> full_to_red(l.rows(), -1);
    for (size_t i = 0; i < support.size(); ++i) full_to_red[support[i]] = long(i);
    std::vector<Eigen::Triplet<Complex>> trips;
    for (long row : support) {
        for (SparseOperator::InnerIterator it(l, row); it; ++it) {
            const long rc = full_to_red[it.col()];
            if (rc >= 0) trips.emplace_back(full_to_red[row], rc, it.value());
        }
    }
    SparseOperator out(support.size(), support.size());
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

double qubit_e_pop_from_vector(const StateVector& psi) {
    const Eigen::Index half = psi.size() / 2;
    return psi.tail(half).squaredNorm();
}

double qubit_e_pop_from_matrix(const Operator& rho) {
    const Eigen::Index half = rho.rows() / 2;
    double pop = 0.0;
    for (Eigen::Index i = half; i < rho.rows(); ++i) pop += rho(i, i).real();
    return pop;
}

SampleDiagnostics pure_diagnostics(const StateVector& psi) {
    SampleDiagnostics d;
    d.trace_error = std::abs(psi.squaredNorm() - 1.0);
    d.qubit_e_population = qubit_e_pop_from_vector(psi);
    return d;
}

SampleDiagnostics mixed_diagnostics(const Operator& rho, double time, bool monitor) {
    if (!rho.allFinite())
        throw NumericalError("non-finite density matrix at t = " + std::to_string(time));
    SampleDiagnostics d;
    d.trace_error = std::abs(rho.trace() - Complex(1.0, 0.0));
    d.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    d.qubit_e_population = qubit_e_pop_from_matrix(rho);
    if (monitor) {
        Eigen::SelfAdjointEigenSolver<Operator> es(0.5 * (rho + rho.adjoint()),
                                                   Eigen::EigenvaluesOnly);
        d.min_eigenvalue = es.eigenvalues().minCoeff();
        if (d.min_eigenvalue < -1e-6)
            throw NumericalError("positivity violation " + std::to_string(d.min_eigenvalue) +
                                 " at t = " + std::to_string(time));
    }
    return d;
}

// Scaled jump operators sqrt(rate) * c for every nonzero rate.
std::vector<Operator> scaled_jump_operators(const DecoherenceConfig& deco,
                                            const SystemLayout& layout) {
    std::vector<Operator> jumps;
    for (int j = 0; j < layout.n_pairs(); ++j) {
        if (deco.kappa_a[j] > 0.0)
            jumps.push_back(std::sqrt(deco.kappa_a[j]) * annihilation_op(layout, layout.mode_a(j)));
        if (deco.kappa_b[j] > 0.0)
            jumps.push_back(std::sqrt(deco.kappa_b[j]) * annihilation_op(layout, layout.mode_b(j)));
    }
    const QubitOps q = qubit_ops(layout, deco.sz_convention);
    if (deco.gamma > 0.0) jumps.push_back(std::sqrt(deco.gamma) * q.s_minus);
    if (deco.gamma_phi > 0.0) jumps.push_back(std::sqrt(deco.gamma_phi) * q.sz);
    return jumps;
}

double default_rk4_dt(double max_delta, double t_final) {
    double dt = t_final / 2000.0;
    if (max_delta > 0.0) dt = std::min(dt, 0.002 / max_delta);
    return dt;
}

} // namespace

void IntegratorOptions::validate() const {
    require(dt >= 0.0, "dt must be >= 0");
    require(tolerance > 0.0 && tolerance < 1.0, "tolerance must lie in (0, 1)");
    require(krylov_dim >= 2, "krylov_dim must be >= 2");
    require(samples >= 2, "samples must be >= 2");
    require(record_stride >= 0, "record_stride must be >= 0");
}

const QuantumState& Trajectory::final_state() const {
    if (states.empty()) throw NumericalError("empty trajectory");
    return states.back();
}

double Trajectory::max_trace_error() const {
    double m = 0.0;
    for (const auto& d : diagnostics) m = std::max(m, d.trace_error);
    return m;
}

double Trajectory::max_hermiticity_error() const {
    double m = 0.0;
    for (const auto& d : diagnostics) m = std::max(m, d.hermiticity_error);
    return m;
}

double Trajectory::min_eigenvalue() const {
    double m = 0.0;
    for (const auto& d : diagnostics) m = std::min(m, d.min_eigenvalue);
    return m;
}

double Trajectory::max_qubit_e_population() const {
    double m = 0.0;
    for (const auto& d : diagnostics) m = std::max(m, d.qubit_e_population);
    return m;
}

Trajectory evolve_schrodinger(const Operator& h, const QuantumState& psi0,
                              double t_final, const IntegratorOptions& options) {
    options.validate();
    require(t_final >= 0.0, "t_final must be >= 0");
    psi0.validate();
    require(psi0.is_pure(), "Schrodinger evolution needs a pure state");
    require(h.rows() == psi0.dim() && h.cols() == psi0.dim(),
            "Hamiltonian does not match the state dimension");

    Trajectory traj;
    auto record = [&](double t, const StateVector& psi) {
        const SampleDiagnostics d = pure_diagnostics(psi);
        if (std::abs(psi.norm() - 1.0) > 1e-6)
            throw NumericalError("norm drift " + std::to_string(psi.norm() - 1.0) +
                                 " at t = " + std::to_string(t));
        traj.times.push_back(t);
        traj.states.push_back(QuantumState::pure_unchecked(psi, psi0.frame()));
        traj.diagnostics.push_back(d);
    };

    if (t_final == 0.0) {
        record(0.0, psi0.vector());
        return traj;
    }

    if (options.method == IntegratorOptions::Method::Adaptive) {
        require(is_hermitian(h, 1e-12), "constant-H propagation requires Hermitian H");
        Eigen::SelfAdjointEigenSolver<Operator> es(h);
        if (es.info() != Eigen::Success)
            throw NumericalError("eigendecomposition failed in evolve_schrodinger");
        const StateVector c0 = es.eigenvectors().adjoint() * psi0.vector();
        const int n_samples = options.samples;
        for (int k = 0; k < n_samples; ++k) {
            const double t = t_final * double(k) / double(n_samples - 1);
            const StateVector phases =
                (-kI * t * es.eigenvalues().cast<Complex>().array()).exp();
            record(t, es.eigenvectors() * (phases.asDiagonal() * c0));
        }
        return traj;
    }

    // Fixed-step RK4 on d psi/dt = -i H psi.
    const double dt_target = options.dt > 0.0 ? options.dt : t_final / 2000.0;
    const long steps = std::max<long>(1, static_cast<long>(std::ceil(t_final / dt_target)));
    const double dt = t_final / double(steps);
    const long stride = options.record_stride > 0 ? options.record_stride
                                                  : std::max<long>(1, steps / 32);
    StateVector psi = psi0.vector();
    record(0.0, psi);
    StateVector k1, k2, k3, k4;
    for (long s = 1; s <= steps; ++s) {
        k1 = -kI * (h * psi);
        k2 = -kI * (h * (psi + 0.5 * dt * k1));
        k3 = -kI * (h * (psi + 0.5 * dt * k2));
        k4 = -kI * (h * (psi + dt * k3));
        psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (s % stride == 0 || s == steps) record(s == steps ? t_final : double(s) * dt, psi);
    }
    return traj;
}

Trajectory evolve_schrodinger(const HamiltonianBuilder& h_of_t, const QuantumState& psi0,
                              double t_final, const IntegratorOptions& options) {
    options.validate();
    require(options.dt > 0.0,
            "time-dependent evolution needs an explicit dt resolving the fastest phase");
    require(t_final >= 0.0, "t_final must be >= 0");
    psi0.validate();
    require(psi0.is_pure(), "Schrodinger evolution needs a pure state");

    Trajectory traj;
    auto record = [&](double t, const StateVector& psi) {
        if (std::abs(psi.norm() - 1.0) > 1e-6)
            throw NumericalError("norm drift " + std::to_string(psi.norm() - 1.0) +
                                 " at t = " + std::to_string(t));
        traj.times.push_back(t);
        traj.states.push_back(QuantumState::pure_unchecked(psi, psi0.frame()));
        traj.diagnostics.push_back(pure_diagnostics(psi));
    };

    StateVector psi = psi0.vector();
    record(0.0, psi);
    if (t_final == 0.0) return traj;

    const long steps = std::max<long>(1, static_cast<long>(std::ceil(t_final / options.dt)));
    const double dt = t_final / double(steps);
    const long stride = options.record_stride > 0 ? options.record_stride
                                                  : std::max<long>(1, steps / 32);
    const bool midpoint = options.method == IntegratorOptions::Method::Adaptive;
    StateVector k1, k2, k3, k4;
    for (long s = 0; s < steps; ++s) {
        const double t = double(s) * dt;
        if (midpoint) {
            psi = expm(h_of_t(t + 0.5 * dt), -kI * dt) * psi;
        } else {
            const Operator h1 = h_of_t(t);
            const Operator h2 = h_of_t(t + 0.5 * dt);
            const Operator h3 = h_of_t(t + dt);
            k1 = -kI * (h1 * psi);
            k2 = -kI * (h2 * (psi + 0.5 * dt * k1));
            k3 = -kI * (h2 * (psi + 0.5 * dt * k2));
            k4 = -kI * (h3 * (psi + dt * k3));
            psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        if ((s + 1) % stride == 0 || s + 1 == steps) record(s + 1 == steps ? t_final : double(s + 1) * dt, psi);
    }
    return traj;
}

Trajectory evolve_lindblad(const ProtocolConfig& config, const DecoherenceConfig& decoherence,
                           const SystemLayout& layout, const QuantumState& rho0,
                           double t_final, const IntegratorOptions& options,
                           HamiltonianKind kind) {
    options.validate();
    decoherence.validate(config.n_pairs());
    require(config.n_pairs() == layout.n_pairs(), "config and layout disagree on N");
    require(rho0.dim() == layout.dim(), "initial state does not match layout");
    require(t_final >= 0.0, "t_final must be >= 0");
    rho0.validate();

    Operator h;
    if (kind == HamiltonianKind::Rotating) {
        h = rotating_frame_hamiltonian(config, layout);
    } else {
        const EffectiveHamiltonians eff = effective_hamiltonians(config, layout);
        h = eff.h0 + eff.h_i;
    }
    const Frame out_frame =
        kind == HamiltonianKind::Rotating ? Frame::Rotating : Frame::Interaction;

    const std::vector<Operator> jumps = scaled_jump_operators(decoherence, layout);

    // Non-Hermitian drift G = -iH - (1/2) sum_k c_k^dag c_k; the master
    // equation becomes d rho/dt = G rho + rho G^dag + sum_k c_k rho c_k^dag.
    Operator g_dense = -kI * h;
    for (const Operator& c : jumps) g_dense -= 0.5 * (c.adjoint() * c);

    const long dim = layout.dim();
    Trajectory traj;
    auto record = [&](double t, const Operator& rho) {
        traj.times.push_back(t);
        traj.diagnostics.push_back(mixed_diagnostics(rho, t, options.monitor));
        traj.states.push_back(QuantumState::mixed_unchecked(rho, out_frame));
    };

    Operator rho = rho0.density_matrix();
    if (t_final == 0.0) {
        record(0.0, rho);
        return traj;
    }

    if (options.method == IntegratorOptions::Method::Adaptive) {
        const SparseOperator g_s = to_sparse(g_dense);
        SparseOperator eye(dim, dim);
        eye.setIdentity();
        SparseOperator liouvillian = sparse_kron(eye, g_s);
        {
            const SparseOperator g_conj = g_s.conjugate();
            liouvillian += sparse_kron(g_conj, eye);
        }
        for (const Operator& c : jumps) {
            const SparseOperator c_s = to_sparse(c);
            const SparseOperator c_conj = c_s.conjugate();
            liouvillian += sparse_kron(c_conj, c_s);
        }

        const Eigen::VectorXcd v_full =
            Eigen::Map<const Eigen::VectorXcd>(rho.data(), dim * dim);
        // The flow never leaves the closure of the initial support under the
        // Liouvillian's sparsity pattern; restricting to it is exact and
        // typically shrinks the vectorized problem by orders of magnitude.
        const std::vector<long> support = reachable_support(liouvillian, v_full);
        const SparseOperator l_red = restrict_to(liouvillian, support);
        Eigen::VectorXcd v(support.size());
        for (size_t i = 0; i < support.size(); ++i) v(i) = v_full(support[i]);

        auto scatter = [&](const Eigen::VectorXcd& v_red) {
            Operator full = Operator::Zero(dim, dim);
            for (size_t i = 0; i < support.size(); ++i)
                full.data()[support[i]] = v_red(i);
            return full;
        };

        ExpvOptions expv_opts{options.tolerance, options.krylov_dim};
        record(0.0, rho);
        double t_prev = 0.0;
        for (int k = 1; k < options.samples; ++k) {
            const double t_next = k == options.samples - 1
                                      ? t_final
                                      : t_final * double(k) / double(options.samples - 1);
            v = krylov_expv(l_red, v, t_next - t_prev, expv_opts);
            rho = scatter(v);
            record(t_next, rho);
            t_prev = t_next;
        }
        return traj;
    }

    // Fixed-step RK4 on the density matrix.
    const SparseOperator g_s = to_sparse(g_dense);
    const SparseOperator g_adj_s = to_sparse(Operator(g_dense.adjoint()));
    std::vector<SparseOperator> c_s, c_adj_s;
    for (const Operator& c : jumps) {
        c_s.push_back(to_sparse(c));
        c_adj_s.push_back(to_sparse(Operator(c.adjoint())));
    }

    Operator tmp(dim, dim);
    auto rhs = [&](const Operator& r, Operator& out) {
        out.noalias() = g_s * r;
        out.noalias() += r * g_adj_s;
        for (size_t k = 0; k < c_s.size(); ++k) {
            tmp.noalias() = c_s[k] * r;
            out.noalias() += tmp * c_adj_s[k];
        }
    };

    const double dt_target =
        options.dt > 0.0 ? options.dt : default_rk4_dt(config.max_delta(), t_final);
    const long steps = std::max<long>(1, static_cast<long>(std::ceil(t_final / dt_target)));
    const double dt = t_final / double(steps);
    const long stride = options.record_stride > 0 ? options.record_stride
                                                  : std::max<long>(1, steps / 32);

    record(0.0, rho);
    Operator k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), work(dim, dim);
    for (long s = 0; s < steps; ++s) {
        rhs(rho, k1);
        work = rho + (0.5 * dt) * k1;
        rhs(work, k2);
        work = rho + (0.5 * dt) * k2;
        rhs(work, k3);
        work = rho + dt * k3;
        rhs(work, k4);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if ((s + 1) % stride == 0 || s + 1 == steps) record(s + 1 == steps ? t_final : double(s + 1) * dt, rho);
    }
    return traj;
}

QuantumState frame_to_interaction(const QuantumState& rho_rotating, double t,
                                  const ProtocolConfig& config, const SystemLayout& layout) {
    if (rho_rotating.frame() != Frame::Rotating)
        throw ConfigError("frame_to_interaction expects a rotating-frame state");
    require(rho_rotating.dim() == layout.dim(), "state does not match layout");
    require(config.n_pairs() == layout.n_pairs(), "config and layout disagree on N");

    const long dim = layout.dim();
    StateVector phases(dim);
    std::vector<int> occ(layout.n_modes());
    int qubit = 0;
    for (long idx = 0; idx < dim; ++idx) {
        layout.basis_occupations(idx, occ, qubit);
        double omega = 0.0;
        for (int j = 0; j < layout.n_pairs(); ++j) {
            omega += config.pair(j).delta *
                     (occ[layout.mode_a(j)] + occ[layout.mode_b(j)]);
        }
        phases(idx) = std::exp(-kI * omega * t);
    }

    if (rho_rotating.is_pure()) {
        StateVector psi = phases.asDiagonal() * rho_rotating.vector();
        return QuantumState::pure_unchecked(std::move(psi), Frame::Interaction);
    }
    Operator rho = phases.asDiagonal() * rho_rotating.matrix() *
                   phases.conjugate().asDiagonal();
    return QuantumState::mixed_unchecked(std::move(rho), Frame::Interaction);
}

} // namespace cavityswap
