#include "cavityswap/hilbert.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace cavityswap {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw ConfigError(msg);
}

// Embeds a k x k block acting on one tensor factor with the given stride.
// The full space factorizes as (outer) x (factor of size k) x (stride inner
// states); entries are copied along the inner and outer indices.
Operator embed_factor(long dim, long stride, const Eigen::MatrixXcd& block) {
    const long k = block.rows();
    const long block_size = stride * k;
    const long outer = dim / block_size;
    Operator out = Operator::Zero(dim, dim);
    for (long h = 0; h < outer; ++h) {
        const long base = h * block_size;
        for (long r = 0; r < k; ++r) {
            for (long c = 0; c < k; ++c) {
                const Complex v = block(r, c);
                if (v == Complex(0.0, 0.0)) continue;
                for (long l = 0; l < stride; ++l) {
                    out(base + r * stride + l, base + c * stride + l) = v;
                }
            }
        }
    }
    return out;
}

Eigen::MatrixXcd single_mode_lowering(int d) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d, d);
    for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

} // namespace

SystemLayout::SystemLayout(int n_pairs, int fock_cutoff, long dimension_cap)
    : n_pairs_(n_pairs), fock_cutoff_(fock_cutoff) {
    require(n_pairs >= 1, "n_pairs must be >= 1");
    require(fock_cutoff >= 2, "fock_cutoff must be >= 2");
    require(dimension_cap >= 2, "dimension cap must be >= 2");

    const int n_modes = 2 * n_pairs;
    strides_.resize(n_modes);
    long dim = 1;
    for (int m = 0; m < n_modes; ++m) {
        strides_[m] = dim;
        require(dim <= dimension_cap / fock_cutoff,
                "Hilbert space dimension exceeds cap of " + std::to_string(dimension_cap));
        dim *= fock_cutoff;
    }
    qubit_stride_ = dim;
    require(dim <= dimension_cap / 2,
            "Hilbert space dimension exceeds cap of " + std::to_string(dimension_cap));
    dim_ = dim * 2;
}

int SystemLayout::mode_a(int pair) const {
    require(pair >= 0 && pair < n_pairs_, "pair index out of range");
    return pair;
}

int SystemLayout::mode_b(int pair) const {
    require(pair >= 0 && pair < n_pairs_, "pair index out of range");
    return n_pairs_ + pair;
}

long SystemLayout::mode_stride(int mode) const {
    require(mode >= 0 && mode < n_modes(), "unknown mode index");
    return strides_[mode];
}

long SystemLayout::basis_index(std::span<const int> occupations, QubitLevel level) const {
    require(static_cast<int>(occupations.size()) == n_modes(),
            "occupation list must cover all 2N modes");
    long index = 0;
    for (int m = 0; m < n_modes(); ++m) {
        require(occupations[m] >= 0 && occupations[m] < fock_cutoff_,
                "occupation " + std::to_string(occupations[m]) +
                " outside Fock cutoff " + std::to_string(fock_cutoff_));
        index += occupations[m] * strides_[m];
    }
    if (level == QubitLevel::Excited) index += qubit_stride_;
    return index;
}

void SystemLayout::basis_occupations(long index, std::span<int> occupations, int& qubit) const {
    require(index >= 0 && index < dim_, "basis index out of range");
    require(static_cast<int>(occupations.size()) == n_modes(),
            "occupation buffer must cover all 2N modes");
    qubit = static_cast<int>(index / qubit_stride_);
    long rest = index % qubit_stride_;
    for (int m = 0; m < n_modes(); ++m) {
        occupations[m] = static_cast<int>(rest % fock_cutoff_);
        rest /= fock_cutoff_;
    }
}

SystemLayout build_space(int n_pairs, int fock_cutoff, long dimension_cap) {
    return SystemLayout(n_pairs, fock_cutoff, dimension_cap);
}

QuantumState QuantumState::pure(StateVector psi, Frame frame) {
    QuantumState s = pure_unchecked(std::move(psi), frame);
    s.validate();
    return s;
}

QuantumState QuantumState::mixed(Operator rho, Frame frame) {
    QuantumState s = mixed_unchecked(std::move(rho), frame);
    s.validate();
    return s;
}

QuantumState QuantumState::pure_unchecked(StateVector psi, Frame frame) {
    QuantumState s;
    s.is_pure_ = true;
    s.frame_ = frame;
    s.psi_ = std::move(psi);
    return s;
}

QuantumState QuantumState::mixed_unchecked(Operator rho, Frame frame) {
    QuantumState s;
    s.is_pure_ = false;
    s.frame_ = frame;
    s.rho_ = std::move(rho);
    return s;
}

Eigen::Index QuantumState::dim() const {
    return is_pure_ ? psi_.size() : rho_.rows();
}

const StateVector& QuantumState::vector() const {
    if (!is_pure_) throw NumericalError("state is not pure");
    return psi_;
}

const Operator& QuantumState::matrix() const {
    if (is_pure_) throw NumericalError("state is not a density matrix");
    return rho_;
}

Operator QuantumState::density_matrix() const {
    if (is_pure_) return psi_ * psi_.adjoint();
    return rho_;
}

QuantumState QuantumState::with_frame(Frame frame) const {
    QuantumState s = *this;
    s.frame_ = frame;
    return s;
}

void QuantumState::validate() const {
    if (is_pure_) {
        if (!psi_.allFinite()) throw NumericalError("state vector has non-finite entries");
        const double norm = psi_.norm();
        if (std::abs(norm - 1.0) > 1e-10)
            throw NumericalError("state vector norm " + std::to_string(norm) + " is not 1");
        return;
    }
    if (!rho_.allFinite()) throw NumericalError("density matrix has non-finite entries");
    if (rho_.rows() != rho_.cols()) throw NumericalError("density matrix is not square");
    const double herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-10)
        throw NumericalError("density matrix hermiticity error " + std::to_string(herm));
    const double trace_err = std::abs(rho_.trace().real() - 1.0) + std::abs(rho_.trace().imag());
    if (trace_err > 1e-8)
        throw NumericalError("density matrix trace error " + std::to_string(trace_err));
    Eigen::SelfAdjointEigenSolver<Operator> es(0.5 * (rho_ + rho_.adjoint()),
                                               Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -1e-8)
        throw NumericalError("density matrix minimum eigenvalue " + std::to_string(min_eig));
}

Operator annihilation_op(const SystemLayout& layout, int mode) {
    return embed_factor(layout.dim(), layout.mode_stride(mode),
                        single_mode_lowering(layout.fock_cutoff()));
}

Operator creation_op(const SystemLayout& layout, int mode) {
    return annihilation_op(layout, mode).adjoint();
}

Operator number_op(const SystemLayout& layout, int mode) {
    const int d = layout.fock_cutoff();
    Eigen::MatrixXcd n = Eigen::MatrixXcd::Zero(d, d);
    for (int k = 0; k < d; ++k) n(k, k) = double(k);
    return embed_factor(layout.dim(), layout.mode_stride(mode), n);
}

QubitOps qubit_ops(const SystemLayout& layout, SzConvention convention) {
    Eigen::MatrixXcd sp = Eigen::MatrixXcd::Zero(2, 2);
    sp(1, 0) = 1.0;                       // |e><g|, with |g> = 0, |e> = 1
    Eigen::MatrixXcd pg = Eigen::MatrixXcd::Zero(2, 2);
    pg(0, 0) = 1.0;
    Eigen::MatrixXcd pe = Eigen::MatrixXcd::Zero(2, 2);
    pe(1, 1) = 1.0;
    Eigen::MatrixXcd sz = pe - pg;
    if (convention == SzConvention::Halved) sz *= 0.5;

    const long dim = layout.dim();
    const long stride = layout.qubit_stride();
    QubitOps ops;
    ops.s_plus = embed_factor(dim, stride, sp);
    ops.s_minus = embed_factor(dim, stride, sp.adjoint());
    ops.sz = embed_factor(dim, stride, sz);
    ops.proj_g = embed_factor(dim, stride, pg);
    ops.proj_e = embed_factor(dim, stride, pe);
    return ops;
}

QuantumState fock_state(const SystemLayout& layout,
                        std::span<const int> occupations, QubitLevel level) {
    StateVector psi = StateVector::Zero(layout.dim());
    psi(layout.basis_index(occupations, level)) = 1.0;
    return QuantumState::pure(std::move(psi), Frame::Rotating);
}

Operator total_excitation_op(const SystemLayout& layout) {
    Operator n_tot = Operator::Zero(layout.dim(), layout.dim());
    for (int m = 0; m < layout.n_modes(); ++m) n_tot += number_op(layout, m);
    n_tot += qubit_ops(layout).proj_e;
    return n_tot;
}

Operator tensor(const Operator& a, const Operator& b) {
    Operator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Operator adjoint(const Operator& op) { return op.adjoint(); }

Operator matmul(const Operator& a, const Operator& b) {
    if (a.cols() != b.rows()) throw ConfigError("operator dimension mismatch");
    return a * b;
}

bool is_hermitian(const Operator& op, double tol) {
    if (op.rows() != op.cols()) return false;
    const double scale = std::max(1.0, op.cwiseAbs().maxCoeff());
    return (op - op.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

Operator expm(const Operator& op, Complex scale) {
    if (op.rows() != op.cols()) throw ConfigError("expm requires a square matrix");
    if (!op.allFinite()) throw NumericalError("expm input has non-finite entries");
    if (is_hermitian(op)) {
        Eigen::SelfAdjointEigenSolver<Operator> es(op);
        if (es.info() != Eigen::Success)
            throw NumericalError("eigendecomposition failed in expm");
        StateVector phases = (scale * es.eigenvalues().cast<Complex>().array()).exp();
        return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    }
    Operator scaled = scale * op;
    return scaled.exp();
}

Operator partial_trace(const SystemLayout& layout, const Operator& rho,
                       std::span<const int> keep_modes, bool keep_qubit) {
    if (rho.rows() != layout.dim() || rho.cols() != layout.dim())
        throw ConfigError("density matrix does not match layout dimension");

    const int d = layout.fock_cutoff();
    std::vector<long> keep_strides;
    for (int m : keep_modes) keep_strides.push_back(layout.mode_stride(m));

    std::vector<int> traced_modes;
    for (int m = 0; m < layout.n_modes(); ++m) {
        bool kept = false;
        for (int k : keep_modes) kept |= (k == m);
        if (!kept) traced_modes.push_back(m);
    }

    long kept_dim = keep_qubit ? 2 : 1;
    for (size_t i = 0; i < keep_strides.size(); ++i) kept_dim *= d;
    long traced_dim = keep_qubit ? 1 : 2;
    for (size_t i = 0; i < traced_modes.size(); ++i) traced_dim *= d;

    // Full-space offset of a reduced index (little-endian over keep_modes,
    // qubit slot last when kept).
    auto kept_offset = [&](long idx) {
        long off = 0;
        for (long s : keep_strides) {
            off += (idx % d) * s;
            idx /= d;
        }
        if (keep_qubit) off += idx * layout.qubit_stride();
        return off;
    };
    auto traced_offset = [&](long idx) {
        long off = 0;
        for (int m : traced_modes) {
            off += (idx % d) * layout.mode_stride(m);
            idx /= d;
        }
        if (!keep_qubit) off += idx * layout.qubit_stride();
        return off;
    };

    Operator out = Operator::Zero(kept_dim, kept_dim);
    for (long t = 0; t < traced_dim; ++t) {
        const long toff = traced_offset(t);
        for (long i = 0; i < kept_dim; ++i) {
            const long ioff = kept_offset(i) + toff;
            for (long j = 0; j < kept_dim; ++j) {
                out(i, j) += rho(ioff, kept_offset(j) + toff);
            }
        }
    }
    return out;
}

} // namespace cavityswap
