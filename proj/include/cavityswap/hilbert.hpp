#pragma once

// Truncated-Fock tensor-product Hilbert space for 2N cavity modes plus one
// two-level qubit, and the elementary operator algebra on it.
//
// Basis enumeration (fixed, do not change): little-endian over the mode list
// (a_1, ..., a_N, b_1, ..., b_N), qubit last.  Mode a_1 varies fastest, the
// qubit index varies slowest:
//
//   index = sum_m occ[m] * d^m  +  qubit * d^(2N),   occ[m] in [0, d)
//
// so the total dimension is d^(2N) * 2 and the vacuum-with-qubit-ground
// state sits at index 0.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cavityswap/errors.hpp"

namespace cavityswap {

using Complex = std::complex<double>;
using StateVector = Eigen::VectorXcd;

// Dense complex square matrix acting on the full truncated space.
using Operator = Eigen::MatrixXcd;

enum class QubitLevel { Ground, Excited };

// Normalization of the qubit Sz operator used in the dephasing term.
// Unhalved: Sz = |e><e| - |g><g|.  Halved: Sz = (|e><e| - |g><g|)/2.
enum class SzConvention { Unhalved, Halved };

// Frame tag carried by states.  Rotating: the time-independent frame the
// integrator works in.  Interaction: the frame of the protocol's target
// states.  The two coincide at t = 0.
enum class Frame { Rotating, Interaction };

class SystemLayout {
public:
    SystemLayout(int n_pairs, int fock_cutoff, long dimension_cap);

    int n_pairs() const { return n_pairs_; }
    int fock_cutoff() const { return fock_cutoff_; }
    int n_modes() const { return 2 * n_pairs_; }
    long dim() const { return dim_; }

    // 0-based pair index j -> mode index of cavity a_j / b_j.
    int mode_a(int pair) const;
    int mode_b(int pair) const;

    long mode_stride(int mode) const;
    long qubit_stride() const { return qubit_stride_; }

    long basis_index(std::span<const int> occupations, QubitLevel level) const;
    // Inverse of basis_index; occupations sized n_modes().
    void basis_occupations(long index, std::span<int> occupations, int& qubit) const;

private:
    int n_pairs_;
    int fock_cutoff_;
    long dim_;
    long qubit_stride_;
    std::vector<long> strides_;
};

// Builds the layout, rejecting dimensions above the cap (default 10^4).
SystemLayout build_space(int n_pairs, int fock_cutoff, long dimension_cap = 10'000);

// Pure state vector or density matrix with a frame tag.
class QuantumState {
public:
    static QuantumState pure(StateVector psi, Frame frame);
    static QuantumState mixed(Operator rho, Frame frame);
    // Skips the invariant checks; used by integrators whose output is
    // monitored separately.
    static QuantumState pure_unchecked(StateVector psi, Frame frame);
    static QuantumState mixed_unchecked(Operator rho, Frame frame);

    bool is_pure() const { return is_pure_; }
    Eigen::Index dim() const;
    Frame frame() const { return frame_; }

    const StateVector& vector() const;   // pure states only
    const Operator& matrix() const;      // mixed states only
    Operator density_matrix() const;     // always available

    QuantumState with_frame(Frame frame) const;

    // Throws NumericalError when the state invariants are violated:
    // pure: |norm - 1| <= 1e-10;
    // mixed: hermiticity <= 1e-10, |trace - 1| <= 1e-8, min eigenvalue >= -1e-8.
    void validate() const;

private:
    QuantumState() = default;
    bool is_pure_ = true;
    Frame frame_ = Frame::Rotating;
    StateVector psi_;
    Operator rho_;
};

// Single-mode lowering operator embedded on the given cavity mode.
Operator annihilation_op(const SystemLayout& layout, int mode);
Operator creation_op(const SystemLayout& layout, int mode);
Operator number_op(const SystemLayout& layout, int mode);

struct QubitOps {
    Operator s_minus;   // |g><e|
    Operator s_plus;    // |e><g|
    Operator sz;        // convention-dependent, see SzConvention
    Operator proj_g;
    Operator proj_e;
};
QubitOps qubit_ops(const SystemLayout& layout,
                   SzConvention convention = SzConvention::Unhalved);

// Fock basis ket |n_1, ..., n_2N> tensor |g or e>.
QuantumState fock_state(const SystemLayout& layout,
                        std::span<const int> occupations, QubitLevel level);

// Total excitation operator sum_j (n_aj + n_bj) + |e><e|.
Operator total_excitation_op(const SystemLayout& layout);

// Kronecker product, left factor varying slowest.
Operator tensor(const Operator& a, const Operator& b);
Operator adjoint(const Operator& op);
Operator matmul(const Operator& a, const Operator& b);

// exp(scale * op).  Hermitian inputs go through an eigendecomposition,
// everything else through scaling-and-squaring.
Operator expm(const Operator& op, Complex scale = Complex(1.0, 0.0));

bool is_hermitian(const Operator& op, double tol = 1e-12);

// Reduced density matrix over the listed modes (in the order given,
// little-endian, qubit appended last when kept).  All other factors are
// traced out.
Operator partial_trace(const SystemLayout& layout, const Operator& rho,
                       std::span<const int> keep_modes, bool keep_qubit = false);

} // namespace cavityswap
