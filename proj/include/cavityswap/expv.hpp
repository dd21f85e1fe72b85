#pragma once

// Krylov-subspace action of the matrix exponential, w = exp(t A) v, for
// large sparse A.  Restarted Arnoldi with adaptive substeps and local error
// control in the style of Expokit's ZGEXPV.

#include <complex>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cavityswap/errors.hpp"

namespace cavityswap {

using Complex = std::complex<double>;
using SparseOperator = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

struct ExpvOptions {
    double tolerance = 1e-11;   // local error per substep, relative to the step
    int krylov_dim = 30;
};

struct ExpvStats {
    int steps = 0;
    int matvecs = 0;
    int rejections = 0;
    double error_estimate = 0.0;   // accumulated local error estimates
};

Eigen::VectorXcd krylov_expv(const SparseOperator& a, const Eigen::VectorXcd& v,
                             double t, const ExpvOptions& options = {},
                             ExpvStats* stats = nullptr);

} // namespace cavityswap
