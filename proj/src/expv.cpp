#include "cavityswap/expv.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

namespace cavityswap {

namespace {

double round_step(double x) {
    // Two significant digits, rounded up; keeps the step-size sequence
    // reproducible across platforms.
    if (x <= 0.0 || !std::isfinite(x)) return x;
    const double s = std::pow(10.0, std::floor(std::log10(x)) - 1.0);
    return std::ceil(x / s) * s;
}

double infinity_norm(const SparseOperator& a) {
    double norm = 0.0;
    for (int i = 0; i < a.outerSize(); ++i) {
        double row = 0.0;
        for (SparseOperator::InnerIterator it(a, i); it; ++it) row += std::abs(it.value());
        norm = std::max(norm, row);
    }
    return norm;
}

} // namespace

Eigen::VectorXcd krylov_expv(const SparseOperator& a, const Eigen::VectorXcd& v,
                             double t, const ExpvOptions& options, ExpvStats* stats) {
    using Eigen::MatrixXcd;
    using Eigen::VectorXcd;

    const Eigen::Index n = v.size();
    if (a.rows() != n || a.cols() != n)
        throw ConfigError("expv: operator and vector dimensions disagree");
    if (t == 0.0 || n == 0) return v;

    const int m = std::min<Eigen::Index>(options.krylov_dim, n - 1);
    if (m < 1) {
        // 1x1 system, exponentiate directly.
        VectorXcd w = v;
        w(0) *= std::exp(t * a.coeff(0, 0));
        return w;
    }
    const double tol = std::max(options.tolerance, 1e-15);

    const double anorm = infinity_norm(a);
    if (anorm == 0.0) return v;   // A = 0

    constexpr int max_rejections = 10;
    constexpr double breakdown_tol = 1e-7;
    constexpr double step_safety = 0.9;
    constexpr double err_slack = 1.2;

    const double t_out = std::abs(t);
    const double sgn = t >= 0.0 ? 1.0 : -1.0;
    const double rndoff = anorm * std::numeric_limits<double>::epsilon();

    VectorXcd w = v;
    double beta = w.norm();
    if (beta == 0.0) return w;

    // First step size heuristic from the a-priori Arnoldi error bound.
    const double xm = 1.0 / m;
    const double fact =
        std::pow((m + 1) / std::numbers::e, m + 1) * std::sqrt(2.0 * std::numbers::pi * (m + 1));
    double t_new = (1.0 / anorm) * std::pow(fact * tol / (4.0 * beta * anorm), xm);
    t_new = round_step(t_new);

    MatrixXcd basis(n, m + 1);
    MatrixXcd hess = MatrixXcd::Zero(m + 2, m + 2);
    VectorXcd p(n);

    double t_now = 0.0;
    double s_error = 0.0;
    while (t_now < t_out) {
        if (stats) stats->steps++;
        double t_step = std::min(t_out - t_now, t_new);

        hess.setZero();
        basis.col(0) = w / beta;
        int mb = m;
        int k1 = 2;
        double avnorm = 0.0;
        for (int j = 0; j < m; ++j) {
            p.noalias() = a * basis.col(j);
            if (stats) stats->matvecs++;
            for (int i = 0; i <= j; ++i) {
                const Complex hij = basis.col(i).dot(p);
                p -= hij * basis.col(i);
                hess(i, j) = hij;
            }
            const double h_next = p.norm();
            if (h_next < breakdown_tol) {
                // Happy breakdown: the Krylov space is invariant, the small
                // exponential is exact for the remaining time.
                k1 = 0;
                mb = j + 1;
                t_step = t_out - t_now;
                break;
            }
            hess(j + 1, j) = h_next;
            basis.col(j + 1) = p / h_next;
        }
        if (k1 != 0) {
            hess(m + 1, m) = 1.0;
            avnorm = (a * basis.col(m)).norm();
            if (stats) stats->matvecs++;
        }

        int ireject = 0;
        double err_loc = breakdown_tol;
        double xm_loc = xm;
        MatrixXcd f;
        for (;;) {
            const int mx = mb + k1;
            const MatrixXcd scaled = Complex(sgn * t_step, 0.0) * hess.topLeftCorner(mx, mx);
            f = scaled.exp();
            if (k1 == 0) break;
            const double phi1 = std::abs(beta * f(m, 0));
            const double phi2 = std::abs(beta * f(m + 1, 0)) * avnorm;
            if (phi1 > 10.0 * phi2) {
                err_loc = phi2;
                xm_loc = 1.0 / m;
            } else if (phi1 > phi2) {
                err_loc = phi1 * phi2 / (phi1 - phi2);
                xm_loc = 1.0 / m;
            } else {
                err_loc = phi1;
                xm_loc = 1.0 / (m - 1);
            }
            if (err_loc <= err_slack * t_step * tol) break;
            t_step = round_step(step_safety * t_step *
                                std::pow(t_step * tol / err_loc, xm_loc));
            if (stats) stats->rejections++;
            if (++ireject > max_rejections)
                throw NumericalError("expv: step size underflow, tolerance unattainable");
        }

        const int mx = mb + std::max(0, k1 - 1);
        w.noalias() = basis.leftCols(mx) * (beta * f.col(0).head(mx));
        beta = w.norm();
        t_now += t_step;
        t_new = round_step(step_safety * t_step * std::pow(t_step * tol / err_loc, xm_loc));
        s_error += std::max(err_loc, rndoff);
    }
    if (stats) stats->error_estimate = s_error;
    return w;
}

} // namespace cavityswap
