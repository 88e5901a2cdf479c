#include "sacd/linalg.hpp"

#include <lapacke.h>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <complex>
#include <vector>

namespace sacd {

namespace {

void require_square(const Eigen::Ref<const Eigen::MatrixXd>& a, const char* name) {
    if (a.rows() != a.cols()) {
        throw InconsistentInputError(std::string(name) + " must be square");
    }
}

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) {
    return 0.5 * (m + m.transpose());
}

// Selector for the ordered Schur form: keep the open left half plane.
lapack_logical select_stable(const double* wr, const double* wi) {
    (void)wi;
    return *wr < 0.0 ? 1 : 0;
}

void require_positive_definite(const Eigen::Ref<const Eigen::MatrixXd>& m, const char* name) {
    require_square(m, name);
    if (min_symmetric_eigenvalue(m) <= 0.0) {
        throw InconsistentInputError(std::string(name) + " must be positive definite");
    }
}

}  // namespace

namespace detail {

Eigen::MatrixXd care_stabilizing(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                 const Eigen::Ref<const Eigen::MatrixXd>& brb,
                                 const Eigen::Ref<const Eigen::MatrixXd>& q) {
    const Eigen::Index n = a.rows();
    Eigen::MatrixXd hamiltonian(2 * n, 2 * n);
    hamiltonian.topLeftCorner(n, n) = a;
    hamiltonian.topRightCorner(n, n) = -brb;
    hamiltonian.bottomLeftCorner(n, n) = -q;
    hamiltonian.bottomRightCorner(n, n) = -a.transpose();

    const lapack_int n2 = static_cast<lapack_int>(2 * n);
    lapack_int sdim = 0;
    std::vector<double> wr(n2), wi(n2);
    Eigen::MatrixXd vs(n2, n2);
    const lapack_int info =
        LAPACKE_dgees(LAPACK_COL_MAJOR, 'V', 'S', select_stable, n2, hamiltonian.data(), n2,
                      &sdim, wr.data(), wi.data(), vs.data(), n2);
    if (info != 0) {
        throw SolverFailureError("ordered Schur decomposition of the Hamiltonian failed (info=" +
                                 std::to_string(info) + ")");
    }
    if (sdim != n) {
        throw SolverFailureError(
            "Hamiltonian has " + std::to_string(sdim) + " stable eigenvalues, expected " +
            std::to_string(n) + "; no stabilizing solution");
    }
    // The selected spectrum equals the closed-loop spectrum; enforce the
    // stability margin directly on it.
    for (lapack_int i = 0; i < sdim; ++i) {
        if (wr[i] >= -kStabilityMargin) {
            throw SolverFailureError("closed-loop spectrum within the stability margin");
        }
    }

    const Eigen::MatrixXd u11 = vs.topLeftCorner(n, n);
    const Eigen::MatrixXd u21 = vs.bottomLeftCorner(n, n);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(u11.transpose());
    if (!lu.isInvertible()) {
        throw SolverFailureError("stable invariant subspace is defective (U11 singular)");
    }
    // P = U21 U11^-1 solved as U11^T P^T = U21^T.
    const Eigen::MatrixXd p = symmetrize(lu.solve(u21.transpose()).transpose());

    const double residual = (a.transpose() * p + p * a - p * brb * p + q).norm();
    if (residual > 1e-8 * (1.0 + q.norm())) {
        throw SolverFailureError("CARE residual " + std::to_string(residual) +
                                 " exceeds tolerance");
    }
    return p;
}

LyapunovSolver::LyapunovSolver(const Eigen::Ref<const Eigen::MatrixXd>& a) : a_(a) {
    require_square(a, "a_cl");
    Eigen::ComplexSchur<Eigen::MatrixXd> schur(a_, /*computeU=*/true);
    if (schur.info() != Eigen::Success) {
        throw ConvergenceFailureError("Schur decomposition did not converge");
    }
    t_ = schur.matrixT();
    u_ = schur.matrixU();
    if (t_.diagonal().real().maxCoeff() >= -kStabilityMargin) {
        throw NotHurwitzError("a_cl is not Hurwitz; Lyapunov equation has no stable solution");
    }
}

Eigen::MatrixXd LyapunovSolver::solve(const Eigen::Ref<const Eigen::MatrixXd>& w) const {
    const Eigen::Index n = a_.rows();
    if (w.rows() != n || w.cols() != n) {
        throw InconsistentInputError("w dimensions must match a_cl");
    }
    // T Gt + Gt T^H + Wt = 0, solved column-by-column from the right:
    // (T + conj(T_kk) I) gt_k = -(wt_k + sum_{j>k} conj(T_kj) gt_j).
    const Eigen::MatrixXcd wt = u_.adjoint() * w * u_;
    Eigen::MatrixXcd gt = Eigen::MatrixXcd::Zero(n, n);
    Eigen::MatrixXcd shifted(n, n);
    for (Eigen::Index k = n - 1; k >= 0; --k) {
        Eigen::VectorXcd rhs = wt.col(k);
        for (Eigen::Index j = k + 1; j < n; ++j) {
            rhs += std::conj(t_(k, j)) * gt.col(j);
        }
        shifted = t_;
        shifted.diagonal().array() += std::conj(t_(k, k));
        gt.col(k) = shifted.triangularView<Eigen::Upper>().solve(-rhs);
    }
    return symmetrize((u_ * gt * u_.adjoint()).real());
}

}  // namespace detail

double spectral_abscissa(const Eigen::Ref<const Eigen::MatrixXd>& a) {
    require_square(a, "a");
    Eigen::EigenSolver<Eigen::MatrixXd> es(a, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) {
        throw ConvergenceFailureError("eigenvalue computation did not converge");
    }
    return es.eigenvalues().real().maxCoeff();
}

bool is_hurwitz(const Eigen::Ref<const Eigen::MatrixXd>& a) {
    return spectral_abscissa(a) < -kStabilityMargin;
}

bool pbh_stabilizable(const Eigen::Ref<const Eigen::MatrixXd>& a,
                      const Eigen::Ref<const Eigen::MatrixXd>& b) {
    require_square(a, "a");
    if (b.rows() != a.rows()) {
        throw InconsistentInputError("b row count must match a");
    }
    const Eigen::Index n = a.rows();
    Eigen::EigenSolver<Eigen::MatrixXd> es(a, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) {
        throw ConvergenceFailureError("eigenvalue computation did not converge");
    }
    Eigen::MatrixXcd pencil(n, n + b.cols());
    pencil.rightCols(b.cols()) = b.cast<std::complex<double>>();
    for (Eigen::Index i = 0; i < n; ++i) {
        const std::complex<double> lambda = es.eigenvalues()(i);
        if (lambda.real() < kPbhUnstableReal) {
            continue;
        }
        pencil.leftCols(n) = a.cast<std::complex<double>>();
        pencil.leftCols(n).diagonal().array() -= lambda;
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd_pencil(pencil);
        const auto& sv = svd_pencil.singularValues();
        if (sv(0) <= 0.0 || sv(sv.size() - 1) < kPbhRankTol * sv(0)) {
            return false;
        }
    }
    return true;
}

Eigen::MatrixXd solve_lyapunov(const Eigen::Ref<const Eigen::MatrixXd>& a_cl,
                               const Eigen::Ref<const Eigen::MatrixXd>& w) {
    require_square(w, "w");
    const double w_norm = w.norm();
    if ((w - w.transpose()).norm() > 1e-10 * w_norm) {
        throw NonSymmetricError("lyapunov right-hand side is not symmetric");
    }
    const detail::LyapunovSolver solver(a_cl);
    const Eigen::MatrixXd g = solver.solve(w);
    const double residual = (g * a_cl.transpose() + a_cl * g + w).norm();
    if (residual > 1e-9 * (1.0 + w_norm)) {
        throw SolverFailureError("Lyapunov residual " + std::to_string(residual) +
                                 " exceeds tolerance");
    }
    return g;
}

Eigen::MatrixXd solve_lyapunov_transposed(const Eigen::Ref<const Eigen::MatrixXd>& a_cl,
                                          const Eigen::Ref<const Eigen::MatrixXd>& w) {
    return solve_lyapunov(a_cl.transpose(), w);
}

Eigen::MatrixXd solve_care_control(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                   const Eigen::Ref<const Eigen::MatrixXd>& b,
                                   const Eigen::Ref<const Eigen::MatrixXd>& q,
                                   const Eigen::Ref<const Eigen::MatrixXd>& r) {
    require_square(a, "a");
    if (b.rows() != a.rows()) {
        throw InconsistentInputError("b row count must match a");
    }
    require_positive_definite(q, "q");
    require_positive_definite(r, "r");
    if (q.rows() != a.rows() || r.rows() != b.cols()) {
        throw InconsistentInputError("q/r dimensions inconsistent with a/b");
    }
    if (!pbh_stabilizable(a, b)) {
        throw NotStabilizableError("(a, b) is not stabilizable");
    }

    const Eigen::MatrixXd brb = b * r.llt().solve(b.transpose());
    const Eigen::MatrixXd p = detail::care_stabilizing(a, brb, q);

    if (!is_hurwitz(a - brb * p)) {
        throw SolverFailureError("CARE solution is not stabilizing");
    }
    if (min_symmetric_eigenvalue(p) <= 0.0) {
        throw SolverFailureError("CARE solution is not positive definite");
    }
    return p;
}

Eigen::MatrixXd solve_care_filter(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                  const Eigen::Ref<const Eigen::MatrixXd>& c,
                                  const Eigen::Ref<const Eigen::MatrixXd>& pi_w,
                                  const Eigen::Ref<const Eigen::MatrixXd>& pi_v) {
    try {
        return solve_care_control(a.transpose(), c.transpose(), pi_w, pi_v);
    } catch (const NotStabilizableError&) {
        throw NotDetectableError("(a, c) is not detectable");
    }
}

SvdResult svd(const Eigen::Ref<const Eigen::MatrixXd>& a) {
    if (!all_finite(a)) {
        throw InconsistentInputError("svd input contains NaN/Inf");
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (dec.info() != Eigen::Success) {
        throw ConvergenceFailureError("SVD did not converge");
    }
    return SvdResult{dec.matrixU(), dec.singularValues(), dec.matrixV().transpose()};
}

double min_symmetric_eigenvalue(const Eigen::Ref<const Eigen::MatrixXd>& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (a + a.transpose()));
    if (es.info() != Eigen::Success) {
        throw ConvergenceFailureError("symmetric eigenvalue computation did not converge");
    }
    return es.eigenvalues().minCoeff();
}

bool all_finite(const Eigen::Ref<const Eigen::MatrixXd>& a) {
    return a.allFinite();
}

}  // namespace sacd
