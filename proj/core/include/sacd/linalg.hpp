#pragma once

#include <Eigen/Core>

#include "sacd/errors.hpp"

namespace sacd {

// Spectral abscissa below which a matrix counts as Hurwitz. Guards against
// marginal eigenvalues poisoning the Lyapunov back-substitution.
inline constexpr double kStabilityMargin = 1e-8;

// Relative singular-value cutoff for the PBH rank decision.
inline constexpr double kPbhRankTol = 1e-8;

// Eigenvalues with real part above this are treated as requiring
// control/observation in the PBH test.
inline constexpr double kPbhUnstableReal = -1e-10;

struct SvdResult {
    Eigen::MatrixXd u;       // orthonormal columns
    Eigen::VectorXd sigma;   // nonincreasing, >= 0
    Eigen::MatrixXd vt;      // orthonormal rows
};

// max Re(lambda) over the eigenvalues of a square matrix.
double spectral_abscissa(const Eigen::Ref<const Eigen::MatrixXd>& a);

bool is_hurwitz(const Eigen::Ref<const Eigen::MatrixXd>& a);

// PBH test: for every eigenvalue of A with Re(lambda) >= kPbhUnstableReal,
// rank([A - lambda I, B]) must equal n.
bool pbh_stabilizable(const Eigen::Ref<const Eigen::MatrixXd>& a,
                      const Eigen::Ref<const Eigen::MatrixXd>& b);

// Solves G A_cl^T + A_cl G + W = 0 for Hurwitz A_cl and symmetric W,
// by complex-Schur reduction and triangular back-substitution.
// Throws NotHurwitzError / NonSymmetricError on precondition violation.
Eigen::MatrixXd solve_lyapunov(const Eigen::Ref<const Eigen::MatrixXd>& a_cl,
                               const Eigen::Ref<const Eigen::MatrixXd>& w);

// Transposed variant: H A_cl + A_cl^T H + W = 0.
Eigen::MatrixXd solve_lyapunov_transposed(
    const Eigen::Ref<const Eigen::MatrixXd>& a_cl,
    const Eigen::Ref<const Eigen::MatrixXd>& w);

// Stabilizing solution of A^T P + P A - P B R^-1 B^T P + Q = 0 via the
// stable invariant subspace of the Hamiltonian (ordered Schur form).
// Requires (A, B) stabilizable and Q, R positive definite.
Eigen::MatrixXd solve_care_control(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                   const Eigen::Ref<const Eigen::MatrixXd>& b,
                                   const Eigen::Ref<const Eigen::MatrixXd>& q,
                                   const Eigen::Ref<const Eigen::MatrixXd>& r);

// Dual (filter) equation A X + X A^T - X C^T Pi_v^-1 C X + Pi_w = 0,
// solved as the control CARE of the transposed system.
Eigen::MatrixXd solve_care_filter(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                  const Eigen::Ref<const Eigen::MatrixXd>& c,
                                  const Eigen::Ref<const Eigen::MatrixXd>& pi_w,
                                  const Eigen::Ref<const Eigen::MatrixXd>& pi_v);

SvdResult svd(const Eigen::Ref<const Eigen::MatrixXd>& a);

// Smallest eigenvalue of a symmetric matrix (definiteness checks).
double min_symmetric_eigenvalue(const Eigen::Ref<const Eigen::MatrixXd>& a);

bool all_finite(const Eigen::Ref<const Eigen::MatrixXd>& a);

namespace detail {

// Stabilizing solution of A^T P + P A - P brb P + Q = 0 given brb = B R^-1 B^T,
// without the PBH pre-test or definiteness screening: infeasible data is
// rejected through the Hamiltonian eigenvalue split, the stability margin of
// the selected spectrum, and the residual check (all SolverFailureError).
// Hot-path variant behind solve_care_control; same solution when both succeed.
Eigen::MatrixXd care_stabilizing(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                 const Eigen::Ref<const Eigen::MatrixXd>& brb,
                                 const Eigen::Ref<const Eigen::MatrixXd>& q);

// Shares one Schur factorization of A across several Lyapunov right-hand
// sides: solve(W) returns G with G A^T + A G + W = 0.
class LyapunovSolver {
public:
    // Throws NotHurwitzError unless the spectrum clears kStabilityMargin.
    explicit LyapunovSolver(const Eigen::Ref<const Eigen::MatrixXd>& a);

    Eigen::MatrixXd solve(const Eigen::Ref<const Eigen::MatrixXd>& w) const;

private:
    Eigen::MatrixXd a_;
    Eigen::MatrixXcd t_;
    Eigen::MatrixXcd u_;
};

}  // namespace detail

}  // namespace sacd
