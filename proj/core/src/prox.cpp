#include "sacd/prox.hpp"

#include <cmath>

#include "sacd/linalg.hpp"

namespace sacd {

const char* to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::kSparsity:
            return "spc";
        case ScenarioKind::kLowRank:
            return "lpc";
        case ScenarioKind::kStructured:
            return "scc";
    }
    return "unknown";
}

namespace {

bool is_binary(const Eigen::Ref<const Eigen::MatrixXd>& m) {
    return ((m.array() == 0.0) || (m.array() == 1.0)).all();
}

}  // namespace

void ScenarioSpec::validate(Eigen::Index n, Eigen::Index m, Eigen::Index q) const {
    // gamma = 0 is the degenerate pure-LQG problem (prox becomes the
    // identity / mask projection); negative weights are rejected.
    if (gamma < 0.0 || !std::isfinite(gamma)) {
        throw InconsistentInputError("scenario gamma must be nonnegative");
    }
    if (kind == ScenarioKind::kStructured) {
        if (s_b.rows() != n || s_b.cols() != m || s_c.rows() != q || s_c.cols() != n) {
            throw InconsistentInputError("SCC masks must be n x m and q x n");
        }
        if (!is_binary(s_b) || !is_binary(s_c)) {
            throw InconsistentInputError("SCC mask entries must be 0 or 1");
        }
    } else if (s_b.size() != 0 || s_c.size() != 0) {
        throw InconsistentInputError("masks are only valid for the SCC scenario");
    }
}

Eigen::MatrixXd soft_threshold(const Eigen::Ref<const Eigen::MatrixXd>& x, double tau) {
    if (tau <= 0.0) {
        throw InconsistentInputError("soft_threshold tau must be positive");
    }
    return x.array().sign() * (x.array().abs() - tau).max(0.0);
}

Eigen::MatrixXd svt(const Eigen::Ref<const Eigen::MatrixXd>& x, double tau) {
    if (tau <= 0.0) {
        throw InconsistentInputError("svt tau must be positive");
    }
    const SvdResult dec = svd(x);
    const Eigen::ArrayXd shrunk = (dec.sigma.array() - tau).max(0.0);
    return dec.u * shrunk.matrix().asDiagonal() * dec.vt;
}

Eigen::MatrixXd masked_ridge_prox(const Eigen::Ref<const Eigen::MatrixXd>& dual,
                                  const Eigen::Ref<const Eigen::MatrixXd>& b_iter,
                                  double rho, double gamma,
                                  const Eigen::Ref<const Eigen::MatrixXd>& mask) {
    if (rho <= 0.0 || gamma < 0.0) {
        throw InconsistentInputError("masked_ridge_prox requires rho > 0, gamma >= 0");
    }
    if (dual.rows() != b_iter.rows() || dual.cols() != b_iter.cols() ||
        mask.rows() != b_iter.rows() || mask.cols() != b_iter.cols()) {
        throw InconsistentInputError("masked_ridge_prox dimension mismatch");
    }
    if (!is_binary(mask)) {
        throw InconsistentInputError("mask entries must be 0 or 1");
    }
    // M = (L + rho B) / (rho + 2 gamma) o complement(S).
    return ((dual + rho * b_iter) / (rho + 2.0 * gamma)).array() * (1.0 - mask.array());
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> rank_factorize(
    const Eigen::Ref<const Eigen::MatrixXd>& b, double tol) {
    if (tol <= 0.0) {
        throw InconsistentInputError("rank_factorize tol must be positive");
    }
    const SvdResult dec = svd(b);
    Eigen::Index rank = 0;
    if (dec.sigma.size() > 0) {
        const double cutoff = tol * dec.sigma(0);
        while (rank < dec.sigma.size() && dec.sigma(rank) > cutoff) {
            ++rank;
        }
    }
    Eigen::MatrixXd b1 = dec.u.leftCols(rank) * dec.sigma.head(rank).asDiagonal();
    Eigen::MatrixXd b2 = dec.vt.topRows(rank);
    return {std::move(b1), std::move(b2)};
}

}  // namespace sacd
