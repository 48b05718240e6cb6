#include <Eigen/Dense>

#include "nme/error.h"
#include "nme/linalg.h"
#include "nme/solvers.h"

namespace nme {

Eigen::MatrixXd SolveStein(const SteinProblem& sp) {
  const auto n = sp.L.rows();
  if (sp.L.cols() != n || sp.C.rows() != n || sp.C.cols() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "Stein operands must be square and of equal size");
  }
  if (linalg::MaxAsymmetry(sp.C) > 1e-12 * (1.0 + sp.C.norm())) {
    throw Error(ErrorCode::kNotSymmetric, "Stein right-hand side");
  }
  // vec(LᵀXL) = (Lᵀ ⊗ Lᵀ) vec(X) for column-major vec.
  const Eigen::MatrixXd Lt = sp.L.transpose();
  const auto nn = n * n;
  Eigen::MatrixXd K = Eigen::MatrixXd::Identity(nn, nn);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      K.block(i * n, j * n, n, n) -= Lt(i, j) * Lt;
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
  lu.setThreshold(1e-10);
  if (lu.rank() < nn) {
    throw Error(ErrorCode::kSingularSteinOperator,
                "X - LᵀXL is singular (L has eigenvalues with product 1)");
  }
  const Eigen::VectorXd c =
      Eigen::Map<const Eigen::VectorXd>(sp.C.data(), nn);
  const Eigen::VectorXd x = lu.solve(c);
  return linalg::Symmetrize(Eigen::Map<const Eigen::MatrixXd>(x.data(), n, n));
}

}  // namespace nme
