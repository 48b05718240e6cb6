#include <cmath>
#include <random>

#include "nme/error.h"
#include "nme/harness.h"
#include "nme/linalg.h"

namespace nme {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd RandomOrthogonal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd G(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) G(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<MatrixXd> qr(G);
  MatrixXd Q = qr.householderQ() * MatrixXd::Identity(n, n);
  const MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
  // Sign fix so the factor does not depend on Householder conventions.
  for (int j = 0; j < n; ++j) {
    if (R(j, j) < 0.0) Q.col(j) *= -1.0;
  }
  return Q;
}

}  // namespace

void ValidateGeneratorSpec(const GeneratorSpec& spec) {
  if (spec.n < 1) {
    throw Error(ErrorCode::kInvalidArgument, "n must be positive");
  }
  if (!(spec.rho_target >= 0.0 && spec.rho_target <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "rho_target must lie in [0, 1]");
  }
  if (!(spec.conditioning >= 1.0) || !std::isfinite(spec.conditioning)) {
    throw Error(ErrorCode::kInvalidArgument, "conditioning must be >= 1");
  }
}

NmeProblem MakeProblemFromSolution(const Eigen::Ref<const MatrixXd>& X,
                                   const Eigen::Ref<const MatrixXd>& S) {
  const MatrixXd A = X * S;
  const MatrixXd Q = linalg::Symmetrize(X + S.transpose() * X * S);
  return MakeProblem(A, Q);
}

ExperimentRecord GenerateProblem(const GeneratorSpec& spec) {
  ValidateGeneratorSpec(spec);
  const int n = spec.n;
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const MatrixXd U = RandomOrthogonal(n, rng);
  VectorXd d(n);
  const double log_cond = std::log(spec.conditioning);
  for (int i = 0; i < n; ++i) d(i) = std::exp(log_cond * unit(rng));
  const MatrixXd X = linalg::Symmetrize(U * d.asDiagonal() * U.transpose());

  const MatrixXd W = RandomOrthogonal(n, rng);
  VectorXd s(n);
  s(0) = spec.rho_target;
  for (int i = 1; i < n; ++i) s(i) = spec.rho_target * unit(rng);
  const MatrixXd S = linalg::Symmetrize(W * s.asDiagonal() * W.transpose());

  ExperimentRecord rec{MakeProblemFromSolution(X, S), X, {}, spec,
                       std::chrono::system_clock::now(), {}};
  return rec;
}

}  // namespace nme
