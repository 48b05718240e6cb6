#include "nme/problem.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nme/error.h"
#include "nme/linalg.h"

namespace nme {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;

Eigen::LLT<MatrixXd> FactorSpd(const Eigen::Ref<const MatrixXd>& X,
                               const char* name) {
  if (!X.allFinite()) {
    throw Error(ErrorCode::kNotPositiveDefinite,
                std::string(name) + " has non-finite entries");
  }
  Eigen::LLT<MatrixXd> llt(linalg::Symmetrize(X));
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kNotPositiveDefinite,
                std::string(name) + " is not positive definite");
  }
  return llt;
}

void CheckSquare(const NmeProblem& p, const Eigen::Ref<const MatrixXd>& X) {
  if (X.rows() != p.n() || X.cols() != p.n()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "X must be " + std::to_string(p.n()) + "x" +
                    std::to_string(p.n()));
  }
}

}  // namespace

NmeProblem MakeProblem(const Eigen::Ref<const MatrixXd>& A,
                       const Eigen::Ref<const MatrixXd>& Q) {
  if (A.rows() != A.cols() || Q.rows() != Q.cols() || A.rows() != Q.rows() ||
      A.rows() == 0) {
    throw Error(ErrorCode::kDimensionMismatch,
                "A and Q must be square, nonempty and of the same size");
  }
  if (!A.allFinite() || !Q.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "A and Q must have finite entries");
  }
  if (linalg::MaxAsymmetry(Q) > 1e-12 * Q.norm()) {
    throw Error(ErrorCode::kNotSymmetric, "Q is not symmetric");
  }
  MatrixXd q_sym = linalg::Symmetrize(Q);
  FactorSpd(q_sym, "Q");
  return NmeProblem(A, std::move(q_sym));
}

NmeProblem MakeScalarProblem(double a, double q) {
  return MakeProblem(MatrixXd::Constant(1, 1, a), MatrixXd::Constant(1, 1, q));
}

Residual ComputeResidual(const NmeProblem& p,
                         const Eigen::Ref<const MatrixXd>& X) {
  CheckSquare(p, X);
  const auto llt = FactorSpd(X, "X");
  const MatrixXd& A = p.A();
  Residual r;
  r.matrix = linalg::Symmetrize(p.Q() - X - A.transpose() * llt.solve(A));
  r.fro_norm = r.matrix.norm();
  r.rel_norm = r.fro_norm / p.QNorm();
  return r;
}

SymplecticPencil BuildPencil(const NmeProblem& p) {
  const int n = p.n();
  MatrixXd M = MatrixXd::Zero(2 * n, 2 * n);
  MatrixXd L = MatrixXd::Zero(2 * n, 2 * n);
  M.topLeftCorner(n, n) = p.A();
  M.bottomLeftCorner(n, n) = p.Q();
  M.bottomRightCorner(n, n) = -MatrixXd::Identity(n, n);
  L.topRightCorner(n, n) = MatrixXd::Identity(n, n);
  L.bottomLeftCorner(n, n) = p.A().transpose();
  return {M.cast<std::complex<double>>(), L.cast<std::complex<double>>(),
          PencilForm::kSsf2};
}

MatrixXd SkewJ(int n) {
  MatrixXd J = MatrixXd::Zero(2 * n, 2 * n);
  J.topRightCorner(n, n) = MatrixXd::Identity(n, n);
  J.bottomLeftCorner(n, n) = -MatrixXd::Identity(n, n);
  return J;
}

bool IsSymplecticPencil(const SymplecticPencil& pen, double tol) {
  const auto dim = pen.M.rows();
  if (pen.M.cols() != dim || pen.L.rows() != dim || pen.L.cols() != dim) {
    throw Error(ErrorCode::kDimensionMismatch, "M and L must be square");
  }
  if (dim % 2 != 0) {
    throw Error(ErrorCode::kOddDimension, "pencil dimension must be even");
  }
  const MatrixXcd J =
      SkewJ(static_cast<int>(dim / 2)).cast<std::complex<double>>();
  const double defect =
      (pen.M * J * pen.M.transpose() - pen.L * J * pen.L.transpose()).norm();
  const double scale = pen.M.norm() + pen.L.norm();
  return defect <= tol * scale * scale;
}

MatrixXcd Psi(const NmeProblem& p, std::complex<double> lambda) {
  if (lambda == 0.0) {
    throw Error(ErrorCode::kZeroLambda, "psi is undefined at lambda = 0");
  }
  return p.Q().cast<std::complex<double>>() +
         lambda * p.A().cast<std::complex<double>>() +
         (1.0 / lambda) * p.A().transpose().cast<std::complex<double>>();
}

SolvabilityVerdict CheckSolvability(const NmeProblem& p, int samples,
                                    double tol) {
  if (samples < 8) {
    throw Error(ErrorCode::kInvalidArgument, "need at least 8 samples");
  }
  SolvabilityVerdict v;
  v.samples = samples;
  v.min_eig_on_circle = std::numeric_limits<double>::infinity();
  for (int j = 0; j < samples; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / samples;
    const double m = linalg::MinEigenvalue(Psi(p, std::polar(1.0, theta)));
    if (m < v.min_eig_on_circle) {
      v.min_eig_on_circle = m;
      v.argmin_theta = theta;
    }
  }
  const auto det_at = [&](std::complex<double> z) {
    return std::abs(Psi(p, z).determinant());
  };
  v.regular = det_at({1.0, 0.0}) > 1e-300 || det_at({0.0, 1.0}) > 1e-300;
  if (v.min_eig_on_circle < -tol) {
    v.verdict = Verdict::kNotSolvable;
  } else if (v.regular) {
    v.verdict = Verdict::kSolvable;
  } else {
    v.verdict = Verdict::kInconclusive;
  }
  return v;
}

double SpectralRadiusRatio(const NmeProblem& p,
                           const Eigen::Ref<const MatrixXd>& X) {
  CheckSquare(p, X);
  const auto llt = FactorSpd(X, "X");
  return linalg::SpectralRadius(llt.solve(p.A()));
}

double InvariantSubspaceDefect(const NmeProblem& p,
                               const Eigen::Ref<const MatrixXd>& X) {
  CheckSquare(p, X);
  const int n = p.n();
  const auto llt = FactorSpd(X, "X");
  const SymplecticPencil pen = BuildPencil(p);
  const MatrixXd M = pen.M.real();
  const MatrixXd L = pen.L.real();
  MatrixXd basis(2 * n, n);
  basis.topRows(n) = MatrixXd::Identity(n, n);
  basis.bottomRows(n) = X;
  const MatrixXd S = llt.solve(p.A());
  return (M * basis - L * basis * S).norm();
}

}  // namespace nme
