#include "nme/linalg.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "nme/error.h"

namespace nme::linalg {

Eigen::MatrixXd Symmetrize(const Eigen::Ref<const Eigen::MatrixXd>& X) {
  return 0.5 * (X + X.transpose());
}

double MaxAsymmetry(const Eigen::Ref<const Eigen::MatrixXd>& X) {
  if (X.size() == 0) return 0.0;
  return (X - X.transpose()).cwiseAbs().maxCoeff();
}

bool AllFinite(const Eigen::Ref<const Eigen::MatrixXd>& X) {
  return X.allFinite();
}

bool IsPositiveDefinite(const Eigen::Ref<const Eigen::MatrixXd>& X) {
  if (!X.allFinite()) return false;
  Eigen::LLT<Eigen::MatrixXd> llt(Symmetrize(X));
  return llt.info() == Eigen::Success;
}

double MinEigenvalue(const Eigen::Ref<const Eigen::MatrixXd>& X) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Symmetrize(X),
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double MinEigenvalue(const Eigen::Ref<const Eigen::MatrixXcd>& H) {
  const Eigen::MatrixXcd herm = 0.5 * (H + H.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm,
                                                     Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double SpectralRadius(const Eigen::Ref<const Eigen::MatrixXd>& X) {
  if (X.size() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(X, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double SpectralNorm(const Eigen::Ref<const Eigen::MatrixXd>& X) {
  if (X.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X);
  return svd.singularValues()(0);
}

double InfinityNorm(const Eigen::Ref<const Eigen::MatrixXd>& X) {
  if (X.size() == 0) return 0.0;
  return X.cwiseAbs().rowwise().sum().maxCoeff();
}

bool GeneralizedEigen::IsInfinite(int i) const {
  return std::abs(beta(i)) <= 1e-13 * std::abs(alpha(i)) ||
         std::abs(beta(i)) == 0.0;
}

Complex GeneralizedEigen::Value(int i) const {
  if (IsInfinite(i)) {
    return {std::numeric_limits<double>::infinity(), 0.0};
  }
  return alpha(i) / beta(i);
}

std::vector<Complex> GeneralizedEigen::FiniteValues() const {
  std::vector<Complex> out;
  for (int i = 0; i < size(); ++i) {
    if (!IsInfinite(i)) out.push_back(alpha(i) / beta(i));
  }
  return out;
}

int GeneralizedEigen::InfiniteCount() const {
  int count = 0;
  for (int i = 0; i < size(); ++i) count += IsInfinite(i) ? 1 : 0;
  return count;
}

GeneralizedEigen ComputeGeneralizedEigen(
    const Eigen::Ref<const Eigen::MatrixXcd>& M,
    const Eigen::Ref<const Eigen::MatrixXcd>& L, bool want_vectors) {
  const auto n = M.rows();
  if (M.cols() != n || L.rows() != n || L.cols() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "pencil matrices must be square and of equal size");
  }
  // zggev overwrites its inputs; column-major copies.
  Eigen::MatrixXcd a = M;
  Eigen::MatrixXcd b = L;
  GeneralizedEigen out;
  out.alpha.resize(n);
  out.beta.resize(n);
  if (want_vectors) out.vectors.resize(n, n);
  Complex dummy;
  const lapack_int ld = std::max<lapack_int>(1, static_cast<lapack_int>(n));
  const lapack_int info = LAPACKE_zggev(
      LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N',
      static_cast<lapack_int>(n), a.data(), ld, b.data(), ld,
      out.alpha.data(), out.beta.data(), &dummy, 1,
      want_vectors ? out.vectors.data() : &dummy, want_vectors ? ld : 1);
  if (info != 0) {
    throw Error(ErrorCode::kEigensolverFailure,
                "zggev returned info=" + std::to_string(info));
  }
  return out;
}

}  // namespace nme::linalg
