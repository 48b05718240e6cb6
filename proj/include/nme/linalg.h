#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

// Small dense helpers shared by the problem, solver and shifting layers.
namespace nme::linalg {

using Complex = std::complex<double>;

Eigen::MatrixXd Symmetrize(const Eigen::Ref<const Eigen::MatrixXd>& X);

/// max |X(i,j) - X(j,i)|.
double MaxAsymmetry(const Eigen::Ref<const Eigen::MatrixXd>& X);

bool AllFinite(const Eigen::Ref<const Eigen::MatrixXd>& X);

/// Cholesky succeeds on the symmetric part.
bool IsPositiveDefinite(const Eigen::Ref<const Eigen::MatrixXd>& X);

/// Smallest eigenvalue of the symmetric part of X.
double MinEigenvalue(const Eigen::Ref<const Eigen::MatrixXd>& X);

/// Smallest eigenvalue of the Hermitian part of H.
double MinEigenvalue(const Eigen::Ref<const Eigen::MatrixXcd>& H);

double SpectralRadius(const Eigen::Ref<const Eigen::MatrixXd>& X);

double SpectralNorm(const Eigen::Ref<const Eigen::MatrixXd>& X);

double InfinityNorm(const Eigen::Ref<const Eigen::MatrixXd>& X);

/// Generalized eigen-decomposition of the pencil M - lambda L, with
/// eigenvalues stored as ratios alpha/beta (beta ~ 0 means infinite).
struct GeneralizedEigen {
  Eigen::VectorXcd alpha;
  Eigen::VectorXcd beta;
  Eigen::MatrixXcd vectors;  // right eigenvectors; empty unless requested

  int size() const { return static_cast<int>(alpha.size()); }
  bool IsInfinite(int i) const;
  Complex Value(int i) const;
  /// All finite eigenvalues, in solver order.
  std::vector<Complex> FiniteValues() const;
  int InfiniteCount() const;
};

/// Backed by LAPACK zggev. Throws Error(kEigensolverFailure) on failure.
GeneralizedEigen ComputeGeneralizedEigen(
    const Eigen::Ref<const Eigen::MatrixXcd>& M,
    const Eigen::Ref<const Eigen::MatrixXcd>& L, bool want_vectors);

}  // namespace nme::linalg
