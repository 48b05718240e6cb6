#pragma once

#include <complex>
#include <utility>

#include <Eigen/Dense>

namespace nme {

/// Data of X + AᵀX⁻¹A = Q with Q symmetric positive definite. Construct
/// through MakeProblem, which validates and symmetrizes Q.
class NmeProblem {
 public:
  int n() const { return static_cast<int>(A_.rows()); }
  const Eigen::MatrixXd& A() const { return A_; }
  const Eigen::MatrixXd& Q() const { return Q_; }
  double QNorm() const { return Q_.norm(); }

 private:
  friend NmeProblem MakeProblem(const Eigen::Ref<const Eigen::MatrixXd>& A,
                                const Eigen::Ref<const Eigen::MatrixXd>& Q);
  NmeProblem(Eigen::MatrixXd A, Eigen::MatrixXd Q)
      : A_(std::move(A)), Q_(std::move(Q)) {}

  Eigen::MatrixXd A_;
  Eigen::MatrixXd Q_;
};

/// Throws DimensionMismatch, NonFinite, NotSymmetric (asymmetry above
/// 1e-12·‖Q‖_F) or NotPositiveDefinite.
NmeProblem MakeProblem(const Eigen::Ref<const Eigen::MatrixXd>& A,
                       const Eigen::Ref<const Eigen::MatrixXd>& Q);

/// Convenience for the 1×1 equation x + a²/x = q.
NmeProblem MakeScalarProblem(double a, double q);

enum class PencilForm {
  kSsf2,    // M = [A 0; Q -I], L = [-P I; Aᵀ 0]
  kGeneral,
};

struct SymplecticPencil {
  Eigen::MatrixXcd M;
  Eigen::MatrixXcd L;
  PencilForm form = PencilForm::kGeneral;

  int dim() const { return static_cast<int>(M.rows()); }
};

struct Residual {
  Eigen::MatrixXd matrix;  // Q - X - AᵀX⁻¹A, symmetrized
  double fro_norm = 0.0;
  double rel_norm = 0.0;   // fro_norm / ‖Q‖_F
};

enum class Verdict { kSolvable, kNotSolvable, kInconclusive };

/// Sampled necessary-condition check of ψ(e^{iθ}) ⪰ 0; never a proof.
struct SolvabilityVerdict {
  bool regular = false;
  double min_eig_on_circle = 0.0;
  double argmin_theta = 0.0;
  int samples = 0;
  Verdict verdict = Verdict::kInconclusive;
};

/// Q - X - AᵀX⁻¹A. Throws NotPositiveDefinite if X is not SPD.
Residual ComputeResidual(const NmeProblem& p,
                         const Eigen::Ref<const Eigen::MatrixXd>& X);

/// SSF-2 pencil with P = 0.
SymplecticPencil BuildPencil(const NmeProblem& p);

/// ‖MJMᵀ - LJLᵀ‖_F ≤ tol·(‖M‖_F + ‖L‖_F)². Throws OddDimension.
bool IsSymplecticPencil(const SymplecticPencil& pen, double tol);

/// ψ(λ) = Q + λA + λ⁻¹Aᵀ. Throws ZeroLambda.
Eigen::MatrixXcd Psi(const NmeProblem& p, std::complex<double> lambda);

inline constexpr int kDefaultSolvabilitySamples = 512;
inline constexpr double kDefaultSolvabilityTol = 1e-10;

/// Evaluates the minimum eigenvalue of the Hermitian part of ψ at `samples`
/// equispaced points θ_j = 2πj/samples, and probes det ψ at λ = 1 and λ = i
/// for regularity.
SolvabilityVerdict CheckSolvability(
    const NmeProblem& p, int samples = kDefaultSolvabilitySamples,
    double tol = kDefaultSolvabilityTol);

/// ρ(X⁻¹A). Throws NotPositiveDefinite.
double SpectralRadiusRatio(const NmeProblem& p,
                           const Eigen::Ref<const Eigen::MatrixXd>& X);

/// ‖M[I;X] - L[I;X]X⁻¹A‖_F, evaluated with the pencil blocks.
double InvariantSubspaceDefect(const NmeProblem& p,
                               const Eigen::Ref<const Eigen::MatrixXd>& X);

/// The canonical skew matrix [0 I; -I 0] of size 2n.
Eigen::MatrixXd SkewJ(int n);

}  // namespace nme
