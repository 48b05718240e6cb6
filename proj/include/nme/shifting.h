#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "nme/problem.h"
#include "nme/solvers.h"

namespace nme {

using Complex = std::complex<double>;

/// Data for relocating k eigenvalues at once:
///   M̂ = M + L V R1ᵀ,  L̂ = L + M V R2ᵀ,
/// valid when M V = L V Λ, R1ᵀV = Λ̂ - Λ and R2ᵀV = 0.
struct ShiftSpec {
  Eigen::MatrixXcd V;          // 2n×k eigenvectors
  Eigen::VectorXcd lambda;     // current eigenvalues (diagonal of Λ)
  Eigen::VectorXcd lambda_hat; // targets (diagonal of Λ̂)
  Eigen::MatrixXcd R1;         // 2n×k
  Eigen::MatrixXcd R2;         // 2n×k

  int k() const { return static_cast<int>(V.cols()); }
};

/// Throws SpecInvariantViolated if the R1/R2 constraints fail at 1e-10.
void ValidateShiftSpec(const ShiftSpec& spec);

/// Rank-one relocation λ0 → λ1 along the eigenvector v:
/// M̂ = M + (λ1 - λ0) L v rᵀ, L̂ = L. Requires rᵀv = 1.
/// Throws NotAnEigenpair or NotNormalized.
SymplecticPencil ShiftSingle(const SymplecticPencil& pen,
                             const Eigen::Ref<const Eigen::VectorXcd>& v,
                             Complex lambda0, Complex lambda1,
                             const Eigen::Ref<const Eigen::VectorXcd>& r);

/// Simultaneous relocation of spec.lambda to spec.lambda_hat. Throws
/// SpecInvariantViolated, NotAnEigenpair (with column index),
/// RepeatedEigenvalue, or ConjugateClosureViolated for real pencils whose
/// shifts are not closed under conjugation.
SymplecticPencil ShiftMulti(const SymplecticPencil& pen, const ShiftSpec& spec);

/// R1ᵀ = (Λ̂ - Λ)(VᴴV)⁻¹Vᴴ and R2 = 0. Throws RankDeficientV when
/// σ_min(V) < 1e-10·σ_max(V).
ShiftSpec BuildShiftFactors(const Eigen::Ref<const Eigen::MatrixXcd>& V,
                            const Eigen::Ref<const Eigen::VectorXcd>& lambda,
                            const Eigen::Ref<const Eigen::VectorXcd>& lambda_hat);

struct UnimodularEigenvalue {
  Complex value;
  int algebraic_multiplicity = 1;
  Eigen::MatrixXcd eigenvectors;  // 2n×g, unit columns, g = geometric mult.
};

struct UnimodularReport {
  std::vector<UnimodularEigenvalue> eigenvalues;
  double tol = 0.0;
};

/// Finite generalized eigenvalues with |1 - |λ|| ≤ tol. Nearby computed
/// eigenvalues (a perturbed multiple eigenvalue) are merged into one entry;
/// eigenvectors span the numerical kernel of M - λL and get one step of
/// inverse iteration. Throws EigensolverFailure or InvalidArgument.
UnimodularReport DetectUnimodular(const SymplecticPencil& pen, double tol);

/// Residual ‖Mv - λLv‖ relative to (‖M‖_F + |λ|‖L‖_F)·‖v‖.
double EigenpairResidual(const SymplecticPencil& pen,
                         const Eigen::Ref<const Eigen::VectorXcd>& v,
                         Complex lambda);

struct ShiftedScalarProblem {
  double a = 0.0;
  double q = 0.0;
};

/// (a, a(r + 1/r)): the equation whose pencil is the doubly shifted
/// critical pencil. Its maximal solution is a/r. Throws InvalidR unless
/// 0 < r < 1, InvalidArgument if a == 0.
ShiftedScalarProblem MakeShiftedScalarProblem(double a, double r);

struct ScalarShiftStep {
  double r = 0.0;
  double x_hat = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::kConverged;
};

struct ScalarShiftResult {
  double x_plus = 0.0;
  std::vector<ScalarShiftStep> per_r;
};

inline const std::vector<double> kDefaultRSchedule = {0.9, 0.99, 0.999,
                                                      0.9999};

/// Critical scalar case q = 2|a|: solves each shifted equation with scalar
/// SDA and extrapolates r·x̂(r) to r = 1 from the last two schedule points.
/// Throws NotCriticalCase, InvalidR (schedule not strictly increasing in
/// (0,1)), or DoublingBreakdown.
ScalarShiftResult SolveScalarShifted(
    double a, double q, const std::vector<double>& r_schedule,
    const SolverConfig& cfg);

}  // namespace nme
