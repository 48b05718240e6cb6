#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "nme/problem.h"
#include "nme/rate.h"

namespace nme {

enum class Algorithm { kFixedPoint, kInversionFree, kNewton, kSda };

std::string_view AlgorithmName(Algorithm algorithm);
/// Accepts "fixed-point", "inversion-free", "newton", "sda".
std::optional<Algorithm> ParseAlgorithm(std::string_view name);
inline constexpr Algorithm kAllAlgorithms[] = {
    Algorithm::kFixedPoint, Algorithm::kInversionFree, Algorithm::kNewton,
    Algorithm::kSda};

struct SolverConfig {
  Algorithm algorithm = Algorithm::kSda;
  double tol = 1e-12;  // relative residual ‖Q - X - AᵀX⁻¹A‖_F / ‖Q‖_F
  int max_iter = 200;
  bool record_history = true;
  /// Keep every iterate matrix in SolveReport::iterates. Off by default.
  bool record_iterates = false;
  /// Stopping tests are skipped before this iteration.
  int min_iter = 0;
};

/// Throws InvalidArgument unless tol > 0, max_iter ≥ 1 and
/// 0 ≤ min_iter ≤ max_iter.
void ValidateConfig(const SolverConfig& cfg);

enum class SolveStatus {
  kConverged,
  kMaxIterationsExceeded,
  kLostPositiveDefiniteness,
  kDoublingBreakdown,
  kSingularSteinOperator,
  kDiverged,
  /// SDA only: ‖A_k‖ vanished before the residual met the tolerance.
  kStagnated,
  /// An exception escaped the solver (recorded by RunExperiment).
  kFailed,
};

std::string_view SolveStatusName(SolveStatus status);

struct IterationRecord {
  int k = 0;
  double rel_residual = 0.0;
  double step_norm = 0.0;  // ‖X_k - X_{k-1}‖_F
  /// SDA: ‖A_k‖_F. Newton: ρ(L_k). Otherwise 0.
  double aux1 = 0.0;
  /// SDA: λ_min(Q_k - P_k). Otherwise 0.
  double aux2 = 0.0;
  /// λ_min of the difference the algorithm's ordering says is ⪰ 0:
  /// fixed point and inversion-free X_{k-1} - X_k, Newton X_k - X_{k-1},
  /// SDA Q_{k-1} - Q_k. NaN at k = 0.
  double order_gap = 0.0;
  /// Inversion-free: λ_min(Y_k - Y_{k-1}); SDA: λ_min(P_k - P_{k-1}).
  double order_gap_aux = 0.0;
};

/// Iterate matrices kept when SolverConfig::record_iterates is set. Unused
/// slots stay empty. SDA stores Q_k in X.
struct IterateSnapshot {
  int k = 0;
  Eigen::MatrixXd X;
  Eigen::MatrixXd Y;  // inversion-free Y_k
  Eigen::MatrixXd P;  // SDA P_k
  Eigen::MatrixXd A;  // SDA A_k, Newton L_k
};

struct SolveReport {
  Algorithm algorithm = Algorithm::kSda;
  Eigen::MatrixXd X;
  int iterations = 0;
  bool converged = false;
  SolveStatus status = SolveStatus::kMaxIterationsExceeded;
  std::optional<int> failure_iteration;
  std::string message;
  double final_rel_residual = 0.0;
  std::vector<IterationRecord> history;
  std::vector<IterateSnapshot> iterates;
  std::optional<RateEstimate> estimated_rate;
  double rho_ratio = 0.0;  // ρ(X⁻¹A) of the returned X, NaN if X is not SPD
  /// Ordering suite evaluated over the recorded history with slack
  /// 1e-10·‖Q‖_F (Newton from k = 2 on). Meaningful when record_history.
  bool order_relations_hold = true;
};

/// X_{k+1} = Q - AᵀX_k⁻¹A from X_0 = Q.
SolveReport SolveFixedPoint(const NmeProblem& p, const SolverConfig& cfg);

/// Y_{k+1} = Y_k(2I - X_kY_k), X_{k+1} = Q - AᵀY_kA from X_0 = Q,
/// Y_0 = I/‖Q‖_∞.
SolveReport SolveInversionFree(const NmeProblem& p, const SolverConfig& cfg);

/// L_k = X_{k-1}⁻¹A, then X_k - L_kᵀX_kL_k = Q - 2L_kᵀA, from X_0 = Q.
SolveReport SolveNewton(const NmeProblem& p, const SolverConfig& cfg);

/// Doubling on the SSF-2 blocks (A_k, Q_k, P_k) from (A, Q, 0). The
/// candidate solution is Q_k. Stops on the residual or on
/// ‖A_k‖_F ≤ tol·‖A‖_F.
SolveReport SolveSda(const NmeProblem& p, const SolverConfig& cfg);

/// Scalar doubling: a_{k+1} = a_k²/(q_k - p_k), q_{k+1} = q_k - a_{k+1},
/// p_{k+1} = p_k + a_{k+1}. Throws InvalidArgument unless q > 0.
SolveReport SolveSdaScalar(double a, double q, const SolverConfig& cfg);

/// Dispatches on cfg.algorithm.
SolveReport Solve(const NmeProblem& p, const SolverConfig& cfg);

/// X - LᵀXL = C.
struct SteinProblem {
  Eigen::MatrixXd L;
  Eigen::MatrixXd C;
};

/// Dense n²×n² vectorized solve; result symmetrized. Throws
/// SingularSteinOperator if the operator is rank deficient at 1e-10.
Eigen::MatrixXd SolveStein(const SteinProblem& sp);

}  // namespace nme
