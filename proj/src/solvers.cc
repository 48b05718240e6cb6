#include "nme/solvers.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nme/error.h"
#include "nme/linalg.h"
#include "nme/log.h"

namespace nme {

namespace {

using Eigen::MatrixXd;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kDivergenceFactor = 1e6;
constexpr double kDivergenceFloor = 1e-16;

// Relative residual of a candidate X, or nullopt when X is not SPD.
std::optional<double> RelResidual(const NmeProblem& p, const MatrixXd& X) {
  Eigen::LLT<MatrixXd> llt(X);
  if (llt.info() != Eigen::Success || !X.allFinite()) return std::nullopt;
  const MatrixXd R = p.Q() - X - p.A().transpose() * llt.solve(p.A());
  return linalg::Symmetrize(R).norm() / p.QNorm();
}

// Shared bookkeeping: history, divergence detection, ordering flags and the
// final report fields.
class RunLog {
 public:
  RunLog(const NmeProblem& p, const SolverConfig& cfg)
      : p_(p), cfg_(cfg), slack_(1e-10 * p.QNorm()) {
    report_.algorithm = cfg.algorithm;
  }

  SolveReport& report() { return report_; }
  bool record_history() const { return cfg_.record_history; }
  double slack() const { return slack_; }

  void Record(IterationRecord rec, bool check_gap, bool check_gap_aux) {
    step_norms_.push_back(rec.step_norm);
    min_residual_ = std::min(min_residual_, rec.rel_residual);
    if (!cfg_.record_history) return;
    if (check_gap && rec.order_gap < -slack_) report_.order_relations_hold = false;
    if (check_gap_aux && rec.order_gap_aux < -slack_) {
      report_.order_relations_hold = false;
    }
    report_.history.push_back(rec);
  }

  void Snapshot(IterateSnapshot snap) {
    if (cfg_.record_iterates) report_.iterates.push_back(std::move(snap));
  }

  bool Diverging(double residual) const {
    return residual > kDivergenceFactor * std::max(min_residual_, kDivergenceFloor);
  }

  void Fail(SolveStatus status, int k, std::string message) {
    report_.status = status;
    report_.converged = false;
    report_.failure_iteration = k;
    report_.message = std::move(message);
    Log().info("{}: {} at iteration {}", AlgorithmName(cfg_.algorithm),
               SolveStatusName(status), k);
  }

  SolveReport Finish(MatrixXd X, int iterations, double residual) {
    report_.X = std::move(X);
    report_.iterations = iterations;
    report_.final_rel_residual = residual;
    if (report_.status == SolveStatus::kConverged) report_.converged = true;
    if (step_norms_.size() > 1) {
      try {
        // k = 0 has no step.
        report_.estimated_rate = EstimateRate(
            std::span<const double>(step_norms_).subspan(1));
      } catch (const Error&) {
        report_.estimated_rate.reset();
      }
    }
    report_.rho_ratio = linalg::IsPositiveDefinite(report_.X)
                            ? SpectralRadiusRatio(p_, report_.X)
                            : kNaN;
    Log().debug("{}: {} after {} iterations, residual {:.3e}",
                AlgorithmName(cfg_.algorithm), SolveStatusName(report_.status),
                iterations, residual);
    return std::move(report_);
  }

 private:
  const NmeProblem& p_;
  const SolverConfig& cfg_;
  double slack_;
  SolveReport report_;
  std::vector<double> step_norms_;
  double min_residual_ = std::numeric_limits<double>::infinity();
};

double GapOrNaN(bool enabled, const MatrixXd& D) {
  return enabled ? linalg::MinEigenvalue(D) : kNaN;
}

}  // namespace

std::string_view AlgorithmName(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kFixedPoint: return "fixed-point";
    case Algorithm::kInversionFree: return "inversion-free";
    case Algorithm::kNewton: return "newton";
    case Algorithm::kSda: return "sda";
  }
  return "unknown";
}

std::optional<Algorithm> ParseAlgorithm(std::string_view name) {
  for (Algorithm a : kAllAlgorithms) {
    if (AlgorithmName(a) == name) return a;
  }
  return std::nullopt;
}

std::string_view SolveStatusName(SolveStatus status) {
  switch (status) {
    case SolveStatus::kConverged: return "Converged";
    case SolveStatus::kMaxIterationsExceeded: return "MaxIterationsExceeded";
    case SolveStatus::kLostPositiveDefiniteness: return "LostPositiveDefiniteness";
    case SolveStatus::kDoublingBreakdown: return "DoublingBreakdown";
    case SolveStatus::kSingularSteinOperator: return "SingularSteinOperator";
    case SolveStatus::kDiverged: return "Diverged";
    case SolveStatus::kStagnated: return "Stagnated";
    case SolveStatus::kFailed: return "Failed";
  }
  return "Unknown";
}

void ValidateConfig(const SolverConfig& cfg) {
  if (!(cfg.tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tol must be positive");
  }
  if (cfg.max_iter < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_iter must be at least 1");
  }
  if (cfg.min_iter < 0 || cfg.min_iter > cfg.max_iter) {
    throw Error(ErrorCode::kInvalidArgument,
                "min_iter must lie in [0, max_iter]");
  }
}

SolveReport SolveFixedPoint(const NmeProblem& p, const SolverConfig& cfg) {
  ValidateConfig(cfg);
  RunLog log(p, cfg);
  const MatrixXd& A = p.A();
  MatrixXd X = p.Q();
  double residual = RelResidual(p, X).value();
  log.Record({0, residual, 0.0, 0.0, 0.0, kNaN, kNaN}, false, false);
  log.Snapshot({0, X, {}, {}, {}});

  int k = 1;
  for (; k <= cfg.max_iter; ++k) {
    Eigen::LLT<MatrixXd> llt(X);
    if (llt.info() != Eigen::Success) {
      log.Fail(SolveStatus::kLostPositiveDefiniteness, k - 1,
               "X_k is not positive definite");
      return log.Finish(X, k - 1, residual);
    }
    MatrixXd next = linalg::Symmetrize(p.Q() - A.transpose() * llt.solve(A));
    const auto r = RelResidual(p, next);
    if (!r) {
      log.Fail(SolveStatus::kLostPositiveDefiniteness, k,
               "X_k is not positive definite");
      return log.Finish(next, k, kNaN);
    }
    residual = *r;
    log.Record({k, residual, (next - X).norm(), 0.0, 0.0,
                GapOrNaN(cfg.record_history, X - next), kNaN},
               true, false);
    log.Snapshot({k, next, {}, {}, {}});
    X = std::move(next);
    if (k >= cfg.min_iter && residual <= cfg.tol) {
      log.report().status = SolveStatus::kConverged;
      return log.Finish(X, k, residual);
    }
    if (log.Diverging(residual)) {
      log.Fail(SolveStatus::kDiverged, k, "residual grew by more than 1e6");
      return log.Finish(X, k, residual);
    }
  }
  log.Fail(SolveStatus::kMaxIterationsExceeded, cfg.max_iter,
           "tolerance not reached");
  return log.Finish(X, cfg.max_iter, residual);
}

SolveReport SolveInversionFree(const NmeProblem& p, const SolverConfig& cfg) {
  ValidateConfig(cfg);
  RunLog log(p, cfg);
  const int n = p.n();
  const MatrixXd& A = p.A();
  const MatrixXd I = MatrixXd::Identity(n, n);
  MatrixXd X = p.Q();
  MatrixXd Y = I / linalg::InfinityNorm(p.Q());
  double residual = RelResidual(p, X).value();
  log.Record({0, residual, 0.0, 0.0, 0.0, kNaN, kNaN}, false, false);
  log.Snapshot({0, X, Y, {}, {}});

  for (int k = 1; k <= cfg.max_iter; ++k) {
    MatrixXd next_y = linalg::Symmetrize(Y * (2.0 * I - X * Y));
    MatrixXd next_x = linalg::Symmetrize(p.Q() - A.transpose() * Y * A);
    const auto r = RelResidual(p, next_x);
    if (!r) {
      log.Fail(SolveStatus::kLostPositiveDefiniteness, k,
               "X_k is not positive definite");
      return log.Finish(next_x, k, kNaN);
    }
    residual = *r;
    log.Record({k, residual, (next_x - X).norm(), 0.0, 0.0,
                GapOrNaN(cfg.record_history, X - next_x),
                GapOrNaN(cfg.record_history, next_y - Y)},
               true, true);
    log.Snapshot({k, next_x, next_y, {}, {}});
    X = std::move(next_x);
    Y = std::move(next_y);
    if (k >= cfg.min_iter && residual <= cfg.tol) {
      log.report().status = SolveStatus::kConverged;
      return log.Finish(X, k, residual);
    }
    if (log.Diverging(residual)) {
      log.Fail(SolveStatus::kDiverged, k, "residual grew by more than 1e6");
      return log.Finish(X, k, residual);
    }
  }
  log.Fail(SolveStatus::kMaxIterationsExceeded, cfg.max_iter,
           "tolerance not reached");
  return log.Finish(X, cfg.max_iter, residual);
}

SolveReport SolveNewton(const NmeProblem& p, const SolverConfig& cfg) {
  ValidateConfig(cfg);
  RunLog log(p, cfg);
  const MatrixXd& A = p.A();
  MatrixXd X = p.Q();
  double residual = RelResidual(p, X).value();
  log.Record({0, residual, 0.0, 0.0, 0.0, kNaN, kNaN}, false, false);
  log.Snapshot({0, X, {}, {}, {}});

  for (int k = 1; k <= cfg.max_iter; ++k) {
    Eigen::LLT<MatrixXd> llt(X);
    if (llt.info() != Eigen::Success) {
      log.Fail(SolveStatus::kLostPositiveDefiniteness, k - 1,
               "X_k is not positive definite");
      return log.Finish(X, k - 1, residual);
    }
    const MatrixXd Lk = llt.solve(A);
    const MatrixXd rhs = linalg::Symmetrize(p.Q() - 2.0 * Lk.transpose() * A);
    MatrixXd next;
    try {
      next = SolveStein({Lk, rhs});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSingularSteinOperator) throw;
      log.Fail(SolveStatus::kSingularSteinOperator, k, e.what());
      return log.Finish(X, k - 1, residual);
    }
    const auto r = RelResidual(p, next);
    if (!r) {
      log.Fail(SolveStatus::kLostPositiveDefiniteness, k,
               "X_k is not positive definite");
      return log.Finish(next, k, kNaN);
    }
    residual = *r;
    const double rho_l = cfg.record_history ? linalg::SpectralRadius(Lk) : 0.0;
    // The X_0 -> X_1 step is recorded but not part of the ordering check.
    log.Record({k, residual, (next - X).norm(), rho_l, 0.0,
                GapOrNaN(cfg.record_history, next - X), kNaN},
               k >= 2, false);
    if (cfg.record_history && rho_l >= 1.0 + 1e-8) {
      log.report().order_relations_hold = false;
    }
    log.Snapshot({k, next, {}, {}, Lk});
    X = std::move(next);
    if (k >= cfg.min_iter && residual <= cfg.tol) {
      log.report().status = SolveStatus::kConverged;
      return log.Finish(X, k, residual);
    }
    if (log.Diverging(residual)) {
      log.Fail(SolveStatus::kDiverged, k, "residual grew by more than 1e6");
      return log.Finish(X, k, residual);
    }
  }
  log.Fail(SolveStatus::kMaxIterationsExceeded, cfg.max_iter,
           "tolerance not reached");
  return log.Finish(X, cfg.max_iter, residual);
}

SolveReport SolveSda(const NmeProblem& p, const SolverConfig& cfg) {
  ValidateConfig(cfg);
  RunLog log(p, cfg);
  const int n = p.n();
  const double a_norm = p.A().norm();
  MatrixXd Ak = p.A();
  MatrixXd Qk = p.Q();
  MatrixXd Pk = MatrixXd::Zero(n, n);

  double residual = RelResidual(p, Qk).value();
  log.Record({0, residual, 0.0, Ak.norm(),
              GapOrNaN(cfg.record_history, Qk - Pk), kNaN, kNaN},
             false, false);
  log.Snapshot({0, Qk, {}, Pk, Ak});
  if (cfg.min_iter == 0 && residual <= cfg.tol) {
    log.report().status = SolveStatus::kConverged;
    return log.Finish(Qk, 0, residual);
  }
  if (cfg.min_iter == 0 && Ak.norm() <= cfg.tol * a_norm) {
    log.Fail(SolveStatus::kStagnated, 0, "A_k vanished above tolerance");
    return log.Finish(Qk, 0, residual);
  }

  for (int k = 1; k <= cfg.max_iter; ++k) {
    Eigen::LLT<MatrixXd> llt(Qk - Pk);
    if (llt.info() != Eigen::Success) {
      log.Fail(SolveStatus::kDoublingBreakdown, k - 1,
               "Q_k - P_k is not positive definite");
      return log.Finish(Qk, k - 1, residual);
    }
    const MatrixXd WA = llt.solve(Ak);
    const MatrixXd WAt = llt.solve(Ak.transpose());
    MatrixXd next_a = Ak * WA;
    MatrixXd next_q = linalg::Symmetrize(Qk - Ak.transpose() * WA);
    MatrixXd next_p = linalg::Symmetrize(Pk + Ak * WAt);

    const auto r = RelResidual(p, next_q);
    if (!r) {
      log.Fail(SolveStatus::kLostPositiveDefiniteness, k,
               "Q_k is not positive definite");
      return log.Finish(next_q, k, kNaN);
    }
    residual = *r;
    const double a_k_norm = next_a.norm();
    const bool rec = cfg.record_history;
    log.Record({k, residual, (next_q - Qk).norm(), a_k_norm,
                GapOrNaN(rec, next_q - next_p), GapOrNaN(rec, Qk - next_q),
                GapOrNaN(rec, next_p - Pk)},
               true, true);
    if (rec && !(log.report().history.back().aux2 > 0.0)) {
      log.report().order_relations_hold = false;
    }
    log.Snapshot({k, next_q, {}, next_p, next_a});
    Ak = std::move(next_a);
    Qk = std::move(next_q);
    Pk = std::move(next_p);
    if (k >= cfg.min_iter && residual <= cfg.tol) {
      log.report().status = SolveStatus::kConverged;
      return log.Finish(Qk, k, residual);
    }
    if (k >= cfg.min_iter && a_k_norm <= cfg.tol * a_norm) {
      log.Fail(SolveStatus::kStagnated, k, "A_k vanished above tolerance");
      return log.Finish(Qk, k, residual);
    }
    if (log.Diverging(residual)) {
      log.Fail(SolveStatus::kDiverged, k, "residual grew by more than 1e6");
      return log.Finish(Qk, k, residual);
    }
  }
  log.Fail(SolveStatus::kMaxIterationsExceeded, cfg.max_iter,
           "tolerance not reached");
  return log.Finish(Qk, cfg.max_iter, residual);
}

SolveReport SolveSdaScalar(double a, double q, const SolverConfig& cfg) {
  ValidateConfig(cfg);
  if (!(q > 0.0) || !std::isfinite(a) || !std::isfinite(q)) {
    throw Error(ErrorCode::kInvalidArgument, "scalar SDA needs q > 0");
  }
  const NmeProblem p = MakeScalarProblem(a, q);
  SolverConfig scalar_cfg = cfg;
  scalar_cfg.algorithm = Algorithm::kSda;
  RunLog log(p, scalar_cfg);
  const auto mat = [](double v) { return MatrixXd::Constant(1, 1, v); };
  const auto rel_residual = [&](double x) -> std::optional<double> {
    if (!(x > 0.0)) return std::nullopt;
    return std::abs(q - x - a * a / x) / std::abs(q);
  };

  double ak = a, qk = q, pk = 0.0;
  double residual = rel_residual(qk).value();
  log.Record({0, residual, 0.0, std::abs(ak), qk - pk, kNaN, kNaN}, false,
             false);
  log.Snapshot({0, mat(qk), {}, mat(pk), mat(ak)});
  if (cfg.min_iter == 0 && residual <= cfg.tol) {
    log.report().status = SolveStatus::kConverged;
    return log.Finish(mat(qk), 0, residual);
  }
  if (cfg.min_iter == 0 && std::abs(ak) <= cfg.tol * std::abs(a)) {
    log.Fail(SolveStatus::kStagnated, 0, "a_k vanished above tolerance");
    return log.Finish(mat(qk), 0, residual);
  }

  for (int k = 1; k <= cfg.max_iter; ++k) {
    const double w = qk - pk;
    if (!(w > 0.0)) {
      log.Fail(SolveStatus::kDoublingBreakdown, k - 1, "q_k - p_k <= 0");
      return log.Finish(mat(qk), k - 1, residual);
    }
    const double next_a = ak * ak / w;
    const double next_q = qk - next_a;
    const double next_p = pk + next_a;
    const auto r = rel_residual(next_q);
    if (!r) {
      log.Fail(SolveStatus::kLostPositiveDefiniteness, k, "q_k <= 0");
      return log.Finish(mat(next_q), k, kNaN);
    }
    residual = *r;
    log.Record({k, residual, std::abs(next_q - qk), std::abs(next_a),
                next_q - next_p, qk - next_q, next_p - pk},
               true, true);
    if (cfg.record_history && !(next_q - next_p > 0.0)) {
      log.report().order_relations_hold = false;
    }
    log.Snapshot({k, mat(next_q), {}, mat(next_p), mat(next_a)});
    ak = next_a;
    qk = next_q;
    pk = next_p;
    if (k >= cfg.min_iter && residual <= cfg.tol) {
      log.report().status = SolveStatus::kConverged;
      return log.Finish(mat(qk), k, residual);
    }
    if (k >= cfg.min_iter && std::abs(ak) <= cfg.tol * std::abs(a)) {
      log.Fail(SolveStatus::kStagnated, k, "a_k vanished above tolerance");
      return log.Finish(mat(qk), k, residual);
    }
    if (log.Diverging(residual)) {
      log.Fail(SolveStatus::kDiverged, k, "residual grew by more than 1e6");
      return log.Finish(mat(qk), k, residual);
    }
  }
  log.Fail(SolveStatus::kMaxIterationsExceeded, cfg.max_iter,
           "tolerance not reached");
  return log.Finish(mat(qk), cfg.max_iter, residual);
}

SolveReport Solve(const NmeProblem& p, const SolverConfig& cfg) {
  switch (cfg.algorithm) {
    case Algorithm::kFixedPoint: return SolveFixedPoint(p, cfg);
    case Algorithm::kInversionFree: return SolveInversionFree(p, cfg);
    case Algorithm::kNewton: return SolveNewton(p, cfg);
    case Algorithm::kSda: return SolveSda(p, cfg);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown algorithm");
}

}  // namespace nme
