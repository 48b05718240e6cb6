#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <span>

#include <Eigen/Dense>

#include "nme/problem.h"
#include "nme/solvers.h"

namespace nme {

struct GeneratorSpec {
  int n = 1;
  double rho_target = 0.5;  // in [0, 1]
  std::uint64_t seed = 0;
  double conditioning = 10.0;  // eigenvalues of X log-uniform in [1, this]
};

/// Throws InvalidArgument.
void ValidateGeneratorSpec(const GeneratorSpec& spec);

struct ExperimentRecord {
  NmeProblem problem;
  std::optional<Eigen::MatrixXd> known_solution;
  std::map<Algorithm, SolveReport> reports;
  std::optional<GeneratorSpec> generator;
  // In-memory only; never serialized so outputs stay reproducible.
  std::chrono::system_clock::time_point created;
  std::map<Algorithm, double> elapsed_seconds;
};

/// A = XS, Q = X + AᵀX⁻¹A, so X solves the equation; X is the maximal
/// solution when ρ(S) ≤ 1.
NmeProblem MakeProblemFromSolution(const Eigen::Ref<const Eigen::MatrixXd>& X,
                                   const Eigen::Ref<const Eigen::MatrixXd>& S);

/// Deterministic in spec.seed. X = U diag(d) Uᵀ, S = W diag(s) Wᵀ with U, W
/// orthogonal factors of seeded Gaussian samples, one s_i = rho_target and
/// the rest uniform in [0, rho_target).
ExperimentRecord GenerateProblem(const GeneratorSpec& spec);

/// Runs each algorithm on rec.problem. Exceptions become per-algorithm
/// reports with status kFailed; the input record is not modified.
ExperimentRecord RunExperiment(const ExperimentRecord& rec,
                               std::span<const Algorithm> algorithms,
                               const SolverConfig& cfg);

}  // namespace nme
