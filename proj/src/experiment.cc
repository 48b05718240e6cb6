#include <chrono>

#include "nme/error.h"
#include "nme/harness.h"
#include "nme/log.h"

namespace nme {

ExperimentRecord RunExperiment(const ExperimentRecord& rec,
                               std::span<const Algorithm> algorithms,
                               const SolverConfig& cfg) {
  ExperimentRecord out = rec;
  for (Algorithm algorithm : algorithms) {
    SolverConfig run_cfg = cfg;
    run_cfg.algorithm = algorithm;
    const auto start = std::chrono::steady_clock::now();
    SolveReport report;
    try {
      report = Solve(out.problem, run_cfg);
    } catch (const std::exception& e) {
      report = SolveReport{};
      report.algorithm = algorithm;
      report.status = SolveStatus::kFailed;
      report.message = e.what();
      Log().info("{} failed: {}", AlgorithmName(algorithm), e.what());
    }
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - start;
    out.elapsed_seconds[algorithm] = elapsed.count();
    out.reports[algorithm] = std::move(report);
  }
  return out;
}

}  // namespace nme
