#include "nme/cli.h"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "nme/error.h"
#include "nme/harness.h"
#include "nme/io.h"
#include "nme/linalg.h"
#include "nme/shifting.h"
#include "nme/solvers.h"

namespace nme {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitInput = 2;

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEigensolverFailure:
    case ErrorCode::kDoublingBreakdown:
    case ErrorCode::kSingularSteinOperator:
    case ErrorCode::kInsufficientHistory:
      return kExitNumerical;
    default:
      return kExitInput;
  }
}

// Writes to `path`, or to `out` when path is empty.
void Emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    io::WriteTextFile(path, text);
  }
}

std::string RateCell(const SolveReport& report) {
  if (!report.estimated_rate) return "none";
  if (report.estimated_rate->rate) {
    return io::FormatNumber(*report.estimated_rate->rate);
  }
  return std::string(RateKindName(report.estimated_rate->kind));
}

struct SolveArgs {
  std::string problem;
  std::string algorithm = "sda";
  double tol = 1e-12;
  int max_iter = 200;
  std::string history;
  std::string out;
};

int RunSolve(const SolveArgs& args, std::ostream& out, std::ostream& err) {
  const auto algorithm = ParseAlgorithm(args.algorithm);
  if (!algorithm) {
    err << "unknown algorithm: " << args.algorithm << "\n";
    return kExitInput;
  }
  const NmeProblem problem = io::ParseProblemJson(io::ReadTextFile(args.problem));
  SolverConfig cfg;
  cfg.algorithm = *algorithm;
  cfg.tol = args.tol;
  cfg.max_iter = args.max_iter;
  cfg.record_history = true;
  const SolveReport report = Solve(problem, cfg);
  Emit(args.out, io::ReportJson(report), out);
  if (!args.history.empty()) {
    std::ostringstream csv;
    io::WriteHistoryCsv(csv, report);
    io::WriteTextFile(args.history, csv.str());
  }
  if (!report.converged) {
    err << AlgorithmName(report.algorithm) << ": "
        << SolveStatusName(report.status) << " after " << report.iterations
        << " iterations (relative residual "
        << fmt::format("{:.3e}", report.final_rel_residual) << ")\n";
    return kExitNumerical;
  }
  return kExitOk;
}

struct GenerateArgs {
  GeneratorSpec spec;
  std::string out;
};

int RunGenerate(const GenerateArgs& args, std::ostream& out) {
  Emit(args.out, io::ProblemJson(GenerateProblem(args.spec)), out);
  return kExitOk;
}

struct BenchArgs {
  std::vector<double> rhos = {0.5, 0.9, 0.99, 0.999};
  int n = 8;
  std::uint64_t seed = 1;
  double conditioning = 10.0;
  double tol = 1e-12;
  int max_iter = 50000;
  std::string out;
};

int RunBench(const BenchArgs& args, std::ostream& out) {
  struct Row {
    std::string algorithm;
    double rho;
    std::string line;
  };
  std::vector<Row> rows;
  SolverConfig cfg;
  cfg.tol = args.tol;
  cfg.max_iter = args.max_iter;
  cfg.record_history = false;
  for (double rho : args.rhos) {
    const ExperimentRecord rec =
        GenerateProblem({args.n, rho, args.seed, args.conditioning});
    const ExperimentRecord done = RunExperiment(rec, kAllAlgorithms, cfg);
    for (const auto& [algorithm, report] : done.reports) {
      const std::string residual =
          std::isfinite(report.final_rel_residual)
              ? io::FormatNumber(report.final_rel_residual)
              : "nan";
      rows.push_back({std::string(AlgorithmName(algorithm)), rho,
                      fmt::format("{},{},{},{},{}\n", AlgorithmName(algorithm),
                                  io::FormatNumber(rho), report.iterations,
                                  residual, RateCell(report))});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
    return x.algorithm != y.algorithm ? x.algorithm < y.algorithm
                                      : x.rho < y.rho;
  });
  std::string csv = "algorithm,rho,iterations,final_residual,estimated_rate\n";
  for (const Row& row : rows) csv += row.line;
  Emit(args.out, csv, out);
  return kExitOk;
}

struct VerifyShiftArgs {
  std::string pencil;
  std::string spec;
  std::string before;
  std::string after;
};

// Marks, for each target, the nearest not-yet-marked point.
std::vector<io::SpectrumPoint> MarkMoved(const std::vector<Complex>& values,
                                         const Eigen::VectorXcd& targets) {
  std::vector<io::SpectrumPoint> points;
  for (Complex z : values) points.push_back({z, false});
  for (Eigen::Index i = 0; i < targets.size(); ++i) {
    int best = -1;
    for (int j = 0; j < static_cast<int>(points.size()); ++j) {
      if (points[j].moved) continue;
      if (best < 0 || std::abs(points[j].value - targets(i)) <
                          std::abs(points[best].value - targets(i))) {
        best = j;
      }
    }
    if (best >= 0) points[best].moved = true;
  }
  return points;
}

int RunVerifyShift(const VerifyShiftArgs& args, std::ostream& out,
                   std::ostream& err) {
  const SymplecticPencil pen =
      io::ParsePencilJson(io::ReadTextFile(args.pencil));
  const ShiftSpec spec =
      io::ParseShiftSpecJson(io::ReadTextFile(args.spec), pen.dim());
  const SymplecticPencil shifted = ShiftMulti(pen, spec);

  const auto before = linalg::ComputeGeneralizedEigen(pen.M, pen.L, false);
  const auto after =
      linalg::ComputeGeneralizedEigen(shifted.M, shifted.L, false);
  if (before.InfiniteCount() + after.InfiniteCount() > 0) {
    err << "omitted infinite eigenvalues: " << before.InfiniteCount()
        << " before, " << after.InfiniteCount() << " after\n";
  }
  std::ostringstream before_csv, after_csv;
  io::WriteSpectrumCsv(before_csv, MarkMoved(before.FiniteValues(), spec.lambda));
  io::WriteSpectrumCsv(after_csv,
                       MarkMoved(after.FiniteValues(), spec.lambda_hat));
  Emit(args.before, before_csv.str(), out);
  if (args.before.empty() && args.after.empty()) out << "\n";
  Emit(args.after, after_csv.str(), out);
  return kExitOk;
}

struct ScalarCriticalArgs {
  double a = 1.0;
  double q = 2.0;
  std::vector<double> schedule = kDefaultRSchedule;
  double tol = 1e-12;
};

int RunScalarCritical(const ScalarCriticalArgs& args, std::ostream& out) {
  SolverConfig cfg;
  cfg.tol = args.tol;

  const SolveReport plain = SolveSdaScalar(args.a, args.q, cfg);
  const double x_plus = std::abs(args.a);

  // Error-based count, independent of the residual stopping rule.
  SolverConfig long_cfg = cfg;
  long_cfg.max_iter = 50;
  long_cfg.min_iter = 50;
  long_cfg.record_iterates = true;
  const SolveReport traced = SolveSdaScalar(args.a, args.q, long_cfg);
  int to_error = -1;
  for (const IterateSnapshot& snap : traced.iterates) {
    if (std::abs(snap.X(0, 0) - x_plus) <= args.tol) {
      to_error = snap.k;
      break;
    }
  }
  out << fmt::format(
      "plain SDA: status={} stopping-rule iterations={} |x-x+|={:.3e}; "
      "iterations to |x-x+|<={:.0e}: {}\n",
      SolveStatusName(plain.status), plain.iterations,
      std::abs(plain.X(0, 0) - x_plus), args.tol,
      to_error >= 0 ? std::to_string(to_error) : "not reached");

  const ScalarShiftResult shifted =
      SolveScalarShifted(args.a, args.q, args.schedule, cfg);
  for (const ScalarShiftStep& step : shifted.per_r) {
    out << fmt::format(
        "shifted r={}: iterations={} x_hat={} |x_hat-a/r|={:.3e}\n",
        io::FormatNumber(step.r), step.iterations, io::FormatNumber(step.x_hat),
        std::abs(step.x_hat - x_plus / step.r));
  }
  out << fmt::format("shifted pipeline: x_plus={} |x-x+|={:.3e}\n",
                     io::FormatNumber(shifted.x_plus),
                     std::abs(shifted.x_plus - x_plus));
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Maximal solution of X + AᵀX⁻¹A = Q: solvers, benchmarks and "
               "eigenvalue shifting"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Solve a problem JSON file");
  solve->add_option("problem", solve_args.problem, "Problem JSON")->required();
  solve->add_option("--algorithm", solve_args.algorithm,
                    "fixed-point | inversion-free | newton | sda");
  solve->add_option("--tol", solve_args.tol, "Relative residual tolerance");
  solve->add_option("--max-iter", solve_args.max_iter, "Iteration cap");
  solve->add_option("--history", solve_args.history, "History CSV path");
  solve->add_option("--out", solve_args.out, "Report JSON path (default stdout)");

  GenerateArgs gen_args;
  auto* generate = app.add_subcommand("generate", "Generate a test problem");
  generate->add_option("--n", gen_args.spec.n, "Dimension")->required();
  generate->add_option("--rho", gen_args.spec.rho_target, "ρ(X₊⁻¹A)")->required();
  generate->add_option("--seed", gen_args.spec.seed, "Random seed");
  generate->add_option("--conditioning", gen_args.spec.conditioning,
                       "Eigenvalue spread of X₊");
  generate->add_option("--out", gen_args.out, "Output path (default stdout)");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Compare all solvers over ρ");
  bench->add_option("--rho", bench_args.rhos, "Comma separated ρ values")
      ->delimiter(',');
  bench->add_option("--n", bench_args.n, "Dimension");
  bench->add_option("--seed", bench_args.seed, "Random seed");
  bench->add_option("--conditioning", bench_args.conditioning,
                    "Eigenvalue spread of X₊");
  bench->add_option("--tol", bench_args.tol, "Relative residual tolerance");
  bench->add_option("--max-iter", bench_args.max_iter, "Iteration cap");
  bench->add_option("--out", bench_args.out, "CSV path (default stdout)");

  VerifyShiftArgs shift_args;
  auto* verify = app.add_subcommand("verify-shift",
                                    "Apply a shift and print both spectra");
  verify->add_option("--pencil", shift_args.pencil, "Pencil JSON")->required();
  verify->add_option("--spec", shift_args.spec, "Shift spec JSON")->required();
  verify->add_option("--before", shift_args.before, "CSV path for the input spectrum");
  verify->add_option("--after", shift_args.after, "CSV path for the shifted spectrum");

  ScalarCriticalArgs scalar_args;
  auto* scalar = app.add_subcommand(
      "scalar-critical", "Plain SDA against the shifted pipeline, n = 1");
  scalar->add_option("--a", scalar_args.a, "a");
  scalar->add_option("--q", scalar_args.q, "q");
  scalar->add_option("--schedule", scalar_args.schedule, "r values")
      ->delimiter(',');
  scalar->add_option("--tol", scalar_args.tol, "Tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*solve) return RunSolve(solve_args, out, err);
    if (*generate) return RunGenerate(gen_args, out);
    if (*bench) return RunBench(bench_args, out);
    if (*verify) return RunVerifyShift(shift_args, out, err);
    if (*scalar) return RunScalarCritical(scalar_args, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitInput;
}

}  // namespace nme
