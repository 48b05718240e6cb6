#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "nme/harness.h"
#include "nme/problem.h"
#include "nme/shifting.h"
#include "nme/solvers.h"

// File formats. Numbers are written with 17 significant digits, `.` as the
// decimal separator and LF line endings. Readers throw Error(kParse).
namespace nme::io {

/// 17 significant digits; -0 is written as 0. Throws NonFinite.
std::string FormatNumber(double value);

std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, const std::string& text);

/// {"n": int, "A": [n·n row-major], "Q": [n·n row-major]}. Extra keys are
/// ignored. Rejects non-finite entries.
NmeProblem ParseProblemJson(const std::string& text);

/// Problem JSON; adds "known_solution" and generator metadata when present.
std::string ProblemJson(const NmeProblem& problem);
std::string ProblemJson(const ExperimentRecord& rec);

std::string ReportJson(const SolveReport& report);

/// Header `k,rel_residual,step_norm,aux1,aux2`.
void WriteHistoryCsv(std::ostream& out, const SolveReport& report);

/// {"dim": 2n, "M": [...], "L": [...]} with interleaved re/im, row-major.
SymplecticPencil ParsePencilJson(const std::string& text);
std::string PencilJson(const SymplecticPencil& pen);

/// {"k": k, "V": [2n·k interleaved, row-major], "lambda": [2k],
///  "lambda_hat": [2k], optional "R1", "R2" like V}. Without R1 the factors
/// come from BuildShiftFactors.
ShiftSpec ParseShiftSpecJson(const std::string& text, int dim);

struct SpectrumPoint {
  std::complex<double> value;
  bool moved = false;
};

/// Header `re,im,moved`.
void WriteSpectrumCsv(std::ostream& out, const std::vector<SpectrumPoint>& points);

}  // namespace nme::io
