#include "nme/io.h"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "nme/error.h"

namespace nme::io {

namespace {

using json = nlohmann::json;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;

json Parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
}

const json& Field(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw Error(ErrorCode::kParse, std::string("missing key \"") + key + "\"");
  }
  return doc.at(key);
}

int PositiveInt(const json& doc, const char* key) {
  const json& v = Field(doc, key);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw Error(ErrorCode::kParse,
                std::string("\"") + key + "\" must be a positive integer");
  }
  return v.get<int>();
}

std::vector<double> NumberArray(const json& doc, const char* key,
                                size_t expected) {
  const json& v = Field(doc, key);
  if (!v.is_array() || v.size() != expected) {
    throw Error(ErrorCode::kParse, std::string("\"") + key + "\" must hold " +
                                       std::to_string(expected) + " numbers");
  }
  std::vector<double> out;
  out.reserve(expected);
  for (const json& x : v) {
    if (!x.is_number()) {
      throw Error(ErrorCode::kParse, std::string("\"") + key + "\" has a non-number");
    }
    const double d = x.get<double>();
    if (!std::isfinite(d)) {
      throw Error(ErrorCode::kParse, std::string("\"") + key + "\" has NaN/Inf");
    }
    out.push_back(d);
  }
  return out;
}

MatrixXd RowMajor(const std::vector<double>& values, int rows, int cols) {
  MatrixXd M(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) M(i, j) = values[i * cols + j];
  }
  return M;
}

MatrixXcd RowMajorComplex(const std::vector<double>& values, int rows,
                          int cols) {
  MatrixXcd M(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const size_t at = 2 * static_cast<size_t>(i * cols + j);
      M(i, j) = {values[at], values[at + 1]};
    }
  }
  return M;
}

std::string NumberList(const MatrixXd& M) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (i + j > 0) out += ", ";
      out += FormatNumber(M(i, j));
    }
  }
  return out + "]";
}

std::string ComplexList(const MatrixXcd& M) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (i + j > 0) out += ", ";
      out += FormatNumber(M(i, j).real()) + ", " + FormatNumber(M(i, j).imag());
    }
  }
  return out + "]";
}

std::string NumberOrNull(double value) {
  return std::isfinite(value) ? FormatNumber(value) : "null";
}

std::string CsvNumber(double value) {
  return std::isfinite(value) ? FormatNumber(value) : "nan";
}

std::string Quoted(std::string_view s) { return json(std::string(s)).dump(); }

}  // namespace

std::string FormatNumber(double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::kNonFinite, "cannot format a non-finite number");
  }
  if (value == 0.0) return "0";
  return fmt::format("{:.17g}", value);
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

NmeProblem ParseProblemJson(const std::string& text) {
  const json doc = Parse(text);
  const int n = PositiveInt(doc, "n");
  const size_t count = static_cast<size_t>(n) * static_cast<size_t>(n);
  const MatrixXd A = RowMajor(NumberArray(doc, "A", count), n, n);
  const MatrixXd Q = RowMajor(NumberArray(doc, "Q", count), n, n);
  return MakeProblem(A, Q);
}

std::string ProblemJson(const NmeProblem& problem) {
  return fmt::format("{{\"n\": {}, \"A\": {}, \"Q\": {}}}\n", problem.n(),
                     NumberList(problem.A()), NumberList(problem.Q()));
}

std::string ProblemJson(const ExperimentRecord& rec) {
  std::string out = fmt::format("{{\"n\": {}, \"A\": {}, \"Q\": {}",
                                rec.problem.n(), NumberList(rec.problem.A()),
                                NumberList(rec.problem.Q()));
  if (rec.known_solution) {
    out += ", \"known_solution\": " + NumberList(*rec.known_solution);
  }
  if (rec.generator) {
    out += fmt::format(
        ", \"generator\": {{\"rho_target\": {}, \"seed\": {}, "
        "\"conditioning\": {}}}",
        FormatNumber(rec.generator->rho_target), rec.generator->seed,
        FormatNumber(rec.generator->conditioning));
  }
  return out + "}\n";
}

std::string ReportJson(const SolveReport& report) {
  std::string rate = "null";
  if (report.estimated_rate) {
    rate = fmt::format("{{\"kind\": {}, \"rate\": {}}}",
                       Quoted(RateKindName(report.estimated_rate->kind)),
                       report.estimated_rate->rate
                           ? FormatNumber(*report.estimated_rate->rate)
                           : "null");
  }
  std::string x = "null";
  if (report.X.size() > 0 && report.X.allFinite()) x = NumberList(report.X);
  return fmt::format(
      "{{\"algorithm\": {}, \"status\": {}, \"converged\": {}, "
      "\"iterations\": {}, \"final_rel_residual\": {}, \"rho_ratio\": {}, "
      "\"estimated_rate\": {}, \"order_relations_hold\": {}, \"message\": {}, "
      "\"n\": {}, \"X\": {}}}\n",
      Quoted(AlgorithmName(report.algorithm)),
      Quoted(SolveStatusName(report.status)),
      report.converged ? "true" : "false", report.iterations,
      NumberOrNull(report.final_rel_residual), NumberOrNull(report.rho_ratio),
      rate, report.order_relations_hold ? "true" : "false",
      Quoted(report.message), report.X.rows(), x);
}

void WriteHistoryCsv(std::ostream& out, const SolveReport& report) {
  out << "k,rel_residual,step_norm,aux1,aux2\n";
  for (const IterationRecord& rec : report.history) {
    out << rec.k << ',' << CsvNumber(rec.rel_residual) << ','
        << CsvNumber(rec.step_norm) << ',' << CsvNumber(rec.aux1) << ','
        << CsvNumber(rec.aux2) << '\n';
  }
}

SymplecticPencil ParsePencilJson(const std::string& text) {
  const json doc = Parse(text);
  const int dim = PositiveInt(doc, "dim");
  if (dim % 2 != 0) {
    throw Error(ErrorCode::kOddDimension, "pencil dimension must be even");
  }
  const size_t count = 2 * static_cast<size_t>(dim) * static_cast<size_t>(dim);
  SymplecticPencil pen;
  pen.M = RowMajorComplex(NumberArray(doc, "M", count), dim, dim);
  pen.L = RowMajorComplex(NumberArray(doc, "L", count), dim, dim);
  pen.form = PencilForm::kGeneral;
  return pen;
}

std::string PencilJson(const SymplecticPencil& pen) {
  return fmt::format("{{\"dim\": {}, \"M\": {}, \"L\": {}}}\n", pen.dim(),
                     ComplexList(pen.M), ComplexList(pen.L));
}

ShiftSpec ParseShiftSpecJson(const std::string& text, int dim) {
  const json doc = Parse(text);
  const int k = PositiveInt(doc, "k");
  const size_t block = 2 * static_cast<size_t>(dim) * static_cast<size_t>(k);
  const MatrixXcd V = RowMajorComplex(NumberArray(doc, "V", block), dim, k);
  const Eigen::VectorXcd lambda =
      RowMajorComplex(NumberArray(doc, "lambda", 2 * k), k, 1);
  const Eigen::VectorXcd lambda_hat =
      RowMajorComplex(NumberArray(doc, "lambda_hat", 2 * k), k, 1);
  if (!doc.contains("R1")) {
    if (doc.contains("R2")) {
      throw Error(ErrorCode::kParse, "\"R2\" given without \"R1\"");
    }
    return BuildShiftFactors(V, lambda, lambda_hat);
  }
  ShiftSpec spec;
  spec.V = V;
  spec.lambda = lambda;
  spec.lambda_hat = lambda_hat;
  spec.R1 = RowMajorComplex(NumberArray(doc, "R1", block), dim, k);
  spec.R2 = doc.contains("R2")
                ? RowMajorComplex(NumberArray(doc, "R2", block), dim, k)
                : MatrixXcd::Zero(dim, k);
  return spec;
}

void WriteSpectrumCsv(std::ostream& out,
                      const std::vector<SpectrumPoint>& points) {
  out << "re,im,moved\n";
  for (const SpectrumPoint& p : points) {
    out << FormatNumber(p.value.real()) << ',' << FormatNumber(p.value.imag())
        << ',' << (p.moved ? 1 : 0) << '\n';
  }
}

}  // namespace nme::io
