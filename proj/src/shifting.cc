#include "nme/shifting.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "nme/error.h"
#include "nme/linalg.h"
#include "nme/log.h"

namespace nme {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

constexpr double kEigenpairTol = 1e-8;
constexpr double kFactorTol = 1e-10;
constexpr double kRealifyTol = 1e-10;

bool IsReal(const MatrixXcd& X) { return (X.imag().array() == 0.0).all(); }

bool NearlyEqual(Complex x, Complex y) {
  return std::abs(x - y) <= 1e-12 * (1.0 + std::max(std::abs(x), std::abs(y)));
}

bool IsNonReal(Complex z) { return std::abs(z.imag()) > 1e-12 * (1.0 + std::abs(z)); }

// Drops imaginary parts when the whole pencil is numerically real.
void Realify(SymplecticPencil& pen) {
  const double scale = pen.M.norm() + pen.L.norm();
  const double limit = kRealifyTol * scale;
  const bool numerically_real = pen.M.imag().cwiseAbs().maxCoeff() <= limit &&
                                pen.L.imag().cwiseAbs().maxCoeff() <= limit;
  if (numerically_real) {
    pen.M = pen.M.real().cast<Complex>();
    pen.L = pen.L.real().cast<Complex>();
  }
}

void CheckPencil(const SymplecticPencil& pen) {
  const auto dim = pen.M.rows();
  if (pen.M.cols() != dim || pen.L.rows() != dim || pen.L.cols() != dim) {
    throw Error(ErrorCode::kDimensionMismatch, "M and L must be square");
  }
  if (dim % 2 != 0) {
    throw Error(ErrorCode::kOddDimension, "pencil dimension must be even");
  }
}

void CheckConjugateClosure(const ShiftSpec& spec) {
  const int k = spec.k();
  for (int i = 0; i < k; ++i) {
    if (!IsNonReal(spec.lambda(i)) && !IsNonReal(spec.lambda_hat(i))) continue;
    bool found = false;
    for (int j = 0; j < k && !found; ++j) {
      found = NearlyEqual(spec.lambda(j), std::conj(spec.lambda(i))) &&
              NearlyEqual(spec.lambda_hat(j), std::conj(spec.lambda_hat(i)));
    }
    if (!found) {
      throw Error(ErrorCode::kConjugateClosureViolated,
                  "shift " + std::to_string(i) +
                      " has no conjugate partner; a real pencil would "
                      "become complex",
                  i);
    }
  }
}

// Greedy multiset check that spectrum ∖ Λ ∪ Λ̂ stays closed under λ ↦ 1/λ.
void WarnIfReciprocalPairingBreaks(const SymplecticPencil& pen,
                                   const ShiftSpec& spec) {
  if (!IsSymplecticPencil(pen, 1e-10)) return;
  std::vector<Complex> values =
      linalg::ComputeGeneralizedEigen(pen.M, pen.L, false).FiniteValues();
  for (int i = 0; i < spec.k(); ++i) {
    auto it = std::min_element(values.begin(), values.end(),
                               [&](Complex x, Complex y) {
                                 return std::abs(x - spec.lambda(i)) <
                                        std::abs(y - spec.lambda(i));
                               });
    if (it != values.end()) values.erase(it);
    values.push_back(spec.lambda_hat(i));
  }
  std::vector<bool> used(values.size(), false);
  for (size_t i = 0; i < values.size(); ++i) {
    if (used[i] || std::abs(values[i]) < 1e-12) continue;
    const Complex inv = 1.0 / values[i];
    bool matched = false;
    for (size_t j = 0; j < values.size() && !matched; ++j) {
      if (j == i || used[j]) continue;
      if (std::abs(values[j] - inv) <= 1e-6 * (1.0 + std::abs(inv))) {
        used[i] = used[j] = true;
        matched = true;
      }
    }
    if (!matched && std::abs(std::abs(values[i]) - 1.0) > 1e-6) {
      Log().warn("shift targets break reciprocal pairing near {}+{}i",
                 values[i].real(), values[i].imag());
      return;
    }
  }
}

}  // namespace

double EigenpairResidual(const SymplecticPencil& pen,
                         const Eigen::Ref<const VectorXcd>& v, Complex lambda) {
  const double scale =
      (pen.M.norm() + std::abs(lambda) * pen.L.norm()) * v.norm();
  if (scale == 0.0) return 0.0;
  return (pen.M * v - lambda * (pen.L * v)).norm() / scale;
}

void ValidateShiftSpec(const ShiftSpec& spec) {
  const auto dim = spec.V.rows();
  const auto k = spec.V.cols();
  if (spec.lambda.size() != k || spec.lambda_hat.size() != k ||
      spec.R1.rows() != dim || spec.R1.cols() != k || spec.R2.rows() != dim ||
      spec.R2.cols() != k) {
    throw Error(ErrorCode::kDimensionMismatch, "inconsistent shift spec sizes");
  }
  const MatrixXcd D = (spec.lambda_hat - spec.lambda).asDiagonal();
  const double r1_defect = (spec.R1.transpose() * spec.V - D).norm();
  if (r1_defect > kFactorTol * (1.0 + D.norm())) {
    throw Error(ErrorCode::kSpecInvariantViolated,
                "R1ᵀV differs from Λ̂ - Λ by " + std::to_string(r1_defect));
  }
  const double r2_defect = (spec.R2.transpose() * spec.V).norm();
  if (r2_defect > kFactorTol * spec.R2.norm() * spec.V.norm()) {
    throw Error(ErrorCode::kSpecInvariantViolated,
                "R2ᵀV is not zero: " + std::to_string(r2_defect));
  }
}

SymplecticPencil ShiftSingle(const SymplecticPencil& pen,
                             const Eigen::Ref<const VectorXcd>& v,
                             Complex lambda0, Complex lambda1,
                             const Eigen::Ref<const VectorXcd>& r) {
  CheckPencil(pen);
  if (v.size() != pen.dim() || r.size() != pen.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "v and r must match the pencil");
  }
  if (v.norm() == 0.0 || EigenpairResidual(pen, v, lambda0) > kEigenpairTol) {
    throw Error(ErrorCode::kNotAnEigenpair, "Mv != λ0 Lv");
  }
  const Complex rv = (r.array() * v.array()).sum();
  if (std::abs(rv - 1.0) > kFactorTol) {
    throw Error(ErrorCode::kNotNormalized, "rᵀv must equal 1");
  }
  if (lambda1 == lambda0) return pen;

  SymplecticPencil out;
  out.M = pen.M + (lambda1 - lambda0) * (pen.L * v) * r.transpose();
  out.L = pen.L;
  out.form = PencilForm::kGeneral;
  Realify(out);
  return out;
}

SymplecticPencil ShiftMulti(const SymplecticPencil& pen, const ShiftSpec& spec) {
  CheckPencil(pen);
  if (spec.V.rows() != pen.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "V must have 2n rows");
  }
  ValidateShiftSpec(spec);
  const int k = spec.k();
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      if (NearlyEqual(spec.lambda(i), spec.lambda(j))) {
        throw Error(ErrorCode::kRepeatedEigenvalue,
                    "Λ entries " + std::to_string(i) + " and " +
                        std::to_string(j) + " coincide",
                    j);
      }
    }
  }
  for (int i = 0; i < k; ++i) {
    if (spec.V.col(i).norm() == 0.0 ||
        EigenpairResidual(pen, spec.V.col(i), spec.lambda(i)) > kEigenpairTol) {
      throw Error(ErrorCode::kNotAnEigenpair,
                  "column " + std::to_string(i) + " of V", i);
    }
  }
  if (IsReal(pen.M) && IsReal(pen.L)) CheckConjugateClosure(spec);
  WarnIfReciprocalPairingBreaks(pen, spec);

  const bool r1_zero = (spec.R1.array() == Complex(0.0)).all();
  const bool r2_zero = (spec.R2.array() == Complex(0.0)).all();
  if (r1_zero && r2_zero) return pen;

  SymplecticPencil out;
  out.M = pen.M + pen.L * spec.V * spec.R1.transpose();
  out.L = pen.L + pen.M * spec.V * spec.R2.transpose();
  out.form = PencilForm::kGeneral;
  Realify(out);
  return out;
}

ShiftSpec BuildShiftFactors(const Eigen::Ref<const MatrixXcd>& V,
                            const Eigen::Ref<const VectorXcd>& lambda,
                            const Eigen::Ref<const VectorXcd>& lambda_hat) {
  const auto k = V.cols();
  if (k == 0 || lambda.size() != k || lambda_hat.size() != k) {
    throw Error(ErrorCode::kDimensionMismatch,
                "V, Λ and Λ̂ must describe the same k >= 1 shifts");
  }
  Eigen::JacobiSVD<MatrixXcd> svd(V);
  const auto& s = svd.singularValues();
  if (!(s(k - 1) >= 1e-10 * s(0))) {
    throw Error(ErrorCode::kRankDeficientV, "V lacks full column rank");
  }
  ShiftSpec spec;
  spec.V = V;
  spec.lambda = lambda;
  spec.lambda_hat = lambda_hat;
  const MatrixXcd D = (lambda_hat - lambda).asDiagonal();
  const MatrixXcd gram = V.adjoint() * V;
  const MatrixXcd r1t = D * gram.ldlt().solve(V.adjoint());
  spec.R1 = r1t.transpose();
  spec.R2 = MatrixXcd::Zero(V.rows(), k);
  ValidateShiftSpec(spec);
  return spec;
}

UnimodularReport DetectUnimodular(const SymplecticPencil& pen, double tol) {
  CheckPencil(pen);
  if (!(tol > 0.0 && tol < 0.5)) {
    throw Error(ErrorCode::kInvalidArgument, "tol must lie in (0, 0.5)");
  }
  UnimodularReport report;
  report.tol = tol;
  std::vector<Complex> values =
      linalg::ComputeGeneralizedEigen(pen.M, pen.L, false).FiniteValues();
  std::sort(values.begin(), values.end(), [](Complex x, Complex y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });

  // A multiple eigenvalue comes back as a cluster of width ~eps^(1/m).
  std::vector<std::vector<Complex>> clusters;
  for (Complex z : values) {
    bool placed = false;
    for (auto& c : clusters) {
      if (std::abs(c.front() - z) <= 1e-6 * (1.0 + std::abs(z))) {
        c.push_back(z);
        placed = true;
        break;
      }
    }
    if (!placed) clusters.push_back({z});
  }

  const int dim = pen.dim();
  for (const auto& c : clusters) {
    Complex lambda = 0.0;
    for (Complex z : c) lambda += z;
    lambda /= static_cast<double>(c.size());
    if (std::abs(1.0 - std::abs(lambda)) > tol) continue;

    const MatrixXcd shifted = pen.M - lambda * pen.L;
    Eigen::JacobiSVD<MatrixXcd> svd(shifted, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    int g = 0;
    for (int i = dim - 1; i >= 0 && g < static_cast<int>(c.size()); --i) {
      if (s(i) <= 1e-7 * std::max(s(0), 1.0)) ++g;
    }
    g = std::max(g, 1);
    MatrixXcd vectors = svd.matrixV().rightCols(g);

    // One inverse-iteration step with a slightly perturbed shift.
    const Complex sigma = lambda + 1e-10 * (1.0 + std::abs(lambda));
    Eigen::PartialPivLU<MatrixXcd> lu(pen.M - sigma * pen.L);
    for (int j = 0; j < g; ++j) {
      VectorXcd w = lu.solve(pen.L * vectors.col(j));
      if (w.allFinite() && w.norm() > 0.0) vectors.col(j) = w.normalized();
    }
    if (g > 1) {
      Eigen::HouseholderQR<MatrixXcd> qr(vectors);
      vectors = qr.householderQ() * MatrixXcd::Identity(dim, g);
    }
    if (c.size() == 1) {
      const VectorXcd lv = pen.L * vectors.col(0);
      const Complex denom = lv.squaredNorm();
      if (std::abs(denom) > 0.0) {
        lambda = lv.dot(pen.M * vectors.col(0)) / denom;
      }
    }
    for (int j = 0; j < g; ++j) {
      if (EigenpairResidual(pen, vectors.col(j), lambda) > kEigenpairTol) {
        Log().warn("unimodular eigenvector residual above 1e-8 at {}+{}i",
                   lambda.real(), lambda.imag());
      }
    }
    report.eigenvalues.push_back(
        {lambda, static_cast<int>(c.size()), std::move(vectors)});
  }
  return report;
}

ShiftedScalarProblem MakeShiftedScalarProblem(double a, double r) {
  if (a == 0.0 || !std::isfinite(a)) {
    throw Error(ErrorCode::kInvalidArgument, "a must be a nonzero number");
  }
  if (!(r > 0.0 && r < 1.0)) {
    throw Error(ErrorCode::kInvalidR, "r must lie in (0, 1)");
  }
  return {a, a * (r + 1.0 / r)};
}

ScalarShiftResult SolveScalarShifted(double a, double q,
                                     const std::vector<double>& r_schedule,
                                     const SolverConfig& cfg) {
  if (!(q > 0.0) || !std::isfinite(a)) {
    throw Error(ErrorCode::kInvalidArgument, "need finite a and q > 0");
  }
  const double abs_a = std::abs(a);
  if (std::abs(q - 2.0 * abs_a) > 1e-8 * std::abs(q)) {
    throw Error(ErrorCode::kNotCriticalCase,
                "q^2 - 4a^2 != 0; use a direct solver");
  }
  if (r_schedule.empty()) {
    throw Error(ErrorCode::kInvalidR, "empty r schedule");
  }
  for (size_t i = 0; i < r_schedule.size(); ++i) {
    const double r = r_schedule[i];
    if (!(r > 0.0 && r < 1.0) || (i > 0 && !(r > r_schedule[i - 1]))) {
      throw Error(ErrorCode::kInvalidR,
                  "schedule must increase strictly inside (0, 1)");
    }
  }

  ScalarShiftResult result;
  for (double r : r_schedule) {
    const ShiftedScalarProblem shifted = MakeShiftedScalarProblem(abs_a, r);
    const SolveReport rep = SolveSdaScalar(shifted.a, shifted.q, cfg);
    if (rep.status == SolveStatus::kDoublingBreakdown) {
      throw Error(ErrorCode::kDoublingBreakdown,
                  "scalar SDA broke down at r = " + std::to_string(r),
                  rep.failure_iteration);
    }
    if (!rep.converged) {
      Log().warn("shifted solve at r = {} ended with {}", r,
                 SolveStatusName(rep.status));
    }
    // The residual is roughly the squared error near r = 1, so take a couple
    // more doublings before using x̂ in the extrapolation.
    SolverConfig polish = cfg;
    polish.min_iter = rep.iterations + 2;
    polish.max_iter = std::max(cfg.max_iter, polish.min_iter);
    polish.record_history = false;
    polish.record_iterates = false;
    const SolveReport fine = SolveSdaScalar(shifted.a, shifted.q, polish);
    const double x_hat =
        fine.status == SolveStatus::kDoublingBreakdown ? rep.X(0, 0) : fine.X(0, 0);
    result.per_r.push_back({r, x_hat, rep.iterations, rep.status});
  }

  // r·x̂(r) → |a| as r → 1⁻; linear extrapolation through the last two points.
  const auto& last = result.per_r.back();
  const double p_last = last.r * last.x_hat;
  if (result.per_r.size() == 1) {
    result.x_plus = p_last;
  } else {
    const auto& prev = result.per_r[result.per_r.size() - 2];
    const double p_prev = prev.r * prev.x_hat;
    result.x_plus =
        p_last + (p_last - p_prev) * (1.0 - last.r) / (last.r - prev.r);
  }
  return result;
}

}  // namespace nme
