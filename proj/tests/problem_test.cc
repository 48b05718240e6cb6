#include "nme/problem.h"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "nme/error.h"

namespace nme {
namespace {

using Eigen::MatrixXd;

MatrixXd Scalar(double v) { return MatrixXd::Constant(1, 1, v); }

template <typename F>
void ExpectCode(F&& f, ErrorCode code) {
  try {
    f();
    ADD_FAILURE() << "expected " << ErrorCodeName(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

TEST(MakeProblemTest, AcceptsScalars) {
  EXPECT_EQ(MakeProblem(Scalar(0), Scalar(1)).n(), 1);
  const NmeProblem p = MakeProblem(Scalar(1), Scalar(2));
  EXPECT_EQ(p.A()(0, 0), 1.0);
  EXPECT_EQ(p.Q()(0, 0), 2.0);
}

TEST(MakeProblemTest, RejectsBadInput) {
  ExpectCode([] { MakeProblem(Scalar(1), Scalar(-1)); },
             ErrorCode::kNotPositiveDefinite);
  ExpectCode([] { MakeProblem(MatrixXd::Zero(2, 2), MatrixXd::Identity(3, 3)); },
             ErrorCode::kDimensionMismatch);
  ExpectCode([] { MakeProblem(MatrixXd::Zero(2, 3), MatrixXd::Identity(2, 3)); },
             ErrorCode::kDimensionMismatch);
  ExpectCode([] { MakeProblem(Scalar(NAN), Scalar(1)); }, ErrorCode::kNonFinite);
  MatrixXd q(2, 2);
  q << 2, 1, 0, 2;
  ExpectCode([&] { MakeProblem(MatrixXd::Zero(2, 2), q); },
             ErrorCode::kNotSymmetric);
}

TEST(MakeProblemTest, SymmetrizesTinyAsymmetry) {
  MatrixXd q(2, 2);
  q << 2, 1, 1 + 1e-15, 2;
  const NmeProblem p = MakeProblem(MatrixXd::Zero(2, 2), q);
  EXPECT_EQ(p.Q()(0, 1), p.Q()(1, 0));
}

TEST(ResidualTest, Examples) {
  const NmeProblem zero = MakeProblem(MatrixXd::Zero(3, 3), MatrixXd::Identity(3, 3));
  const Residual r0 = ComputeResidual(zero, MatrixXd::Identity(3, 3));
  EXPECT_EQ(r0.fro_norm, 0.0);
  EXPECT_EQ(r0.rel_norm, 0.0);

  const NmeProblem crit = MakeScalarProblem(1, 2);
  EXPECT_EQ(ComputeResidual(crit, Scalar(1)).fro_norm, 0.0);
  const Residual r2 = ComputeResidual(crit, Scalar(2));
  EXPECT_DOUBLE_EQ(r2.matrix(0, 0), -0.5);
  EXPECT_DOUBLE_EQ(r2.rel_norm, 0.25);
  ExpectCode([&] { ComputeResidual(crit, Scalar(-1)); },
             ErrorCode::kNotPositiveDefinite);
}

TEST(PencilTest, ScalarBlocks) {
  const SymplecticPencil pen = BuildPencil(MakeScalarProblem(1, 2));
  Eigen::MatrixXcd m(2, 2), l(2, 2);
  m << 1, 0, 2, -1;
  l << 0, 1, 1, 0;
  EXPECT_EQ(pen.M, m);
  EXPECT_EQ(pen.L, l);
  EXPECT_EQ(pen.form, PencilForm::kSsf2);

  const SymplecticPencil zero = BuildPencil(MakeScalarProblem(0, 1));
  m << 0, 0, 1, -1;
  l << 0, 1, 0, 0;
  EXPECT_EQ(zero.M, m);
  EXPECT_EQ(zero.L, l);
}

TEST(PencilTest, SymplecticIdentity) {
  EXPECT_TRUE(IsSymplecticPencil(BuildPencil(MakeScalarProblem(1, 2)), 1e-13));
  SymplecticPencil bad;
  bad.M = Eigen::MatrixXcd::Identity(2, 2);
  bad.L = Eigen::MatrixXcd::Identity(2, 2);
  EXPECT_TRUE(IsSymplecticPencil(bad, 1e-13));
  bad.L(1, 1) = 2;
  EXPECT_FALSE(IsSymplecticPencil(bad, 1e-13));
  bad.M = Eigen::MatrixXcd::Identity(3, 3);
  bad.L = Eigen::MatrixXcd::Identity(3, 3);
  ExpectCode([&] { IsSymplecticPencil(bad, 1e-13); }, ErrorCode::kOddDimension);

  std::srand(7);
  for (int n : {2, 5}) {
    MatrixXd a = MatrixXd::Random(n, n);
    MatrixXd b = MatrixXd::Random(n, n);
    MatrixXd q = b * b.transpose() + MatrixXd::Identity(n, n);
    EXPECT_TRUE(IsSymplecticPencil(BuildPencil(MakeProblem(a, q)), 1e-13));
  }
}

TEST(PsiTest, Examples) {
  const NmeProblem crit = MakeScalarProblem(1, 2);
  for (double theta : {0.0, 0.7, 2.0, std::numbers::pi}) {
    const auto v = Psi(crit, std::polar(1.0, theta))(0, 0);
    EXPECT_NEAR(v.real(), 2 * std::cos(theta) + 2, 1e-14);
    EXPECT_NEAR(v.imag(), 0.0, 1e-14);
  }
  EXPECT_NEAR(std::abs(Psi(crit, -1.0)(0, 0)), 0.0, 1e-15);
  MatrixXd q(2, 2);
  q << 3, 1, 1, 2;
  const NmeProblem zero = MakeProblem(MatrixXd::Zero(2, 2), q);
  EXPECT_EQ(Psi(zero, {0.3, -4}).real(), q);
  ExpectCode([&] { Psi(crit, 0.0); }, ErrorCode::kZeroLambda);
}

TEST(SolvabilityTest, Examples) {
  const SolvabilityVerdict crit = CheckSolvability(MakeScalarProblem(1, 2));
  EXPECT_EQ(crit.verdict, Verdict::kSolvable);
  EXPECT_NEAR(crit.min_eig_on_circle, 0.0, 1e-12);
  EXPECT_NEAR(crit.argmin_theta, std::numbers::pi, 1e-12);
  EXPECT_EQ(crit.samples, 512);

  const SolvabilityVerdict bad = CheckSolvability(MakeScalarProblem(1, 1));
  EXPECT_EQ(bad.verdict, Verdict::kNotSolvable);
  EXPECT_NEAR(bad.min_eig_on_circle, -1.0, 1e-12);

  const NmeProblem zero = MakeProblem(MatrixXd::Zero(2, 2), MatrixXd::Identity(2, 2));
  EXPECT_EQ(CheckSolvability(zero).verdict, Verdict::kSolvable);
}

TEST(DiagnosticsTest, SpectralRadiusRatio) {
  EXPECT_DOUBLE_EQ(SpectralRadiusRatio(MakeScalarProblem(1, 2), Scalar(1)), 1.0);
  const NmeProblem zero = MakeProblem(MatrixXd::Zero(2, 2), MatrixXd::Identity(2, 2));
  EXPECT_EQ(SpectralRadiusRatio(zero, 3 * MatrixXd::Identity(2, 2)), 0.0);
  const NmeProblem shifted = MakeScalarProblem(1, 0.9 + 1 / 0.9);
  EXPECT_NEAR(SpectralRadiusRatio(shifted, Scalar(1 / 0.9)), 0.9, 1e-15);
}

TEST(DiagnosticsTest, InvariantSubspaceDefect) {
  const NmeProblem crit = MakeScalarProblem(1, 2);
  EXPECT_NEAR(InvariantSubspaceDefect(crit, Scalar(1)), 0.0, 1e-15);
  EXPECT_NEAR(InvariantSubspaceDefect(crit, Scalar(2)), 0.5, 1e-15);
  MatrixXd q(2, 2);
  q << 3, 1, 1, 2;
  const NmeProblem zero = MakeProblem(MatrixXd::Zero(2, 2), q);
  EXPECT_NEAR(InvariantSubspaceDefect(zero, q), 0.0, 1e-15);
}

TEST(DiagnosticsTest, SkewJ) {
  const MatrixXd j = SkewJ(2);
  EXPECT_EQ(j * j, -MatrixXd::Identity(4, 4));
  EXPECT_EQ(j.transpose(), -j);
}

}  // namespace
}  // namespace nme
