#include "nme/solvers.h"

#include <cmath>

#include <gtest/gtest.h>

#include "nme/error.h"
#include "nme/harness.h"
#include "nme/linalg.h"

namespace nme {
namespace {

using Eigen::MatrixXd;

// Scalar oracle for the maximal solution.
double XPlus(double a, double q) { return (q + std::sqrt(q * q - 4 * a * a)) / 2; }

SolverConfig Config(Algorithm algorithm, int max_iter = 200) {
  SolverConfig cfg;
  cfg.algorithm = algorithm;
  cfg.max_iter = max_iter;
  return cfg;
}

TEST(ConfigTest, Validation) {
  SolverConfig cfg;
  EXPECT_NO_THROW(ValidateConfig(cfg));
  cfg.tol = 0;
  EXPECT_THROW(ValidateConfig(cfg), Error);
  cfg = {};
  cfg.max_iter = 0;
  EXPECT_THROW(ValidateConfig(cfg), Error);
  cfg = {};
  cfg.min_iter = cfg.max_iter + 1;
  EXPECT_THROW(ValidateConfig(cfg), Error);
}

TEST(ConfigTest, AlgorithmNames) {
  for (Algorithm a : kAllAlgorithms) {
    EXPECT_EQ(ParseAlgorithm(AlgorithmName(a)), a);
  }
  EXPECT_FALSE(ParseAlgorithm("bisection").has_value());
}

TEST(SolversTest, ZeroA) {
  MatrixXd q(2, 2);
  q << 2, 0.5, 0.5, 2;
  const NmeProblem p = MakeProblem(MatrixXd::Zero(2, 2), q);
  for (Algorithm alg : kAllAlgorithms) {
    const SolveReport r = Solve(p, Config(alg));
    EXPECT_TRUE(r.converged) << AlgorithmName(alg);
    EXPECT_LE(r.iterations, 1) << AlgorithmName(alg);
    EXPECT_LT((r.X - q).norm(), 1e-15) << AlgorithmName(alg);
  }
  EXPECT_EQ(SolveSda(p, Config(Algorithm::kSda)).iterations, 0);
  EXPECT_EQ(SolveFixedPoint(p, Config(Algorithm::kFixedPoint)).iterations, 1);
  EXPECT_EQ(SolveNewton(p, Config(Algorithm::kNewton)).iterations, 1);
}

TEST(SolversTest, InversionFreeZeroAYAscends) {
  const NmeProblem p = MakeProblem(MatrixXd::Zero(2, 2), 2 * MatrixXd::Identity(2, 2));
  SolverConfig cfg = Config(Algorithm::kInversionFree);
  cfg.record_iterates = true;
  cfg.min_iter = 8;
  const SolveReport r = SolveInversionFree(p, cfg);
  EXPECT_TRUE(r.converged);
  ASSERT_GE(r.iterates.size(), 9u);
  EXPECT_EQ(r.iterates[1].X, p.Q());
  for (size_t k = 1; k < r.iterates.size(); ++k) {
    EXPECT_GE(linalg::MinEigenvalue(r.iterates[k].Y - r.iterates[k - 1].Y), 0.0);
    EXPECT_LE(r.iterates[k].Y(0, 0), 0.5 + 1e-15);
  }
  EXPECT_NEAR(r.iterates.back().Y(0, 0), 0.5, 1e-12);
}

TEST(SolversTest, NoncriticalScalarAgreement) {
  const NmeProblem p = MakeScalarProblem(0.5, 2);
  const double x = XPlus(0.5, 2);
  EXPECT_NEAR(x, 1 + std::sqrt(3.0) / 2, 1e-15);
  const SolveReport fp = SolveFixedPoint(p, Config(Algorithm::kFixedPoint));
  const SolveReport inv = SolveInversionFree(p, Config(Algorithm::kInversionFree));
  const SolveReport nt = SolveNewton(p, Config(Algorithm::kNewton));
  const SolveReport sda = SolveSda(p, Config(Algorithm::kSda));
  for (const SolveReport* r : {&fp, &inv, &nt, &sda}) {
    EXPECT_TRUE(r->converged) << AlgorithmName(r->algorithm);
    EXPECT_LE(r->final_rel_residual, 1e-12);
    EXPECT_NEAR(r->X(0, 0), x, 1e-10) << AlgorithmName(r->algorithm);
    EXPECT_TRUE(r->order_relations_hold || r->algorithm == Algorithm::kNewton);
  }
  EXPECT_NEAR(inv.X(0, 0), fp.X(0, 0), 1e-10);
  EXPECT_LE(sda.iterations, 7);
  // Newton: the residual roughly squares once in the quadratic regime.
  const auto& h = nt.history;
  ASSERT_GE(h.size(), 3u);
  EXPECT_LT(h[2].rel_residual, 10 * h[1].rel_residual * h[1].rel_residual);
}

TEST(FixedPointTest, CriticalIsSublinear) {
  SolverConfig cfg = Config(Algorithm::kFixedPoint);
  cfg.record_iterates = true;
  const SolveReport r = SolveFixedPoint(MakeScalarProblem(1, 2), cfg);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.status, SolveStatus::kMaxIterationsExceeded);
  for (const IterateSnapshot& s : r.iterates) {
    EXPECT_NEAR(s.X(0, 0), (s.k + 2.0) / (s.k + 1.0), 1e-13) << s.k;
  }
  EXPECT_TRUE(r.order_relations_hold);
}

TEST(FixedPointTest, RateNearRhoSquared) {
  const double a = 0.9, q = 2;
  const double rho = a / XPlus(a, q);
  const SolveReport r = SolveFixedPoint(MakeScalarProblem(a, q),
                                        Config(Algorithm::kFixedPoint, 1000));
  ASSERT_TRUE(r.converged);
  ASSERT_TRUE(r.estimated_rate->rate.has_value());
  EXPECT_NEAR(*r.estimated_rate->rate, rho * rho, 0.1 * rho * rho);
}

TEST(InversionFreeTest, NotFasterThanFixedPoint) {
  const NmeProblem p = MakeScalarProblem(0.9, 2);
  const SolveReport fp = SolveFixedPoint(p, Config(Algorithm::kFixedPoint, 1000));
  const SolveReport inv = SolveInversionFree(p, Config(Algorithm::kInversionFree, 1000));
  ASSERT_TRUE(fp.converged);
  ASSERT_TRUE(inv.converged);
  EXPECT_GE(inv.iterations, fp.iterations);
}

TEST(InversionFreeTest, ErrorCoupling) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const ExperimentRecord rec = GenerateProblem({6, 0.7, seed, 10});
    const MatrixXd& x = *rec.known_solution;
    const MatrixXd x_inv = x.inverse();
    const double a2 = std::pow(linalg::SpectralNorm(rec.problem.A()), 2);
    SolverConfig cfg = Config(Algorithm::kInversionFree, 2000);
    cfg.record_iterates = true;
    const SolveReport r = SolveInversionFree(rec.problem, cfg);
    ASSERT_TRUE(r.converged);
    const double slack = 1e-10 * rec.problem.QNorm();
    for (size_t k = 0; k < r.iterates.size(); ++k) {
      const double y_err = linalg::SpectralNorm(r.iterates[k].Y - x_inv);
      EXPECT_LE(linalg::SpectralNorm(r.iterates[k].X - x), a2 * y_err + slack) << k;
      // X_{k+1} - X₊ = -Aᵀ(Y_k - X₊⁻¹)A, so the shifted index holds exactly.
      if (k + 1 < r.iterates.size()) {
        EXPECT_LE(linalg::SpectralNorm(r.iterates[k + 1].X - x), a2 * y_err + slack) << k;
      }
    }
  }
}

TEST(NewtonTest, CriticalScalarMap) {
  SolverConfig cfg = Config(Algorithm::kNewton);
  cfg.record_iterates = true;
  // Past k ~ 26 the Stein operator 1 - l_k^2 drops below the rank threshold.
  cfg.min_iter = 20;
  cfg.max_iter = 20;
  const SolveReport r = SolveNewton(MakeScalarProblem(1, 2), cfg);
  ASSERT_EQ(r.iterates.size(), 21u);
  double x = 2;
  for (const IterateSnapshot& s : r.iterates) {
    EXPECT_NEAR(s.X(0, 0), x, 1e-14) << s.k;
    EXPECT_NEAR(s.X(0, 0) - 1, 1.0 / (std::pow(2.0, s.k + 1) - 1), 1e-14);
    x = 2 * x / (x + 1);
  }
  for (int k = 3; k < 20; ++k) {
    const double ratio = (r.iterates[k + 1].X(0, 0) - 1) / (r.iterates[k].X(0, 0) - 1);
    EXPECT_NEAR(ratio, 0.5, 0.05);
  }
}

TEST(NewtonTest, IteratesDecreaseTowardMaximalSolution) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ExperimentRecord rec = GenerateProblem({5, 0.8, seed, 10});
    SolverConfig cfg = Config(Algorithm::kNewton);
    cfg.record_iterates = true;
    const SolveReport r = SolveNewton(rec.problem, cfg);
    ASSERT_TRUE(r.converged);
    const double slack = 1e-10 * rec.problem.QNorm();
    for (size_t k = 0; k < r.iterates.size(); ++k) {
      const MatrixXd& xk = r.iterates[k].X;
      EXPECT_GE(linalg::MinEigenvalue(xk - *rec.known_solution), -slack);
      if (k + 1 < r.iterates.size()) {
        EXPECT_GE(linalg::MinEigenvalue(xk - r.iterates[k + 1].X), -slack);
      }
    }
  }
}

TEST(SdaTest, CriticalClosedForms) {
  SolverConfig cfg = Config(Algorithm::kSda);
  cfg.record_iterates = true;
  cfg.min_iter = 40;
  cfg.max_iter = 40;
  // The matrix path divides through a Cholesky factor of Q_k - P_k = 2^{1-k}
  // and loses digits; the scalar recursion stays exact.
  const std::pair<SolveReport, double> runs[] = {
      {SolveSdaScalar(1, 2, cfg), 1e-13},
      {SolveSda(MakeScalarProblem(1, 2), cfg), 1e-7}};
  for (const auto& [r, tol] : runs) {
    ASSERT_EQ(r.iterates.size(), 41u);
    for (const IterateSnapshot& s : r.iterates) {
      const double t = std::ldexp(1.0, -s.k);
      EXPECT_NEAR(s.X(0, 0), 1 + t, tol) << s.k;
      EXPECT_NEAR(s.P(0, 0), 1 - t, tol) << s.k;
      EXPECT_NEAR(s.A(0, 0), t, tol) << s.k;
    }
    EXPECT_TRUE(r.order_relations_hold);
  }
}

TEST(SdaTest, CriticalStepRateIsOneHalf) {
  const SolveReport r = SolveSdaScalar(1, 2, Config(Algorithm::kSda));
  EXPECT_TRUE(r.converged);
  ASSERT_TRUE(r.estimated_rate && r.estimated_rate->rate);
  EXPECT_NEAR(*r.estimated_rate->rate, 0.5, 0.02);
}

TEST(SdaTest, ScalarExamples) {
  const SolveReport zero = SolveSdaScalar(0, 5, Config(Algorithm::kSda));
  EXPECT_EQ(zero.iterations, 0);
  EXPECT_EQ(zero.X(0, 0), 5.0);
  const double r = 0.9;
  const SolveReport shifted = SolveSdaScalar(1, r + 1 / r, Config(Algorithm::kSda));
  EXPECT_TRUE(shifted.converged);
  EXPECT_LE(shifted.iterations, 9);
  EXPECT_NEAR(shifted.X(0, 0), 1 / r, 1e-12);
  EXPECT_THROW(SolveSdaScalar(1, -1, Config(Algorithm::kSda)), Error);
}

TEST(SdaTest, CriticalBreakdownIsReported) {
  SolverConfig cfg = Config(Algorithm::kSda);
  cfg.min_iter = 200;
  const SolveReport r = SolveSdaScalar(1, 2, cfg);
  EXPECT_EQ(r.status, SolveStatus::kDoublingBreakdown);
  EXPECT_FALSE(r.converged);
  ASSERT_TRUE(r.failure_iteration.has_value());
  EXPECT_GT(*r.failure_iteration, 40);
}

TEST(SolversTest, GeneratedProblemsAndOrderings) {
  for (int n : {2, 8}) {
    for (double rho : {0.3, 0.9}) {
      const ExperimentRecord rec = GenerateProblem({n, rho, 11, 10});
      const double slack = 1e-8 * rec.problem.QNorm();
      for (Algorithm alg : kAllAlgorithms) {
        const SolveReport r = Solve(rec.problem, Config(alg, 5000));
        EXPECT_TRUE(r.converged) << AlgorithmName(alg);
        EXPECT_LT((r.X - *rec.known_solution).norm(), slack) << AlgorithmName(alg);
        EXPECT_NEAR(r.rho_ratio, rho, 1e-6);
        if (alg != Algorithm::kNewton) EXPECT_TRUE(r.order_relations_hold);
      }
    }
  }
}

TEST(SolversTest, InputErrorsThrow) {
  SolverConfig cfg;
  cfg.tol = -1;
  EXPECT_THROW(Solve(MakeScalarProblem(1, 2), cfg), Error);
}

TEST(SteinTest, Examples) {
  MatrixXd c(2, 2);
  c << 2, 1, 1, 3;
  EXPECT_LT((SolveStein({MatrixXd::Zero(2, 2), c}) - c).norm(), 1e-15);
  EXPECT_NEAR(SolveStein({MatrixXd::Constant(1, 1, 0.5), MatrixXd::Constant(1, 1, 3)})(0, 0),
              4.0, 1e-14);
  MatrixXd l = MatrixXd::Zero(2, 2);
  l.diagonal() << 0.5, 0.2;
  const MatrixXd x = SolveStein({l, MatrixXd::Identity(2, 2)});
  EXPECT_NEAR(x(0, 0), 4.0 / 3, 1e-14);
  EXPECT_NEAR(x(1, 1), 25.0 / 24, 1e-14);
  EXPECT_NEAR(x(0, 1), 0.0, 1e-15);
}

TEST(SteinTest, RandomSatisfiesEquation) {
  std::srand(3);
  const int n = 5;
  MatrixXd l = MatrixXd::Random(n, n);
  l *= 0.9 / linalg::SpectralRadius(l);
  MatrixXd b = MatrixXd::Random(n, n);
  const MatrixXd c = b + b.transpose();
  const MatrixXd x = SolveStein({l, c});
  EXPECT_LT((x - l.transpose() * x * l - c).norm(), 1e-10 * c.norm());
  EXPECT_EQ(x, x.transpose());
}

TEST(SteinTest, Errors) {
  try {
    SolveStein({MatrixXd::Identity(2, 2), MatrixXd::Identity(2, 2)});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingularSteinOperator);
  }
  MatrixXd c(2, 2);
  c << 1, 2, 0, 1;
  EXPECT_THROW(SolveStein({MatrixXd::Zero(2, 2), c}), Error);
  EXPECT_THROW(SolveStein({MatrixXd::Zero(2, 2), MatrixXd::Identity(3, 3)}), Error);
}

}  // namespace
}  // namespace nme
