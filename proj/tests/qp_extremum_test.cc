#include "chengap/qp_extremum.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "chengap/invariants.hpp"
#include "oracles.hpp"

namespace chengap {
namespace {

std::vector<double> aGrid() {
  std::vector<double> out{-1.0};
  for (int i = -9; i <= 9; ++i) out.push_back(i / 10.0);
  return out;
}

ErrorCode codeOf(const QpProblem& p) {
  try {
    p.check();
  } catch (const GeometryError& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::ParseError;
}

TEST(QpProblem, Validation) {
  EXPECT_EQ(codeOf({3, 1.0, 2.0}), ErrorCode::AOutOfRange);
  EXPECT_EQ(codeOf({3, 1.5, 2.0}), ErrorCode::AOutOfRange);
  EXPECT_EQ(codeOf({3, -1.5, 2.0}), ErrorCode::AOutOfRange);
  EXPECT_EQ(codeOf({2, 0.0, 2.0}), ErrorCode::NotApplicable);
  EXPECT_EQ(codeOf({3, 0.0, std::nan("")}), ErrorCode::NonFinite);
  try {
    QpProblem{3, 1.0, 1.0}.check();
  } catch (const GeometryError& e) {
    EXPECT_NE(std::string(e.what()).find("limit"), std::string::npos) << e.what();
  }
  EXPECT_TRUE((QpProblem{4, -1.0, 1.0}.primeFamily()));
  EXPECT_FALSE((QpProblem{4, -0.9, 1.0}.primeFamily()));
}

TEST(QpObjective, GradientAndHessianMatchFiniteDifferences) {
  const Eigen::VectorXd h = (Eigen::VectorXd(5) << 0.3, -1.2, 2.0, 0.7, -0.4).finished();
  for (double a : {-1.0, -0.3, 0.6}) {
    const QpProblem p{5, a, h.sum()};
    EXPECT_NEAR(qpObjective(p, h), testing::quadratic(h, a), 1e-14);
    const Eigen::VectorXd g = qpGradient(p, h);
    const Eigen::MatrixXd hess = qpHessian(p);
    EXPECT_TRUE(hess.isApprox(hess.transpose(), 0.0));
    for (int i = 0; i < 5; ++i) {
      const double step = 1e-5;
      const Eigen::VectorXd e = Eigen::VectorXd::Unit(5, i) * step;
      EXPECT_NEAR(g(i), (testing::quadratic(h + e, a) - testing::quadratic(h - e, a)) / (2 * step), 1e-8);
      const Eigen::VectorXd dg = (qpGradient(p, h + e) - qpGradient(p, h - e)) / (2 * step);
      EXPECT_LE((dg - hess.col(i)).cwiseAbs().maxCoeff(), 1e-8);
    }
    EXPECT_EQ(hess(0, 1), 1.0 - a);
    EXPECT_EQ(hess(2, 2), 0.0);
  }
}

TEST(SolveClosedForm, SpotValues) {
  const QpSolution s = solveClosedForm({3, 0.5, 7.0});
  EXPECT_NEAR(s.maxValue, 14.0, 1e-12);
  EXPECT_LE((s.maximizer - Eigen::Vector3d(2, 2, 3)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(s.b, 2.0, 1e-12);
  EXPECT_TRUE(s.certified);

  const QpSolution centroid = solveClosedForm({3, 0.0, 3.0});
  EXPECT_NEAR(centroid.maxValue, 3.0, 1e-12);
  EXPECT_LE((centroid.maximizer - Eigen::Vector3d::Ones()).cwiseAbs().maxCoeff(), 1e-12);

  const QpSolution prime = solveClosedForm({3, -1.0, 2.0});
  EXPECT_NEAR(prime.maxValue, 2.0, 1e-12);
  EXPECT_LE((prime.maximizer - Eigen::Vector3d(1, 1, 0)).cwiseAbs().maxCoeff(), 1e-12);

  for (int n = 3; n <= 6; ++n) {
    for (double a : {-1.0, -0.5, 0.5}) {
      const QpSolution zero = solveClosedForm({n, a, 0.0});
      EXPECT_EQ(zero.maxValue, 0.0);
      EXPECT_EQ(zero.maximizer.cwiseAbs().maxCoeff(), 0.0);
    }
  }
}

TEST(SolveClosedForm, AgreesWithKktSolve) {
  for (int n = 3; n <= 8; ++n) {
    for (double a : aGrid()) {
      if (a == -1.0) continue;  // the KKT system is singular on the prime family
      for (double k : {-5.0, 1.0, 7.0}) {
        const QpSolution s = solveClosedForm({n, a, k});
        const Eigen::VectorXd kkt = testing::kktMaximizer(n, a, k);
        EXPECT_LE((s.maximizer - kkt).cwiseAbs().maxCoeff(), 1e-10) << n << " " << a << " " << k;
        EXPECT_NEAR(s.maxValue, testing::quadratic(kkt, a), 1e-10 * std::max(1.0, k * k));
        EXPECT_NEAR(s.maximizer.sum(), k, 1e-12 * std::max(1.0, std::abs(k)));
      }
    }
  }
}

TEST(SolveClosedForm, AgreesWithGridInDimensionThree) {
  for (double a : {-1.0, -0.5, 0.0, 0.5, 0.9}) {
    for (double k : {-5.0, 1.0, 7.0}) {
      const double grid = testing::gridMax3(a, k, 1e-3);
      const double closed = solveClosedForm({3, a, k}).maxValue;
      EXPECT_GE(closed, grid - 1e-12);
      EXPECT_LE(closed - grid, 1e-3 * std::max(1.0, k * k)) << a << " " << k;
    }
  }
}

TEST(SolveClosedForm, ScaleLaw) {
  for (int n = 3; n <= 6; ++n) {
    for (double a : aGrid()) {
      const double base = solveClosedForm({n, a, 1.7}).maxValue;
      EXPECT_EQ(solveClosedForm({n, a, 3.4}).maxValue, 4.0 * base);
      EXPECT_NEAR(solveClosedForm({n, a, -5.1}).maxValue, 9.0 * base, 1e-12 * 9.0 * std::abs(base));
    }
  }
}

TEST(SolveClosedForm, LimitStitchingAtPrimeFamily) {
  for (int n = 3; n <= 8; ++n) {
    for (double k : {-5.0, 1.0, 7.0}) {
      const double near = solveClosedForm({n, -1.0 + 1e-9, k}).maxValue;
      const double prime = solveClosedForm({n, -1.0, k}).maxValue;
      EXPECT_NEAR(near, prime, 1e-6 * std::abs(prime));
    }
  }
}

TEST(SolveClosedForm, MatchesSecondTermOfT31Bound) {
  for (int n = 3; n <= 7; ++n) {
    for (double a : aGrid()) {
      if (a == -1.0) continue;
      for (double h : {-1.3, 0.4, 2.0}) {
        const double closed = solveClosedForm({n, a, n * h}).maxValue;
        EXPECT_NEAR(closed, boundT31(n, 0.0, h * h, a), 1e-12 * std::max(1.0, std::abs(closed)));
      }
    }
  }
}

TEST(AlphaForm, HandValues) {
  const Eigen::Vector4d x12(1, -1, 0, 0);
  const Eigen::Vector4d x34(0, 0, 1, -1);
  for (double a : {-0.9, -0.2, 0.0, 0.7}) {
    const QpProblem p{4, a, 3.0};
    EXPECT_NEAR(alphaForm(p, x12, x12), -2.0 * (1.0 - a), 1e-15);
    EXPECT_NEAR(alphaForm(p, x34, x34), -2.0, 1e-15);
  }
  EXPECT_NEAR(alphaForm({4, -1.0, 3.0}, x12, x12), -4.0, 1e-15);
  EXPECT_NEAR(alphaForm({4, -1.0, 3.0}, x34, x34), -2.0, 1e-15);
}

TEST(AlphaForm, HyperplaneTermVanishesAndTangencyIsEnforced) {
  const Eigen::Vector3d x(1, 2, -3);
  const Eigen::Vector3d y(-1, 0.5, 0.5);
  EXPECT_EQ(traceHyperplaneSecondFundamentalForm(3, x, y).cwiseAbs().maxCoeff(), 0.0);
  const QpProblem p{3, 0.25, 1.0};
  // the form does not depend on the base point because the hyperplane is totally geodesic
  EXPECT_EQ(alphaForm(p, x, y), alphaForm(p, x, y, Eigen::Vector3d(5, -3, -1)));
  try {
    alphaForm(p, Eigen::Vector3d(1, 0, 0), y);
    ADD_FAILURE();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotTangent);
  }
}

TEST(Certify, SweepCertifiesEveryMaximizer) {
  for (int n = 3; n <= 6; ++n) {
    for (double a : aGrid()) {
      for (double k : {-5.0, 1.0, 7.0}) {
        const QpProblem p{n, a, k};
        const QpSolution s = solveClosedForm(p);
        const QpCertificate cert = certify(p, s.maximizer);
        EXPECT_TRUE(cert.ok()) << n << " " << a << " " << k;
        EXPECT_LT(cert.maxRestrictedEigenvalue, 0.0);
        EXPECT_TRUE(certifyMaximum(p, s));
      }
    }
  }
}

TEST(Certify, PerturbedPointFailsFirstOrder) {
  for (int n = 3; n <= 6; ++n) {
    for (double a : {-1.0, -0.5, 0.5}) {
      const QpProblem p{n, a, 7.0};
      Eigen::VectorXd h = solveClosedForm(p).maximizer;
      h(0) += 1.0;
      h(1) -= 1.0;
      const QpCertificate cert = certify(p, h);
      EXPECT_FALSE(cert.firstOrder);
      EXPECT_GT(cert.gradientDeviation, 1e-3);
    }
  }
}

TEST(Certify, RejectsPointsOffTheHyperplane) {
  const QpProblem p{3, 0.5, 7.0};
  // a scaled maximizer keeps its gradient normal to P but is not on P
  EXPECT_FALSE(certify(p, Eigen::Vector3d(4, 4, 6)).firstOrder);
  EXPECT_FALSE(certifyMaximum(p, QpSolution{Eigen::Vector3d(4, 4, 6), 4.0, 56.0, true}));
  EXPECT_THROW(certify(p, Eigen::Vector4d(2, 2, 3, 0)), GeometryError);
}

TEST(BruteForceMax, SpotValuesAndDomination) {
  EXPECT_NEAR(bruteForceMax({3, 0.5, 7.0}), 14.0, 1e-3 * 49.0);
  EXPECT_NEAR(bruteForceMax({3, 0.0, 3.0}), 3.0, 1e-3 * 9.0);
  EXPECT_NEAR(bruteForceMax({4, -0.3, 0.0}), 0.0, 1e-3);
  for (int n = 3; n <= 5; ++n) {
    for (double a : {-1.0, -0.4, 0.8}) {
      const QpProblem p{n, a, -5.0};
      const double oracle = bruteForceMax(p, {4000, 1e-3});
      const double closed = solveClosedForm(p).maxValue;
      EXPECT_LE(oracle, closed + 1e-12);
      EXPECT_LE(closed - oracle, 1e-3 * 25.0);
    }
  }
}

TEST(BruteForceMax, Guards) {
  EXPECT_THROW(bruteForceMax({7, 0.0, 1.0}), GeometryError);
  EXPECT_THROW(bruteForceMax({3, 0.0, 1.0}, {0, 1e-3}), GeometryError);
  EXPECT_THROW(bruteForceMax({3, 0.0, 1.0}, {100, 0.0}), GeometryError);
}

}  // namespace
}  // namespace chengap
