#include "chengap/point_data.hpp"

#include <gtest/gtest.h>

#include <functional>

#include <cmath>
#include <limits>

#include "oracles.hpp"

namespace chengap {
namespace {

using testing::diag;
using testing::makePoint;

ErrorCode codeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const GeometryError& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected GeometryError";
  return ErrorCode::ParseError;
}

TEST(Validate, IdentityIsTheoremEligible) {
  const PointData p = validate(makePoint(3, 0.0, {Eigen::MatrixXd::Identity(3, 3)}));
  EXPECT_TRUE(theoremEligible(p));
  EXPECT_EQ(p.codim(), 1);
}

TEST(Validate, SurfaceIsValidButNotEligible) {
  const PointData p = validate(makePoint(2, 0.0, {diag({1, -1})}));
  EXPECT_FALSE(theoremEligible(p));
}

TEST(Validate, Rejections) {
  PointData ambient = makePoint(3, 0.0, {});
  ambient.m = 3;
  EXPECT_EQ(codeOf([&] { validate(ambient); }), ErrorCode::AmbientTooSmall);

  EXPECT_EQ(codeOf([] { validate(makePoint(1, 0.0, {Eigen::MatrixXd::Ones(1, 1)})); }),
            ErrorCode::DimensionTooSmall);

  PointData count = makePoint(3, 0.0, {Eigen::MatrixXd::Identity(3, 3)});
  count.m = 5;
  EXPECT_EQ(codeOf([&] { validate(count); }), ErrorCode::ShapeCountMismatch);

  EXPECT_EQ(codeOf([] { validate(makePoint(3, 0.0, {Eigen::MatrixXd::Identity(2, 2)})); }),
            ErrorCode::ShapeSizeMismatch);

  Eigen::MatrixXd nan = Eigen::MatrixXd::Identity(3, 3);
  nan(1, 2) = nan(2, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(codeOf([&] { validate(makePoint(3, 0.0, {nan})); }), ErrorCode::NonFinite);
  EXPECT_EQ(codeOf([] {
              validate(makePoint(3, std::numeric_limits<double>::infinity(),
                                 {Eigen::MatrixXd::Identity(3, 3)}));
            }),
            ErrorCode::NonFinite);

  Eigen::MatrixXd skew = Eigen::MatrixXd::Identity(3, 3);
  skew(0, 1) = 1e-6;
  EXPECT_EQ(codeOf([&] { validate(makePoint(3, 0.0, {skew})); }), ErrorCode::Asymmetric);
}

TEST(Validate, SymmetrizesSmallAsymmetryAndIsIdempotent) {
  Eigen::MatrixXd a = diag({1, 2, 3});
  a(0, 2) = 0.5 + 4e-10;
  a(2, 0) = 0.5;
  const PointData once = validate(makePoint(3, 1.0, {a}));
  EXPECT_EQ(once.shapeOps[0](0, 2), once.shapeOps[0](2, 0));
  const PointData twice = validate(once);
  EXPECT_EQ(once.shapeOps[0], twice.shapeOps[0]);
  EXPECT_EQ(once.c, twice.c);

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const PointData p = validate(randomPointData(seed, 4, 2, false, 3.0));
    const PointData q = validate(p);
    for (int r = 0; r < 2; ++r) EXPECT_EQ(p.shapeOps[r], q.shapeOps[r]);
  }
}

TEST(Orthonormalize, AlreadyOrthonormalIsUnchanged) {
  const TangentPlane p = orthonormalize({Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0)});
  EXPECT_EQ(p.u, Eigen::VectorXd(Eigen::Vector3d(1, 0, 0)));
  EXPECT_EQ(p.v, Eigen::VectorXd(Eigen::Vector3d(0, 1, 0)));
}

TEST(Orthonormalize, GramSchmidtByHand) {
  const TangentPlane p = orthonormalize({Eigen::Vector3d(2, 0, 0), Eigen::Vector3d(1, 1, 0)});
  EXPECT_NEAR((p.u - Eigen::Vector3d(1, 0, 0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((p.v - Eigen::Vector3d(0, 1, 0)).norm(), 0.0, 1e-15);
}

TEST(Orthonormalize, DependentVectorsAreDegenerate) {
  EXPECT_EQ(codeOf([] { orthonormalize({Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(2, 0, 0)}); }),
            ErrorCode::DegeneratePlane);
  EXPECT_EQ(codeOf([] { orthonormalize({Eigen::Vector3d::Zero(), Eigen::Vector3d(0, 1, 0)}); }),
            ErrorCode::DegeneratePlane);
}

TEST(Orthonormalize, RandomPairsMeetOrthoTol) {
  for (unsigned seed = 1; seed <= 200; ++seed) {
    std::srand(seed);
    const int n = 2 + static_cast<int>(seed % 6);
    const Eigen::VectorXd u = Eigen::VectorXd::Random(n) * 10.0;
    const Eigen::VectorXd v = Eigen::VectorXd::Random(n) * 0.1;
    const TangentPlane p = orthonormalize({u, v});
    EXPECT_NEAR(p.u.squaredNorm(), 1.0, 1e-12);
    EXPECT_NEAR(p.v.squaredNorm(), 1.0, 1e-12);
    EXPECT_NEAR(p.u.dot(p.v), 0.0, 1e-12);
    // same span: v lies in span(u', v')
    const Eigen::VectorXd residual = v - p.u.dot(v) * p.u - p.v.dot(v) * p.v;
    EXPECT_LT(residual.norm(), 1e-12 * (1.0 + v.norm()));
  }
}

TEST(RandomPointData, MinimalHasExactlyZeroTrace) {
  const PointData p = randomPointData(1, 3, 1, true);
  EXPECT_EQ(sequentialTrace(p.shapeOps[0]), 0.0);
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const PointData q = randomPointData(seed, 2 + seed % 5, 1 + seed % 3, true, 2.0);
    for (const auto& a : q.shapeOps) EXPECT_EQ(sequentialTrace(a), 0.0);
  }
}

TEST(RandomPointData, DeterministicInSeed) {
  const PointData a = randomPointData(1, 3, 1, true);
  const PointData b = randomPointData(1, 3, 1, true);
  EXPECT_EQ(a.shapeOps[0], b.shapeOps[0]);
  const PointData c = randomPointData(2, 3, 1, true);
  EXPECT_NE(a.shapeOps[0], c.shapeOps[0]);
}

TEST(RandomPointData, ShapeAndRange) {
  const PointData p = randomPointData(2, 4, 3, false, 1.5);
  EXPECT_EQ(p.n, 4);
  EXPECT_EQ(p.m, 7);
  ASSERT_EQ(p.shapeOps.size(), 3u);
  for (const auto& a : p.shapeOps) {
    EXPECT_EQ(a.rows(), 4);
    EXPECT_EQ(a, a.transpose());
    EXPECT_LE(a.cwiseAbs().maxCoeff(), 1.5);
  }
  EXPECT_NO_THROW(validate(p));
}

TEST(RandomPointData, ParameterValidation) {
  EXPECT_EQ(codeOf([] { randomPointData(1, 1, 1, false); }), ErrorCode::InvalidParameter);
  EXPECT_EQ(codeOf([] { randomPointData(1, 3, 0, false); }), ErrorCode::InvalidParameter);
}

}  // namespace
}  // namespace chengap
