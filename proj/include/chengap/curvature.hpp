#pragma once

#include <Eigen/Dense>

#include "chengap/point_data.hpp"

namespace chengap {

struct PlaneSearchConfig {
  int restarts = 64;                      // random starts on top of the coordinate planes
  int maxIter = 200;                      // alternating refinement sweeps per start
  double stepTol = 1e-12;                 // stop when a sweep changes K by less
  int sampleOracleResolution = 100000;    // planes used by planeCurvatureOracle in tests

  void check() const;
};

enum class ExtremumMode { Min, Max };

struct PlaneExtremum {
  double value = 0.0;
  TangentPlane plane;
};

struct CurvatureRange {
  double minK = 0.0;
  double maxK = 0.0;
};

/// K(u ^ v) = c + sum_r (u'A_r u)(v'A_r v) - (u'A_r v)^2 after orthonormalizing
/// the plane (Gauss equation).
double sectionalCurvature(const PointData& point, const TangentPlane& plane,
                          const Tolerances& tol = {});

/// Curvature of the coordinate plane e_i ^ e_j, through the same kernel as
/// sectionalCurvature.
double coordinatePlaneCurvature(const PointData& point, int i, int j);

/// tau = sum over i < j of coordinatePlaneCurvature(i, j).
double scalarCurvature(const PointData& point);

Eigen::VectorXd meanCurvatureVector(const PointData& point);

/// |H|^2 = sum_r (trace(A_r) / n)^2.
double meanCurvatureSq(const PointData& point);

/// Ric(X, X) = (n-1)c + sum_r trace(A_r) X'A_r X - |A_r X|^2 for the
/// normalized direction. Throws ZeroVector below rankTol.
double ricciQuadratic(const PointData& point, const Eigen::VectorXd& direction,
                      const Tolerances& tol = {});

/// Matrix of the Ricci form in the tangent frame.
Eigen::MatrixXd ricciTensor(const PointData& point);

double ricciMaxEigenvalue(const PointData& point);

/// Best sectional curvature found over tangent 2-planes with a witness. The
/// value is always attained by the witness, so in Min mode it is >= the true
/// minimum and in Max mode <= the true maximum. Deterministic.
PlaneExtremum extremalSectionalCurvature(const PointData& point, ExtremumMode mode,
                                         const PlaneSearchConfig& cfg = {});

/// Brute-force extremum over `resolution` quasi-random planes plus every
/// coordinate plane. Independent of the refinement search; n <= 6.
double planeCurvatureOracle(const PointData& point, ExtremumMode mode, int resolution);

/// Both extremes from one oracle pass.
CurvatureRange planeCurvatureOracleRange(const PointData& point, int resolution);

}  // namespace chengap
