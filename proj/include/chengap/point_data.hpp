#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "chengap/errors.hpp"

namespace chengap {

struct Tolerances {
  double symTol = 1e-9;     // accepted input asymmetry
  double orthoTol = 1e-12;  // orthonormality of tangent planes
  double rankTol = 1e-12;   // degeneracy of planes, vectors and jets
  double eqTol = 1e-8;      // equality flags on bounds and shapes
};

/// Pointwise datum of a submanifold M^n of a real space form of curvature c
/// and dimension m. shapeOps[r] holds the Weingarten operator of the r-th
/// normal direction in an orthonormal tangent frame.
struct PointData {
  int n = 0;
  int m = 0;
  double c = 0.0;
  std::vector<Eigen::MatrixXd> shapeOps;

  int codim() const { return m - n; }
};

/// Two vectors spanning a tangent 2-plane, in the same frame as PointData.
struct TangentPlane {
  Eigen::VectorXd u;
  Eigen::VectorXd v;
};

/// Checks the datum and returns it with every shape operator replaced by its
/// symmetric part. Throws GeometryError on rejection.
PointData validate(const PointData& point, const Tolerances& tol = {});

/// The inequalities of the curvature theorems need n >= 3; smaller data is
/// still valid for curvature evaluation.
inline bool theoremEligible(const PointData& point) { return point.n >= 3; }

/// Gram-Schmidt on (u, v). Throws DegeneratePlane when |u ^ v| < rankTol.
TangentPlane orthonormalize(const TangentPlane& plane, const Tolerances& tol = {});

/// Deterministic random datum with entries in [-scale, scale]. With
/// minimal = true every operator is projected onto trace zero, and the last
/// diagonal entry absorbs the rounding so the sequential trace is exactly 0.
PointData randomPointData(std::uint64_t seed, int n, int codim, bool minimal, double scale = 1.0,
                          double c = 0.0);

/// Left-to-right diagonal sum; the trace used throughout the library.
double sequentialTrace(const Eigen::MatrixXd& a);

/// Replaces every A_r by Q^T A_r Q.
PointData conjugateFrame(const PointData& point, const Eigen::MatrixXd& q);

}  // namespace chengap
