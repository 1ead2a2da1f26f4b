#include "chengap/point_data.hpp"

#include <cmath>
#include <random>
#include <string>

namespace chengap {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  // 53 random bits; std::uniform_real_distribution is not reproducible across
  // standard libraries.
  const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

}  // namespace

double sequentialTrace(const Eigen::MatrixXd& a) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) sum += a(i, i);
  return sum;
}

PointData validate(const PointData& point, const Tolerances& tol) {
  if (point.n < 2) {
    throw GeometryError(ErrorCode::DimensionTooSmall,
                        "tangent dimension n = " + std::to_string(point.n) + " must be >= 2");
  }
  if (point.m <= point.n) {
    throw GeometryError(ErrorCode::AmbientTooSmall,
                        "ambient dimension m = " + std::to_string(point.m) +
                            " must exceed n = " + std::to_string(point.n));
  }
  if (static_cast<int>(point.shapeOps.size()) != point.codim()) {
    throw GeometryError(ErrorCode::ShapeCountMismatch,
                        "expected " + std::to_string(point.codim()) + " shape operators, got " +
                            std::to_string(point.shapeOps.size()));
  }
  if (!std::isfinite(point.c)) {
    throw GeometryError(ErrorCode::NonFinite, "space-form curvature c is not finite");
  }

  PointData out = point;
  for (std::size_t r = 0; r < out.shapeOps.size(); ++r) {
    const Eigen::MatrixXd& a = point.shapeOps[r];
    if (a.rows() != point.n || a.cols() != point.n) {
      throw GeometryError(ErrorCode::ShapeSizeMismatch,
                          "shape operator " + std::to_string(r) + " is not " +
                              std::to_string(point.n) + "x" + std::to_string(point.n));
    }
    if (!a.allFinite()) {
      throw GeometryError(ErrorCode::NonFinite,
                          "shape operator " + std::to_string(r) + " has non-finite entries");
    }
    const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
    if (asym > tol.symTol) {
      throw GeometryError(ErrorCode::Asymmetric, "shape operator " + std::to_string(r) +
                                                     " asymmetry " + std::to_string(asym) +
                                                     " exceeds symTol");
    }
    out.shapeOps[r] = 0.5 * (a + a.transpose());
  }
  return out;
}

TangentPlane orthonormalize(const TangentPlane& plane, const Tolerances& tol) {
  const Eigen::VectorXd& u = plane.u;
  const Eigen::VectorXd& v = plane.v;
  if (u.size() != v.size() || u.size() < 2) {
    throw GeometryError(ErrorCode::DegeneratePlane, "plane vectors must share a dimension >= 2");
  }
  const double uu = u.squaredNorm();
  const double vv = v.squaredNorm();
  const double uv = u.dot(v);
  const double wedge = std::sqrt(std::max(0.0, uu * vv - uv * uv));
  if (!(wedge >= tol.rankTol)) {
    throw GeometryError(ErrorCode::DegeneratePlane, "|u ^ v| below rankTol");
  }

  TangentPlane out;
  out.u = u / std::sqrt(uu);
  out.v = v - out.u.dot(v) * out.u;
  // second pass restores orthogonality lost to cancellation
  out.v -= out.u.dot(out.v) * out.u;
  const double vn = out.v.norm();
  if (!(vn >= tol.rankTol)) {
    throw GeometryError(ErrorCode::DegeneratePlane, "v is numerically parallel to u");
  }
  out.v /= vn;
  return out;
}

PointData randomPointData(std::uint64_t seed, int n, int codim, bool minimal, double scale,
                          double c) {
  if (n < 2) throw GeometryError(ErrorCode::InvalidParameter, "n must be >= 2");
  if (codim < 1) throw GeometryError(ErrorCode::InvalidParameter, "codim must be >= 1");
  if (!(scale >= 0.0) || !std::isfinite(scale)) {
    throw GeometryError(ErrorCode::InvalidParameter, "scale must be finite and >= 0");
  }

  std::mt19937_64 rng(seed);
  PointData point;
  point.n = n;
  point.m = n + codim;
  point.c = c;
  point.shapeOps.reserve(codim);
  for (int r = 0; r < codim; ++r) {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        a(i, j) = uniform(rng, -scale, scale);
        a(j, i) = a(i, j);
      }
    }
    if (minimal) {
      const double shift = sequentialTrace(a) / n;
      double partial = 0.0;
      for (int i = 0; i + 1 < n; ++i) {
        a(i, i) -= shift;
        partial += a(i, i);
      }
      a(n - 1, n - 1) = -partial;
    }
    point.shapeOps.push_back(std::move(a));
  }
  return point;
}

PointData conjugateFrame(const PointData& point, const Eigen::MatrixXd& q) {
  PointData out = point;
  for (auto& a : out.shapeOps) {
    Eigen::MatrixXd rotated = q.transpose() * a * q;
    a = 0.5 * (rotated + rotated.transpose());
  }
  return out;
}

}  // namespace chengap
