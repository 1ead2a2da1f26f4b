#include "chengap/curvature.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <algorithm>
#include <random>
#include <vector>

#include "chengap/sequences.hpp"

namespace chengap {

namespace {

constexpr int kOracleMaxDim = 6;
constexpr std::uint64_t kSearchSeed = 0x9E3779B97F4A7C15ULL;

// c + sum_r (u'Au)(v'Av) - (u'Av)^2 for orthonormal u, v. Shape operators are
// exactly symmetric after validation, so column k doubles as row k.
double planeKernel(const PointData& point, const double* u, const double* v) {
  const int n = point.n;
  double sum = 0.0;
  for (const Eigen::MatrixXd& a : point.shapeOps) {
    double uau = 0.0;
    double vav = 0.0;
    double uav = 0.0;
    for (int k = 0; k < n; ++k) {
      const double* col = a.data() + static_cast<std::ptrdiff_t>(k) * n;
      double au = 0.0;
      double av = 0.0;
      for (int j = 0; j < n; ++j) {
        au += col[j] * u[j];
        av += col[j] * v[j];
      }
      uau += u[k] * au;
      vav += v[k] * av;
      uav += u[k] * av;
    }
    sum += uau * vav - uav * uav;
  }
  return point.c + sum;
}

bool better(ExtremumMode mode, double candidate, double incumbent) {
  return mode == ExtremumMode::Min ? candidate < incumbent : candidate > incumbent;
}

// Small problems run on stack-allocated storage; the search is the hot path of
// every report.
constexpr int kSmallDim = 8;
using SmallMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kSmallDim, kSmallDim>;
using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kSmallDim, 1>;

// Sweeps each start gets before only the best few are polished to convergence.
constexpr int kScreeningSweeps = 3;
constexpr int kPolished = 4;

template <typename Mat, typename Vec>
struct PlaneSearch {
  const PointData& point;
  ExtremumMode mode;
  std::vector<Mat> ops;

  PlaneSearch(const PointData& p, ExtremumMode md) : point(p), mode(md) {
    ops.reserve(p.shapeOps.size());
    for (const Eigen::MatrixXd& a : p.shapeOps) ops.emplace_back(a);
  }

  // For fixed unit u, K(u ^ w) = c + w' M w over unit w orthogonal to u.
  Mat curvatureOperator(const Vec& u) const {
    Mat mat = Mat::Zero(point.n, point.n);
    for (const Mat& a : ops) {
      const Vec au = a * u;
      mat += u.dot(au) * a;
      mat.noalias() -= au * au.transpose();
    }
    return mat;
  }

  // Extreme eigenvector of M restricted to the complement of u. The projection
  // P M P is a rank-2 update of M; u itself is pushed to the far end of the
  // spectrum so it never wins.
  Vec extremeOrthogonalDirection(const Mat& mat, const Vec& u) const {
    const Eigen::Index n = u.size();
    const Vec mu = mat * u;
    const double umu = u.dot(mu);
    const double push = 4.0 * (mat.cwiseAbs().sum() + 1.0);
    Mat restricted = mat;
    restricted.noalias() -= u * mu.transpose();
    restricted.noalias() -= mu * u.transpose();
    restricted.noalias() += (umu + (mode == ExtremumMode::Max ? -push : push)) * (u * u.transpose());

    Eigen::SelfAdjointEigenSolver<Mat> eig(restricted);
    Vec w = mode == ExtremumMode::Max ? Vec(eig.eigenvectors().col(n - 1))
                                      : Vec(eig.eigenvectors().col(0));
    w -= u.dot(w) * u;
    return w.normalized();
  }

  struct State {
    Vec u;
    Vec v;
    double value;      // best value seen along this start
    Vec bestU;
    Vec bestV;
    double previous;
    bool converged = false;
  };

  State init(const TangentPlane& start) const {
    Vec u = start.u;
    Vec v = start.v;
    const double k = planeKernel(point, u.data(), v.data());
    return {u, v, k, u, v, k};
  }

  void sweep(State& s, int count, double stepTol) const {
    for (int it = 0; it < count && !s.converged; ++it) {
      s.v = extremeOrthogonalDirection(curvatureOperator(s.u), s.u);
      s.u = extremeOrthogonalDirection(curvatureOperator(s.v), s.v);
      // re-orthonormalize against drift
      s.v -= s.u.dot(s.v) * s.u;
      s.v.normalize();
      const double value = planeKernel(point, s.u.data(), s.v.data());
      if (better(mode, value, s.value)) {
        s.value = value;
        s.bestU = s.u;
        s.bestV = s.v;
      }
      if (std::abs(value - s.previous) < stepTol) s.converged = true;
      s.previous = value;
    }
  }

  PlaneExtremum run(const std::vector<TangentPlane>& starts, const PlaneSearchConfig& cfg) const {
    std::vector<State> states;
    states.reserve(starts.size());
    const int screening = std::min(cfg.maxIter, kScreeningSweeps);
    for (const TangentPlane& start : starts) {
      states.push_back(init(start));
      sweep(states.back(), screening, cfg.stepTol);
    }

    // Polish the best few; ordering is by value, then by start index.
    std::vector<std::size_t> order(states.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return better(mode, states[a].value, states[b].value);
    });
    const std::size_t polished = std::min<std::size_t>(kPolished, order.size());
    for (std::size_t k = 0; k < polished; ++k) {
      sweep(states[order[k]], cfg.maxIter - screening, cfg.stepTol);
    }

    std::size_t bestIndex = 0;
    for (std::size_t i = 1; i < states.size(); ++i) {
      if (better(mode, states[i].value, states[bestIndex].value)) bestIndex = i;
    }
    const State& best = states[bestIndex];
    return {best.value, {Eigen::VectorXd(best.bestU), Eigen::VectorXd(best.bestV)}};
  }
};

Eigen::VectorXd gaussianVector(std::mt19937_64& rng, int n) {
  Eigen::VectorXd g(n);
  for (int i = 0; i < n; ++i) {
    const double u1 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    g(i) = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  return g;
}

}  // namespace

void PlaneSearchConfig::check() const {
  if (restarts < 1 || maxIter < 1 || !(stepTol > 0.0) || sampleOracleResolution < 1) {
    throw GeometryError(ErrorCode::InvalidParameter,
                        "plane search needs restarts >= 1, maxIter >= 1, stepTol > 0");
  }
}

double sectionalCurvature(const PointData& point, const TangentPlane& plane,
                          const Tolerances& tol) {
  if (plane.u.size() != point.n || plane.v.size() != point.n) {
    throw GeometryError(ErrorCode::DegeneratePlane, "plane vectors must have n components");
  }
  const TangentPlane unit = orthonormalize(plane, tol);
  return planeKernel(point, unit.u.data(), unit.v.data());
}

double coordinatePlaneCurvature(const PointData& point, int i, int j) {
  const Eigen::VectorXd ei = Eigen::VectorXd::Unit(point.n, i);
  const Eigen::VectorXd ej = Eigen::VectorXd::Unit(point.n, j);
  return planeKernel(point, ei.data(), ej.data());
}

double scalarCurvature(const PointData& point) {
  double tau = 0.0;
  for (int i = 0; i < point.n; ++i) {
    for (int j = i + 1; j < point.n; ++j) tau += coordinatePlaneCurvature(point, i, j);
  }
  return tau;
}

Eigen::VectorXd meanCurvatureVector(const PointData& point) {
  Eigen::VectorXd h(point.codim());
  for (int r = 0; r < point.codim(); ++r) h(r) = sequentialTrace(point.shapeOps[r]) / point.n;
  return h;
}

double meanCurvatureSq(const PointData& point) {
  double sum = 0.0;
  for (const Eigen::MatrixXd& a : point.shapeOps) {
    const double hr = sequentialTrace(a) / point.n;
    sum += hr * hr;
  }
  return sum;
}

double ricciQuadratic(const PointData& point, const Eigen::VectorXd& direction,
                      const Tolerances& tol) {
  if (direction.size() != point.n) {
    throw GeometryError(ErrorCode::InvalidParameter, "direction must have n components");
  }
  const double norm = direction.norm();
  if (!(norm >= tol.rankTol)) throw GeometryError(ErrorCode::ZeroVector, "|X| below rankTol");
  const Eigen::VectorXd x = direction / norm;

  double sum = (point.n - 1) * point.c;
  for (const Eigen::MatrixXd& a : point.shapeOps) {
    const Eigen::VectorXd ax = a * x;
    sum += sequentialTrace(a) * x.dot(ax) - ax.squaredNorm();
  }
  return sum;
}

Eigen::MatrixXd ricciTensor(const PointData& point) {
  Eigen::MatrixXd ric = (point.n - 1) * point.c * Eigen::MatrixXd::Identity(point.n, point.n);
  for (const Eigen::MatrixXd& a : point.shapeOps) ric += sequentialTrace(a) * a - a * a;
  return 0.5 * (ric + ric.transpose());
}

double ricciMaxEigenvalue(const PointData& point) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ricciTensor(point), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

PlaneExtremum extremalSectionalCurvature(const PointData& point, ExtremumMode mode,
                                         const PlaneSearchConfig& cfg) {
  cfg.check();
  const int n = point.n;
  if (n == 2) {
    TangentPlane plane{Eigen::VectorXd::Unit(2, 0), Eigen::VectorXd::Unit(2, 1)};
    return {coordinatePlaneCurvature(point, 0, 1), plane};
  }

  // Coordinate planes come first, so the result never loses to one of them:
  // every start keeps the best value seen along its path, including its start.
  std::vector<TangentPlane> starts;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      starts.push_back({Eigen::VectorXd::Unit(n, i), Eigen::VectorXd::Unit(n, j)});
    }
  }
  std::mt19937_64 rng(kSearchSeed);
  for (int s = 0; s < cfg.restarts; ++s) {
    try {
      starts.push_back(orthonormalize({gaussianVector(rng, n), gaussianVector(rng, n)}));
    } catch (const GeometryError&) {
    }
  }

  if (n <= kSmallDim) return PlaneSearch<SmallMat, SmallVec>(point, mode).run(starts, cfg);
  return PlaneSearch<Eigen::MatrixXd, Eigen::VectorXd>(point, mode).run(starts, cfg);
}

CurvatureRange planeCurvatureOracleRange(const PointData& point, int resolution) {
  const int n = point.n;
  if (n > kOracleMaxDim) {
    throw GeometryError(ErrorCode::DimensionTooLarge,
                        "plane oracle is limited to n <= " + std::to_string(kOracleMaxDim));
  }
  if (resolution < 0) throw GeometryError(ErrorCode::InvalidParameter, "resolution must be >= 0");

  CurvatureRange range{std::numeric_limits<double>::infinity(),
                       -std::numeric_limits<double>::infinity()};
  auto record = [&](double k) {
    range.minK = std::min(range.minK, k);
    range.maxK = std::max(range.maxK, k);
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) record(coordinatePlaneCurvature(point, i, j));
  }
  if (resolution > 0) {
    const auto planes = quasiRandomPlanes(n, resolution);
    for (const TangentPlane& plane : *planes) {
      record(planeKernel(point, plane.u.data(), plane.v.data()));
    }
  }
  return range;
}

double planeCurvatureOracle(const PointData& point, ExtremumMode mode, int resolution) {
  const CurvatureRange range = planeCurvatureOracleRange(point, resolution);
  return mode == ExtremumMode::Min ? range.minK : range.maxK;
}

}  // namespace chengap
