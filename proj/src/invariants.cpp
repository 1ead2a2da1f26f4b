#include "chengap/invariants.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

namespace chengap {

namespace {

constexpr std::uint64_t kShapeSeed = 0xC0FFEE5EEDULL;
constexpr int kShapeAttempts = 8;

void requireEligible(int n, const char* what) {
  if (n < 3) {
    throw GeometryError(ErrorCode::NotApplicable,
                        std::string(what) + " requires n >= 3, got n = " + std::to_string(n));
  }
}

void requireA(double a) {
  if (!(a > -1.0 && a < 1.0)) {
    throw GeometryError(ErrorCode::AOutOfRange,
                        "a = " + std::to_string(a) + " is outside the open interval (-1, 1)");
  }
}

std::vector<BoundVerdict> obstructionFrom(const PointData& point, double tau, double minK,
                                          double maxK, bool minimal, double eqTol) {
  const int n = point.n;
  const double c = point.c;
  std::vector<BoundVerdict> out;
  std::string reason;
  if (n < 3) {
    reason = "requires n >= 3";
  } else if (!minimal) {
    reason = "requires a minimal point (|H|^2 <= 1e-12)";
  }
  const bool ok = reason.empty();

  const double lower = tau - (n - 2) * (n + 1) * c / 2.0;
  const double upper = -tau + (n * n - n + 2) * c / 2.0;
  auto push = [&](TheoremTag tag, BoundSide side, double value, double bound) {
    out.push_back(ok ? makeVerdict(tag, side, value, bound, eqTol)
                     : notApplicableVerdict(tag, side, reason));
  };
  push(TheoremTag::C21, BoundSide::Lower, minK, lower);
  push(TheoremTag::C31, BoundSide::Lower, minK, lower);
  push(TheoremTag::C31, BoundSide::Upper, maxK, upper);
  if (c == 0.0) {
    push(TheoremTag::C32, BoundSide::Lower, minK, tau);
    push(TheoremTag::C32, BoundSide::Upper, maxK, -tau);
  } else {
    out.push_back(notApplicableVerdict(TheoremTag::C32, BoundSide::Lower, "requires c = 0"));
    out.push_back(notApplicableVerdict(TheoremTag::C32, BoundSide::Upper, "requires c = 0"));
  }
  return out;
}

double maxOffDiagonal(const Eigen::MatrixXd& d) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
      if (i != j) worst = std::max(worst, std::abs(d(i, j)));
    }
  }
  return worst;
}

double spread(const std::vector<double>& values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo;
}

// Frame with columns p, q first and the rest in their original order.
Eigen::MatrixXd pairFirst(const Eigen::MatrixXd& frame, int p, int q) {
  const int n = static_cast<int>(frame.cols());
  Eigen::MatrixXd out(frame.rows(), n);
  out.col(0) = frame.col(p);
  out.col(1) = frame.col(q);
  int k = 2;
  for (int j = 0; j < n; ++j) {
    if (j != p && j != q) out.col(k++) = frame.col(j);
  }
  return out;
}

// Pattern violation of a diagonal for the T3.1 (a) or T3.2 shape with the
// distinguished pair in slots p, q.
double diagonalPatternResidual(const Eigen::VectorXd& d, int p, int q, TheoremTag tag, double a) {
  const int n = static_cast<int>(d.size());
  if (tag == TheoremTag::T32) {
    double worst = std::abs(d(p) - d(q));
    for (int j = 0; j < n; ++j) {
      if (j != p && j != q) worst = std::max(worst, std::abs(d(j)));
    }
    return worst;
  }
  std::vector<double> values{(a + 1.0) * d(p), (a + 1.0) * d(q)};
  for (int j = 0; j < n; ++j) {
    if (j != p && j != q) values.push_back(d(j));
  }
  return spread(values);
}

EqualityShapeResult detectDiagonalShape(const PointData& point, TheoremTag tag, double a,
                                        const Tolerances& tol) {
  const int n = point.n;
  const auto& ops = point.shapeOps;

  // Simultaneous diagonalization needs pairwise commuting operators.
  double commutator = 0.0;
  for (std::size_t r = 0; r < ops.size(); ++r) {
    for (std::size_t s = r + 1; s < ops.size(); ++s) {
      commutator = std::max(commutator, (ops[r] * ops[s] - ops[s] * ops[r]).cwiseAbs().maxCoeff());
    }
  }
  if (commutator > tol.eqTol) {
    return {false, Eigen::MatrixXd::Identity(n, n), commutator,
            "shape operators do not commute; no common diagonalizing frame"};
  }

  std::mt19937_64 rng(kShapeSeed);
  EqualityShapeResult best{false, Eigen::MatrixXd::Identity(n, n),
                           std::numeric_limits<double>::infinity(), ""};
  for (int attempt = 0; attempt < kShapeAttempts; ++attempt) {
    Eigen::MatrixXd combo = Eigen::MatrixXd::Zero(n, n);
    for (const Eigen::MatrixXd& op : ops) {
      const double w = 0.5 + static_cast<double>(rng() >> 11) * 0x1.0p-53;
      combo += w * op;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (combo + combo.transpose()));
    const Eigen::MatrixXd q = eig.eigenvectors();

    std::vector<Eigen::MatrixXd> rotated;
    double offDiagonal = 0.0;
    for (const Eigen::MatrixXd& op : ops) {
      rotated.push_back(q.transpose() * op * q);
      offDiagonal = std::max(offDiagonal, maxOffDiagonal(rotated.back()));
    }
    for (int p = 0; p < n; ++p) {
      for (int s = p + 1; s < n; ++s) {
        double residual = offDiagonal;
        for (const Eigen::MatrixXd& d : rotated) {
          residual = std::max(residual, diagonalPatternResidual(d.diagonal(), p, s, tag, a));
        }
        if (residual < best.residual) {
          best.residual = residual;
          best.frame = pairFirst(q, p, s);
        }
      }
    }
    if (best.residual <= tol.eqTol) break;
  }
  best.matched = best.residual <= tol.eqTol;
  return best;
}

// Chen's equality shape: A_{n+1} along H diagonal with h11 + h22 = h33 = ... =
// hnn, every other operator supported on the e1 ^ e2 block with trace zero.
EqualityShapeResult detectChenShape(const PointData& point, const Tolerances& tol) {
  const int n = point.n;
  const int codim = point.codim();
  const Eigen::VectorXd h = meanCurvatureVector(point);
  const double hNorm = h.norm();

  // Rotate the normal frame so its first vector is H / |H|. With H = 0 the
  // pattern forces every operator into the trace-free block form, so the
  // normal frame is irrelevant and all operators join the block group.
  Eigen::MatrixXd primary = Eigen::MatrixXd::Zero(n, n);
  std::vector<Eigen::MatrixXd> block;
  if (hNorm > tol.eqTol) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(h);
    Eigen::MatrixXd normalFrame = qr.householderQ() * Eigen::MatrixXd::Identity(codim, codim);
    if (normalFrame.col(0).dot(h) < 0.0) normalFrame.col(0) *= -1.0;
    for (int s = 0; s < codim; ++s) {
      Eigen::MatrixXd op = Eigen::MatrixXd::Zero(n, n);
      for (int r = 0; r < codim; ++r) op += normalFrame(r, s) * point.shapeOps[r];
      if (s == 0) {
        primary = op;
      } else {
        block.push_back(op);
      }
    }
  } else {
    block = point.shapeOps;
  }

  Eigen::MatrixXd squares = Eigen::MatrixXd::Zero(n, n);
  for (const Eigen::MatrixXd& op : block) squares += op * op;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> support(0.5 * (squares + squares.transpose()));
  const bool blockVanishes = support.eigenvalues()(n - 1) <= tol.eqTol * tol.eqTol;

  EqualityShapeResult result{false, Eigen::MatrixXd::Identity(n, n),
                             std::numeric_limits<double>::infinity(), ""};

  auto evaluate = [&](const Eigen::MatrixXd& frame) {
    const Eigen::MatrixXd d = frame.transpose() * primary * frame;
    double residual = maxOffDiagonal(d);
    std::vector<double> values{d(0, 0) + d(1, 1)};
    for (int j = 2; j < n; ++j) values.push_back(d(j, j));
    residual = std::max(residual, spread(values));
    for (const Eigen::MatrixXd& op : block) {
      const Eigen::MatrixXd e = frame.transpose() * op * frame;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (i >= 2 || j >= 2) residual = std::max(residual, std::abs(e(i, j)));
        }
      }
      residual = std::max(residual, std::abs(e(0, 0) + e(1, 1)));
    }
    return residual;
  };

  if (blockVanishes) {
    // Only the primary operator matters; its eigenvalues decide the pattern.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (primary + primary.transpose()));
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const Eigen::MatrixXd frame = pairFirst(eig.eigenvectors(), p, q);
        const double residual = evaluate(frame);
        if (residual < result.residual) {
          result.residual = residual;
          result.frame = frame;
        }
      }
    }
    if (hNorm <= tol.eqTol) result.note = "all shape operators vanish; totally geodesic point";
  } else {
    // The block operators span exactly the distinguished plane: it is the top
    // two eigenspace of sum_r A_r^2.
    const Eigen::MatrixXd basis = support.eigenvectors();
    Eigen::MatrixXd plane(n, 2);
    plane.col(0) = basis.col(n - 1);
    plane.col(1) = basis.col(n - 2);
    const Eigen::MatrixXd rest = basis.leftCols(n - 2);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> inPlane(plane.transpose() * primary * plane);
    Eigen::MatrixXd frame(n, n);
    frame.leftCols(2) = plane * inPlane.eigenvectors();
    if (n > 2) {
      Eigen::MatrixXd restOp = rest.transpose() * primary * rest;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> inRest(0.5 * (restOp + restOp.transpose()));
      frame.rightCols(n - 2) = rest * inRest.eigenvectors();
    }
    result.residual = evaluate(frame);
    result.frame = frame;
    if (support.eigenvalues().size() > 2 && n > 2 &&
        support.eigenvalues()(n - 3) > tol.eqTol * tol.eqTol) {
      result.note = "block operators have rank above 2";
    }
  }
  result.matched = result.residual <= tol.eqTol;
  return result;
}

}  // namespace

std::string_view toString(TheoremTag tag) {
  switch (tag) {
    case TheoremTag::T21: return "T2.1";
    case TheoremTag::T31: return "T3.1";
    case TheoremTag::T32: return "T3.2";
    case TheoremTag::C21: return "C2.1";
    case TheoremTag::C31: return "C3.1";
    case TheoremTag::C32: return "C3.2";
    case TheoremTag::RemarkII: return "RemarkII";
    case TheoremTag::Takahashi: return "Takahashi";
  }
  return "?";
}

std::optional<TheoremTag> theoremTagFromString(std::string_view text) {
  constexpr std::array all = {TheoremTag::T21, TheoremTag::T31, TheoremTag::T32,
                              TheoremTag::C21, TheoremTag::C31, TheoremTag::C32,
                              TheoremTag::RemarkII, TheoremTag::Takahashi};
  for (TheoremTag tag : all) {
    if (toString(tag) == text) return tag;
  }
  return std::nullopt;
}

BoundVerdict makeVerdict(TheoremTag tag, BoundSide side, double invariantValue, double boundValue,
                         double eqTol) {
  BoundVerdict v;
  v.tag = tag;
  v.side = side;
  v.invariantValue = invariantValue;
  v.boundValue = boundValue;
  v.slack = side == BoundSide::Upper ? boundValue - invariantValue : invariantValue - boundValue;
  v.holds = v.slack >= -eqTol;
  v.equality = std::abs(v.slack) <= eqTol;
  return v;
}

BoundVerdict notApplicableVerdict(TheoremTag tag, BoundSide side, std::string reason) {
  BoundVerdict v;
  v.tag = tag;
  v.side = side;
  v.applicable = false;
  v.reason = std::move(reason);
  v.invariantValue = std::numeric_limits<double>::quiet_NaN();
  v.boundValue = std::numeric_limits<double>::quiet_NaN();
  v.slack = std::numeric_limits<double>::quiet_NaN();
  return v;
}

const BoundVerdict* InvariantReport::find(TheoremTag tag, std::optional<double> a,
                                          std::optional<BoundSide> side) const {
  for (const BoundVerdict& v : verdicts) {
    if (v.tag != tag) continue;
    if (a && (!v.a || *v.a != *a)) continue;
    if (side && v.side != *side) continue;
    return &v;
  }
  return nullptr;
}

bool InvariantReport::allHold() const {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const BoundVerdict& v) { return !v.applicable || v.holds; });
}

double deltaAFrom(double tau, double minK, double maxK, double a) {
  requireA(a);
  return a >= 0.0 ? tau - a * minK : tau - a * maxK;
}

double chenDelta(const PointData& point, const PlaneSearchConfig& cfg) {
  requireEligible(point.n, "delta_M");
  return scalarCurvature(point) - extremalSectionalCurvature(point, ExtremumMode::Min, cfg).value;
}

double chenDeltaA(const PointData& point, double a, const PlaneSearchConfig& cfg) {
  requireA(a);
  requireEligible(point.n, "delta^a_M");
  const double tau = scalarCurvature(point);
  if (a == 0.0) return tau;
  const ExtremumMode mode = a > 0.0 ? ExtremumMode::Min : ExtremumMode::Max;
  return tau - a * extremalSectionalCurvature(point, mode, cfg).value;
}

double chenDeltaPrime(const PointData& point, const PlaneSearchConfig& cfg) {
  requireEligible(point.n, "delta'_M");
  return scalarCurvature(point) + extremalSectionalCurvature(point, ExtremumMode::Max, cfg).value;
}

double boundT21(int n, double c, double meanCurvSq) {
  requireEligible(n, "Chen's inequality");
  return (n - 2) / 2.0 * (static_cast<double>(n) * n / (n - 1) * meanCurvSq + (n + 1) * c);
}

double boundT31(int n, double c, double meanCurvSq, double a) {
  requireEligible(n, "the delta^a bound");
  requireA(a);
  const double numer = n * (a + 1.0) - 3.0 * a - 1.0;
  const double denom = n * (a + 1.0) - 2.0 * a;
  return (static_cast<double>(n) * n - n - 2.0 * a) * c / 2.0 +
         numer / denom * (static_cast<double>(n) * n * meanCurvSq / 2.0);
}

double boundT32(int n, double c, double meanCurvSq) {
  requireEligible(n, "the delta' bound");
  return (static_cast<double>(n) * n - n + 2.0) * c / 2.0 +
         static_cast<double>(n) * n * meanCurvSq / 2.0;
}

double boundRemarkII(int n, double c, double meanCurvSq) {
  requireEligible(n, "the scalar curvature bound");
  return n * (n - 1) / 2.0 * (meanCurvSq + c);
}

std::vector<BoundVerdict> obstructionInterval(const PointData& point, const PlaneSearchConfig& cfg,
                                              const Tolerances& tol) {
  const double tau = scalarCurvature(point);
  const bool minimal = meanCurvatureSq(point) <= kMinimalTol;
  const double minK = extremalSectionalCurvature(point, ExtremumMode::Min, cfg).value;
  const double maxK = extremalSectionalCurvature(point, ExtremumMode::Max, cfg).value;
  return obstructionFrom(point, tau, minK, maxK, minimal, tol.eqTol);
}

InvariantReport fullReport(const PointData& input, const std::vector<double>& aValues,
                           const PlaneSearchConfig& cfg, const Tolerances& tol) {
  for (double a : aValues) requireA(a);
  const PointData point = validate(input, tol);
  const int n = point.n;
  const double c = point.c;

  InvariantReport report;
  report.n = n;
  report.m = point.m;
  report.c = c;
  report.theoremEligible = theoremEligible(point);
  report.tau = scalarCurvature(point);
  report.meanCurvSq = meanCurvatureSq(point);
  report.minimal = report.meanCurvSq <= kMinimalTol;
  report.minK = extremalSectionalCurvature(point, ExtremumMode::Min, cfg);
  report.maxK = extremalSectionalCurvature(point, ExtremumMode::Max, cfg);
  report.ricciMaxEigen = ricciMaxEigenvalue(point);

  const double tau = report.tau;
  const double h2 = report.meanCurvSq;
  const double eq = tol.eqTol;
  auto& out = report.verdicts;

  if (report.theoremEligible) {
    report.delta = tau - report.minK.value;
    report.deltaPrime = tau + report.maxK.value;
    out.push_back(makeVerdict(TheoremTag::T21, BoundSide::Upper, *report.delta,
                              boundT21(n, c, h2), eq));
    for (double a : aValues) {
      const double value = deltaAFrom(tau, report.minK.value, report.maxK.value, a);
      report.deltaA.push_back({a, value});
      BoundVerdict v = makeVerdict(TheoremTag::T31, BoundSide::Upper, value,
                                   boundT31(n, c, h2, a), eq);
      v.a = a;
      out.push_back(v);
    }
    out.push_back(makeVerdict(TheoremTag::T32, BoundSide::Upper, *report.deltaPrime,
                              boundT32(n, c, h2), eq));
    out.push_back(makeVerdict(TheoremTag::RemarkII, BoundSide::Upper, tau,
                              boundRemarkII(n, c, h2), eq));
  } else {
    const std::string reason = "requires n >= 3";
    out.push_back(notApplicableVerdict(TheoremTag::T21, BoundSide::Upper, reason));
    for (double a : aValues) {
      BoundVerdict v = notApplicableVerdict(TheoremTag::T31, BoundSide::Upper, reason);
      v.a = a;
      out.push_back(v);
    }
    out.push_back(notApplicableVerdict(TheoremTag::T32, BoundSide::Upper, reason));
    out.push_back(notApplicableVerdict(TheoremTag::RemarkII, BoundSide::Upper, reason));
  }

  for (BoundVerdict& v :
       obstructionFrom(point, tau, report.minK.value, report.maxK.value, report.minimal, eq)) {
    out.push_back(std::move(v));
  }

  if (report.minimal && c == 0.0) {
    out.push_back(makeVerdict(TheoremTag::Takahashi, BoundSide::Upper, report.ricciMaxEigen, 0.0, eq));
  } else {
    out.push_back(notApplicableVerdict(TheoremTag::Takahashi, BoundSide::Upper,
                                       "requires a minimal point in Euclidean space (c = 0)"));
  }
  return report;
}

EqualityShapeResult detectEqualityShape(const PointData& input, TheoremTag tag, double a,
                                        const Tolerances& tol) {
  const PointData point = validate(input, tol);
  requireEligible(point.n, "equality shape detection");
  switch (tag) {
    case TheoremTag::T21:
      return detectChenShape(point, tol);
    case TheoremTag::T31:
      requireA(a);
      return detectDiagonalShape(point, TheoremTag::T31, a, tol);
    case TheoremTag::RemarkII:
      return detectDiagonalShape(point, TheoremTag::T31, 0.0, tol);
    case TheoremTag::T32:
      return detectDiagonalShape(point, TheoremTag::T32, 0.0, tol);
    default:
      throw GeometryError(ErrorCode::InvalidParameter,
                          "no equality shape is defined for " + std::string(toString(tag)));
  }
}

}  // namespace chengap
