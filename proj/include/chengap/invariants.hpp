#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "chengap/curvature.hpp"
#include "chengap/point_data.hpp"

namespace chengap {

enum class TheoremTag { T21, T31, T32, C21, C31, C32, RemarkII, Takahashi };

/// "T2.1", "T3.1", ... as used in every serialized document.
std::string_view toString(TheoremTag tag);
std::optional<TheoremTag> theoremTagFromString(std::string_view text);

/// Upper: invariant <= bound, slack = bound - invariant.
/// Lower: invariant >= bound, slack = invariant - bound.
enum class BoundSide { Upper, Lower };

struct BoundVerdict {
  TheoremTag tag = TheoremTag::T21;
  BoundSide side = BoundSide::Upper;
  std::optional<double> a;  // T3.1 only
  bool applicable = true;
  std::string reason;       // why not applicable
  double invariantValue = 0.0;
  double boundValue = 0.0;
  double slack = 0.0;
  bool holds = true;        // slack >= -eqTol
  bool equality = false;    // |slack| <= eqTol
};

BoundVerdict makeVerdict(TheoremTag tag, BoundSide side, double invariantValue, double boundValue,
                         double eqTol);
BoundVerdict notApplicableVerdict(TheoremTag tag, BoundSide side, std::string reason);

struct AValue {
  double a = 0.0;
  double value = 0.0;
};

struct InvariantReport {
  int n = 0;
  int m = 0;
  double c = 0.0;
  bool theoremEligible = false;
  bool minimal = false;
  double tau = 0.0;
  PlaneExtremum minK;
  PlaneExtremum maxK;
  double meanCurvSq = 0.0;
  std::optional<double> delta;
  std::vector<AValue> deltaA;
  std::optional<double> deltaPrime;
  double ricciMaxEigen = 0.0;
  std::vector<BoundVerdict> verdicts;

  /// First verdict with this tag (and a, and side, when given).
  const BoundVerdict* find(TheoremTag tag, std::optional<double> a = std::nullopt,
                           std::optional<BoundSide> side = std::nullopt) const;
  bool allHold() const;
};

// Minimality gate for the obstruction checks.
inline constexpr double kMinimalTol = 1e-12;

double chenDelta(const PointData& point, const PlaneSearchConfig& cfg = {});
double chenDeltaA(const PointData& point, double a, const PlaneSearchConfig& cfg = {});
double chenDeltaPrime(const PointData& point, const PlaneSearchConfig& cfg = {});

/// delta^a from already computed tau and extremal curvatures; a = 0 takes the
/// min branch, where the a-term vanishes anyway.
double deltaAFrom(double tau, double minK, double maxK, double a);

double boundT21(int n, double c, double meanCurvSq);
double boundT31(int n, double c, double meanCurvSq, double a);
double boundT32(int n, double c, double meanCurvSq);
/// tau <= n(n-1)/2 (|H|^2 + c), i.e. boundT31 at a = 0.
double boundRemarkII(int n, double c, double meanCurvSq);

/// Two-sided pinching of the sectional curvature at a minimal point:
/// C2.1 (lower), C3.1 (both sides) and, for c = 0, C3.2 (both sides).
/// Verdicts are marked not applicable for n < 3 or non-minimal data.
std::vector<BoundVerdict> obstructionInterval(const PointData& point,
                                              const PlaneSearchConfig& cfg = {},
                                              const Tolerances& tol = {});

InvariantReport fullReport(const PointData& point, const std::vector<double>& aValues,
                           const PlaneSearchConfig& cfg = {}, const Tolerances& tol = {});

struct EqualityShapeResult {
  bool matched = false;
  Eigen::MatrixXd frame;  // columns: tangent frame, distinguished pair first
  double residual = 0.0;
  std::string note;
};

/// Looks for one orthonormal tangent frame in which every shape operator
/// takes the equality pattern of the given theorem (T2.1, T3.1 with a,
/// T3.2, or RemarkII as T3.1 at a = 0).
EqualityShapeResult detectEqualityShape(const PointData& point, TheoremTag tag, double a = 0.0,
                                        const Tolerances& tol = {});

}  // namespace chengap
