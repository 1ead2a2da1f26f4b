#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chengap/point_data.hpp"

namespace chengap {

/// 2-jet of an immersion at a point: first(:, i) = dX/du_i and
/// second[i][j] = d^2X/du_i du_j.
struct JetData {
  Eigen::MatrixXd first;
  std::vector<std::vector<Eigen::VectorXd>> second;

  int n() const { return static_cast<int>(first.cols()); }
  int m() const { return static_cast<int>(first.rows()); }
};

using ImmersionMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct ParameterSchema {
  std::string name;
  double defaultValue = 0.0;
  std::string description;
};

struct BuiltinInfo {
  std::string name;
  std::string description;
  std::vector<ParameterSchema> params;
  bool tabulated = false;  // jet is produced analytically, not by differencing
};

std::vector<BuiltinInfo> builtinCatalog();

struct ImmersionSpec {
  std::string kind;                      // builtin name, or "tabulated"
  std::map<std::string, double> params;  // overrides of the schema defaults
  double step = 1e-3;                    // central-difference step
  std::optional<JetData> jet;            // for kind == "tabulated"
};

/// Builtin immersion with its chart point; `map` is empty for tabulated kinds.
struct ResolvedImmersion {
  int n = 0;
  int m = 0;
  ImmersionMap map;
  Eigen::VectorXd at;
  std::optional<JetData> exactJet;
};

ResolvedImmersion resolve(const ImmersionSpec& spec);

/// Central differences, O(step^2). Throws RankDeficient.
JetData finiteDifferenceJet(const ImmersionMap& map, const Eigen::VectorXd& at, double step,
                            const Tolerances& tol = {});

JetData sampleJet(const ImmersionSpec& spec, const Tolerances& tol = {});

/// Throws RankDeficient unless the differential has rank n.
void checkJetRank(const JetData& jet, const Tolerances& tol = {});

/// Second fundamental form in an orthonormal tangent frame (Householder QR of
/// the differential) and a normal frame completed by column-pivoted QR of the
/// normal projector. Each normal is oriented so trace(A_r) >= 0; for
/// trace-free operators its largest component is made positive.
PointData jetToPointData(const JetData& jet, double c = 0.0, const Tolerances& tol = {});

}  // namespace chengap
