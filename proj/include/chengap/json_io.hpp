#pragma once

#include <string>

#include <json.hpp>

#include "chengap/immersion.hpp"
#include "chengap/invariants.hpp"
#include "chengap/point_data.hpp"
#include "chengap/qp_extremum.hpp"

namespace chengap {

using Json = nlohmann::json;

/// {"n":int,"m":int,"c":float,"shape_ops":[[[row-major floats]]]}
Json toJson(const PointData& point);
PointData pointDataFromJson(const Json& doc);
PointData loadPointData(const std::string& path);

/// {"first": m x n, "second": n x n x m}
Json toJson(const JetData& jet);
JetData jetFromJson(const Json& doc);
JetData loadJet(const std::string& path);

Json toJson(const TangentPlane& plane);
Json toJson(const BoundVerdict& verdict);
Json toJson(const InvariantReport& report);
Json toJson(const QpSolution& solution);
Json toJson(const QpCertificate& certificate);
Json toJson(const EqualityShapeResult& shape);
Json toJson(const Eigen::MatrixXd& matrix);

/// Serializer used for every emitted document: floats with 17 significant
/// digits, non-finite values as null, object keys in insertion-independent
/// sorted order.
std::string dumpJson(const Json& doc, int indent = 2);

}  // namespace chengap
