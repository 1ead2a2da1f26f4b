#include "chengap/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace chengap {

namespace {

[[noreturn]] void parseError(const std::string& message) {
  throw GeometryError(ErrorCode::ParseError, message);
}

Json vectorJson(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

double number(const Json& value, const std::string& where) {
  if (!value.is_number()) parseError(where + " must be a number");
  return value.get<double>();
}

int integer(const Json& value, const std::string& where) {
  if (!value.is_number()) parseError(where + " must be an integer");
  const double x = value.get<double>();
  if (x != std::floor(x) || std::abs(x) > 1e9) parseError(where + " must be an integer");
  return static_cast<int>(x);
}

Eigen::MatrixXd matrixFromJson(const Json& rows, int nRows, int nCols, const std::string& where) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != nRows) {
    parseError(where + " must have " + std::to_string(nRows) + " rows");
  }
  Eigen::MatrixXd out(nRows, nCols);
  for (int i = 0; i < nRows; ++i) {
    const Json& row = rows[i];
    if (!row.is_array() || static_cast<int>(row.size()) != nCols) {
      parseError(where + " row " + std::to_string(i) + " must have " + std::to_string(nCols) +
                 " entries");
    }
    for (int j = 0; j < nCols; ++j) out(i, j) = number(row[j], where);
  }
  return out;
}

void writeNumber(std::string& out, double value) {
  if (!std::isfinite(value)) {
    out += "null";
    return;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  out += buf;
}

void writeValue(std::string& out, const Json& doc, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string closePad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* newline = indent > 0 ? "\n" : "";
  switch (doc.type()) {
    case Json::value_t::object: {
      if (doc.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += newline;
      bool first = true;
      for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (!first) {
          out += ",";
          out += newline;
        }
        first = false;
        out += pad;
        out += Json(it.key()).dump();
        out += indent > 0 ? ": " : ":";
        writeValue(out, it.value(), indent, depth + 1);
      }
      out += newline;
      out += closePad;
      out += "}";
      return;
    }
    case Json::value_t::array: {
      if (doc.empty()) {
        out += "[]";
        return;
      }
      // numeric arrays stay on one line
      const bool flat = std::all_of(doc.begin(), doc.end(), [](const Json& e) {
        return e.is_number() || e.is_null() || e.is_boolean();
      });
      out += "[";
      bool first = true;
      for (const Json& e : doc) {
        if (!first) out += ",";
        if (!flat) {
          out += newline;
          out += pad;
        } else if (!first && indent > 0) {
          out += " ";
        }
        first = false;
        writeValue(out, e, indent, depth + 1);
      }
      if (!flat) {
        out += newline;
        out += closePad;
      }
      out += "]";
      return;
    }
    case Json::value_t::number_float:
      writeNumber(out, doc.get<double>());
      return;
    default:
      out += doc.dump();
      return;
  }
}

}  // namespace

Json toJson(const Eigen::MatrixXd& matrix) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) rows.push_back(vectorJson(matrix.row(i)));
  return rows;
}

Json toJson(const PointData& point) {
  Json ops = Json::array();
  for (const Eigen::MatrixXd& a : point.shapeOps) ops.push_back(toJson(a));
  return {{"n", point.n}, {"m", point.m}, {"c", point.c}, {"shape_ops", ops}};
}

PointData pointDataFromJson(const Json& doc) {
  if (!doc.is_object()) parseError("point data must be a JSON object");
  for (const char* key : {"n", "m", "c", "shape_ops"}) {
    if (!doc.contains(key)) parseError(std::string("missing field '") + key + "'");
  }
  PointData point;
  point.n = integer(doc["n"], "n");
  point.m = integer(doc["m"], "m");
  point.c = number(doc["c"], "c");
  const Json& ops = doc["shape_ops"];
  if (!ops.is_array()) parseError("shape_ops must be an array");
  if (point.n < 1 || point.n > 4096) parseError("n out of range");
  for (std::size_t r = 0; r < ops.size(); ++r) {
    point.shapeOps.push_back(
        matrixFromJson(ops[r], point.n, point.n, "shape_ops[" + std::to_string(r) + "]"));
  }
  return point;
}

namespace {

Json readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) parseError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    parseError("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace

PointData loadPointData(const std::string& path) { return pointDataFromJson(readFile(path)); }

Json toJson(const JetData& jet) {
  Json second = Json::array();
  for (const auto& row : jet.second) {
    Json r = Json::array();
    for (const Eigen::VectorXd& v : row) r.push_back(vectorJson(v));
    second.push_back(r);
  }
  return {{"first", toJson(jet.first)}, {"second", second}};
}

JetData jetFromJson(const Json& doc) {
  if (!doc.is_object() || !doc.contains("first") || !doc.contains("second")) {
    parseError("jet must be an object with 'first' and 'second'");
  }
  const Json& first = doc["first"];
  if (!first.is_array() || first.empty() || !first[0].is_array()) {
    parseError("'first' must be an m x n array");
  }
  const int m = static_cast<int>(first.size());
  const int n = static_cast<int>(first[0].size());
  JetData jet;
  jet.first = matrixFromJson(first, m, n, "first");
  const Json& second = doc["second"];
  if (!second.is_array() || static_cast<int>(second.size()) != n) {
    parseError("'second' must be an n x n x m array");
  }
  jet.second.assign(n, std::vector<Eigen::VectorXd>(n));
  for (int i = 0; i < n; ++i) {
    const Eigen::MatrixXd block = matrixFromJson(second[i], n, m, "second[" + std::to_string(i) + "]");
    for (int j = 0; j < n; ++j) jet.second[i][j] = block.row(j).transpose();
  }
  return jet;
}

JetData loadJet(const std::string& path) { return jetFromJson(readFile(path)); }

Json toJson(const TangentPlane& plane) {
  return {{"u", vectorJson(plane.u)}, {"v", vectorJson(plane.v)}};
}

Json toJson(const BoundVerdict& v) {
  Json out = {{"tag", std::string(toString(v.tag))},
              {"side", v.side == BoundSide::Upper ? "upper" : "lower"},
              {"applicable", v.applicable}};
  if (v.a) out["a"] = *v.a;
  if (v.applicable) {
    out["invariant"] = v.invariantValue;
    out["bound"] = v.boundValue;
    out["slack"] = v.slack;
    out["holds"] = v.holds;
    out["equality"] = v.equality;
  } else {
    out["reason"] = v.reason;
  }
  return out;
}

Json toJson(const InvariantReport& report) {
  Json verdicts = Json::array();
  for (const BoundVerdict& v : report.verdicts) verdicts.push_back(toJson(v));
  Json deltaA = Json::array();
  for (const AValue& d : report.deltaA) deltaA.push_back({{"a", d.a}, {"value", d.value}});
  return {{"n", report.n},
          {"m", report.m},
          {"c", report.c},
          {"theorem_eligible", report.theoremEligible},
          {"minimal", report.minimal},
          {"tau", report.tau},
          {"min_k", {{"value", report.minK.value}, {"plane", toJson(report.minK.plane)}}},
          {"max_k", {{"value", report.maxK.value}, {"plane", toJson(report.maxK.plane)}}},
          {"mean_curv_sq", report.meanCurvSq},
          {"delta", report.delta ? Json(*report.delta) : Json(nullptr)},
          {"delta_a", deltaA},
          {"delta_prime", report.deltaPrime ? Json(*report.deltaPrime) : Json(nullptr)},
          {"ricci_max_eigen", report.ricciMaxEigen},
          {"verdicts", verdicts},
          {"all_hold", report.allHold()}};
}

Json toJson(const QpCertificate& certificate) {
  return {{"first_order", certificate.firstOrder},
          {"second_order", certificate.secondOrder},
          {"max_restricted_eigenvalue", certificate.maxRestrictedEigenvalue},
          {"gradient_deviation", certificate.gradientDeviation}};
}

Json toJson(const QpSolution& solution) {
  return {{"maximizer", vectorJson(solution.maximizer)},
          {"b", solution.b},
          {"max_value", solution.maxValue},
          {"certified", solution.certified}};
}

Json toJson(const EqualityShapeResult& shape) {
  Json out = {{"matched", shape.matched}, {"residual", shape.residual}, {"frame", toJson(shape.frame)}};
  if (!shape.note.empty()) out["note"] = shape.note;
  return out;
}

std::string dumpJson(const Json& doc, int indent) {
  std::string out;
  writeValue(out, doc, indent, 0);
  return out;
}

}  // namespace chengap
