#include "chengap/json_io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <limits>

#include "oracles.hpp"

namespace chengap {
namespace {

TEST(PointDataJson, RoundTripIsExact) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const PointData p = randomPointData(seed, 3 + seed % 3, 1 + seed % 3, seed % 2 == 0, 2.0, -0.3);
    const Json doc = Json::parse(dumpJson(toJson(p)));
    const PointData back = pointDataFromJson(doc);
    EXPECT_EQ(back.n, p.n);
    EXPECT_EQ(back.m, p.m);
    EXPECT_EQ(back.c, p.c);
    ASSERT_EQ(back.shapeOps.size(), p.shapeOps.size());
    for (std::size_t r = 0; r < p.shapeOps.size(); ++r) EXPECT_EQ(back.shapeOps[r], p.shapeOps[r]);
  }
}

TEST(PointDataJson, Errors) {
  auto code = [](const char* text) {
    try {
      pointDataFromJson(Json::parse(text));
    } catch (const GeometryError& e) {
      return e.code();
    }
    return ErrorCode::NotApplicable;
  };
  EXPECT_EQ(code("[1, 2]"), ErrorCode::ParseError);
  EXPECT_EQ(code(R"({"n": 3, "m": 4, "c": 0})"), ErrorCode::ParseError);
  EXPECT_EQ(code(R"({"n": 3.5, "m": 4, "c": 0, "shape_ops": []})"), ErrorCode::ParseError);
  EXPECT_EQ(code(R"({"n": 1e30, "m": 4, "c": 0, "shape_ops": []})"), ErrorCode::ParseError);
  EXPECT_EQ(code(R"({"n": 2, "m": 3, "c": "zero", "shape_ops": []})"), ErrorCode::ParseError);
  EXPECT_EQ(code(R"({"n": 2, "m": 3, "c": 0, "shape_ops": [[[1, 0]]]})"), ErrorCode::ParseError);
  EXPECT_EQ(code(R"({"n": 2, "m": 3, "c": 0, "shape_ops": [[[1, 0], [0, "x"]]]})"), ErrorCode::ParseError);
  // integral floats are accepted as dimensions
  EXPECT_EQ(pointDataFromJson(Json::parse(R"({"n": 2.0, "m": 3, "c": 0, "shape_ops": [[[1, 0], [0, 1]]]})")).n, 2);
}

TEST(PointDataJson, LoadReportsMissingAndMalformedFiles) {
  EXPECT_THROW(loadPointData("/nonexistent/point.json"), GeometryError);
  EXPECT_THROW(loadPointData(CHENGAP_TEST_DATA "/malformed.json"), GeometryError);
  const PointData p = loadPointData(CHENGAP_TEST_DATA "/umbilic.json");
  EXPECT_EQ(p.shapeOps[0], Eigen::MatrixXd::Identity(3, 3));
}

TEST(JetJson, RoundTrip) {
  JetData jet;
  jet.first = Eigen::MatrixXd::Random(5, 3);
  jet.second.assign(3, std::vector<Eigen::VectorXd>(3));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) jet.second[i][j] = Eigen::VectorXd::Random(5);
  }
  const JetData back = jetFromJson(Json::parse(dumpJson(toJson(jet))));
  EXPECT_EQ(back.first, jet.first);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_EQ(back.second[i][j], jet.second[i][j]);
  }
  EXPECT_THROW(jetFromJson(Json::parse(R"({"first": [[1, 0]], "second": []})")), GeometryError);
  EXPECT_EQ(loadJet(CHENGAP_TEST_DATA "/flat_jet.json").m(), 4);
}

TEST(DumpJson, NumbersKeepSeventeenDigits) {
  const double third = 1.0 / 3.0;
  const std::string text = dumpJson(Json{{"x", third}, {"y", 2.0}, {"z", 7}});
  EXPECT_NE(text.find("0.33333333333333331"), std::string::npos) << text;
  EXPECT_EQ(Json::parse(text)["x"].get<double>(), third);
  EXPECT_NE(text.find("\"y\": 2"), std::string::npos);
}

TEST(DumpJson, NonFiniteBecomesNullAndKeysAreSorted) {
  const Json doc = {{"b", std::numeric_limits<double>::quiet_NaN()}, {"a", std::vector<double>{1.5, -2.0}}};
  EXPECT_EQ(dumpJson(doc), "{\n  \"a\": [1.5, -2],\n  \"b\": null\n}");
  EXPECT_EQ(dumpJson(doc, 0), "{\"a\":[1.5,-2],\"b\":null}");
  EXPECT_EQ(dumpJson(Json::array()), "[]");
  EXPECT_EQ(dumpJson(Json::object()), "{}");
}

TEST(ReportJson, CarriesVerdictsAndNotApplicableReasons) {
  const InvariantReport r = fullReport(testing::makePoint(3, 0.0, {Eigen::MatrixXd::Identity(3, 3)}), {0.0});
  const Json doc = Json::parse(dumpJson(toJson(r)));
  EXPECT_EQ(doc["n"], 3);
  EXPECT_NEAR(doc["tau"].get<double>(), 3.0, 1e-15);
  EXPECT_EQ(doc["min_k"]["plane"]["u"].size(), 3u);
  bool sawReason = false;
  bool sawEquality = false;
  for (const Json& v : doc["verdicts"]) {
    if (!v["applicable"].get<bool>()) sawReason = sawReason || v.contains("reason");
    if (v["tag"] == "RemarkII") sawEquality = v["equality"].get<bool>();
  }
  EXPECT_TRUE(sawReason);
  EXPECT_TRUE(sawEquality);
  EXPECT_TRUE(doc["all_hold"].get<bool>());
}

TEST(ReportJson, SurfaceReportHasNullInvariants) {
  const InvariantReport r = fullReport(testing::makePoint(2, 0.0, {testing::diag({1, -1})}), {});
  const Json doc = toJson(r);
  EXPECT_TRUE(doc["delta"].is_null());
  EXPECT_TRUE(doc["delta_prime"].is_null());
}

TEST(QpJson, Fields) {
  const QpProblem p{3, 0.5, 7.0};
  const QpSolution s = solveClosedForm(p);
  const Json doc = toJson(s);
  EXPECT_EQ(doc["max_value"].get<double>(), s.maxValue);
  EXPECT_TRUE(doc["certified"].get<bool>());
  const Json cert = toJson(certify(p, s.maximizer));
  EXPECT_TRUE(cert["first_order"].get<bool>());
  EXPECT_TRUE(cert["second_order"].get<bool>());
}

}  // namespace
}  // namespace chengap
