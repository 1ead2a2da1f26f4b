#include "chengap/immersion.hpp"

#include <cmath>
#include <string>

namespace chengap {

namespace {

constexpr double kDefaultAngle = 1.2;

double param(const ImmersionSpec& spec, const std::string& name, double fallback) {
  auto it = spec.params.find(name);
  return it == spec.params.end() ? fallback : it->second;
}

int intParam(const ImmersionSpec& spec, const std::string& name, int fallback, int minimum) {
  const double value = param(spec, name, fallback);
  if (value != std::floor(value) || value < minimum || value > 64) {
    throw GeometryError(ErrorCode::InvalidParameter,
                        name + " must be an integer >= " + std::to_string(minimum));
  }
  return static_cast<int>(value);
}

Eigen::VectorXd chartPoint(const ImmersionSpec& spec, int n, double fallback) {
  Eigen::VectorXd at(n);
  for (int i = 0; i < n; ++i) at(i) = param(spec, "t" + std::to_string(i + 1), fallback);
  return at;
}

// Round sphere of radius R in R^{d+1} in hyperspherical angles.
Eigen::VectorXd sphereChart(const Eigen::VectorXd& theta, double radius) {
  const Eigen::Index d = theta.size();
  Eigen::VectorXd x(d + 1);
  double sines = radius;
  for (Eigen::Index i = 0; i < d; ++i) {
    x(i) = sines * std::cos(theta(i));
    sines *= std::sin(theta(i));
  }
  x(d) = sines;
  return x;
}

// Chart coordinates t1..tn are accepted for every builtin, plus `indexed`1..n
// when given (graph coefficients).
void rejectUnknownParams(const ImmersionSpec& spec, const BuiltinInfo& info, int n,
                         const std::string& indexed = "") {
  for (const auto& [name, value] : spec.params) {
    bool known = false;
    for (const ParameterSchema& p : info.params) known = known || p.name == name;
    for (int i = 1; i <= n; ++i) {
      known = known || name == "t" + std::to_string(i);
      if (!indexed.empty()) known = known || name == indexed + std::to_string(i);
    }
    if (!known) {
      throw GeometryError(ErrorCode::InvalidParameter,
                          "unknown parameter '" + name + "' for builtin " + info.name);
    }
  }
}

const BuiltinInfo& info(const std::string& name) {
  static const std::vector<BuiltinInfo> catalog = builtinCatalog();
  for (const BuiltinInfo& b : catalog) {
    if (b.name == name) return b;
  }
  throw GeometryError(ErrorCode::UnknownBuiltin, "no builtin immersion named '" + name + "'");
}

// Minimal hypersurface of revolution in R^4 with neck radius r0; the profile
// slope is z'(r) = r0^2 / sqrt(r^4 - r0^4). Chart (r, phi, psi) ->
// (r * omega(phi, psi), z(r)); z itself never enters the jet.
JetData catenoidJet(double r0, double r, double phi, double psi) {
  const double root = std::sqrt(r * r * r * r - r0 * r0 * r0 * r0);
  const double dz = r0 * r0 / root;
  const double ddz = -2.0 * r0 * r0 * r * r * r / (root * root * root);

  const double cf = std::cos(phi), sf = std::sin(phi);
  const double cs = std::cos(psi), ss = std::sin(psi);
  const Eigen::Vector3d omega(cf, sf * cs, sf * ss);
  const Eigen::Vector3d dPhi(-sf, cf * cs, cf * ss);
  const Eigen::Vector3d dPsi(0.0, -sf * ss, sf * cs);
  const Eigen::Vector3d dPhiPhi = -omega;
  const Eigen::Vector3d dPhiPsi(0.0, -cf * ss, cf * cs);
  const Eigen::Vector3d dPsiPsi(0.0, -sf * cs, -sf * ss);

  auto lift = [](const Eigen::Vector3d& xyz, double height) {
    Eigen::VectorXd v(4);
    v << xyz, height;
    return v;
  };

  JetData jet;
  jet.first.resize(4, 3);
  jet.first.col(0) = lift(omega, dz);
  jet.first.col(1) = lift(r * dPhi, 0.0);
  jet.first.col(2) = lift(r * dPsi, 0.0);
  jet.second.assign(3, std::vector<Eigen::VectorXd>(3));
  jet.second[0][0] = lift(Eigen::Vector3d::Zero(), ddz);
  jet.second[0][1] = jet.second[1][0] = lift(dPhi, 0.0);
  jet.second[0][2] = jet.second[2][0] = lift(dPsi, 0.0);
  jet.second[1][1] = lift(r * dPhiPhi, 0.0);
  jet.second[1][2] = jet.second[2][1] = lift(r * dPhiPsi, 0.0);
  jet.second[2][2] = lift(r * dPsiPsi, 0.0);
  return jet;
}

}  // namespace

std::vector<BuiltinInfo> builtinCatalog() {
  return {
      {"graph",
       "graph (u, g(u)) in R^{n+1}, g = sum_i q_i u_i^2 + cross u_1 u_2 + cubic u_1^3",
       {{"n", 3, "intrinsic dimension, integer >= 2"},
        {"q1", 0, "coefficient of u_1^2 (likewise q2..qn)"},
        {"cross", 0, "coefficient of u_1 u_2"},
        {"cubic", 0, "coefficient of u_1^3"}},
       false},
      {"sphere",
       "round sphere S^n(R) in R^{n+1}, hyperspherical angles t1..tn",
       {{"n", 3, "intrinsic dimension, integer >= 2"}, {"radius", 1, "radius R > 0"}},
       false},
      {"product-spheres",
       "S^p(r1) x S^q(r2) in R^{p+q+2}, angles t1..t(p+q)",
       {{"p", 1, "dimension of the first factor, integer >= 1"},
        {"q", 2, "dimension of the second factor, integer >= 1"},
        {"r1", 1, "first radius > 0"},
        {"r2", 1, "second radius > 0"}},
       false},
      {"scaled-catenoid-3d",
       "minimal rotation hypersurface in R^4 with neck radius scale, analytic jet at (r, phi, psi)",
       {{"scale", 1, "neck radius r0 > 0"},
        {"r", 1.5, "radial coordinate r > scale"},
        {"phi", 1.2, "polar angle"},
        {"psi", 1.2, "azimuthal angle"}},
       true},
  };
}

ResolvedImmersion resolve(const ImmersionSpec& spec) {
  if (!(spec.step > 0.0)) throw GeometryError(ErrorCode::InvalidParameter, "step must be > 0");

  ResolvedImmersion out;
  if (spec.kind == "tabulated") {
    if (!spec.jet) throw GeometryError(ErrorCode::InvalidParameter, "tabulated kind needs a jet");
    out.n = spec.jet->n();
    out.m = spec.jet->m();
    out.exactJet = spec.jet;
    return out;
  }

  const BuiltinInfo& b = info(spec.kind);
  if (spec.kind == "graph") {
    const int n = intParam(spec, "n", 3, 2);
    rejectUnknownParams(spec, b, n, "q");
    Eigen::VectorXd q(n);
    for (int i = 0; i < n; ++i) q(i) = param(spec, "q" + std::to_string(i + 1), 0.0);
    const double cross = param(spec, "cross", 0.0);
    const double cubic = param(spec, "cubic", 0.0);
    out.n = n;
    out.m = n + 1;
    out.at = chartPoint(spec, n, 0.0);
    out.map = [q, cross, cubic, n](const Eigen::VectorXd& u) {
      Eigen::VectorXd x(n + 1);
      x.head(n) = u;
      double height = 0.0;
      for (int i = 0; i < n; ++i) height += q(i) * u(i) * u(i);
      height += cross * u(0) * u(1) + cubic * u(0) * u(0) * u(0);
      x(n) = height;
      return x;
    };
  } else if (spec.kind == "sphere") {
    const int n = intParam(spec, "n", 3, 2);
    rejectUnknownParams(spec, b, n);
    const double radius = param(spec, "radius", 1.0);
    if (!(radius > 0.0)) throw GeometryError(ErrorCode::InvalidParameter, "radius must be > 0");
    out.n = n;
    out.m = n + 1;
    out.at = chartPoint(spec, n, kDefaultAngle);
    out.map = [radius](const Eigen::VectorXd& theta) { return sphereChart(theta, radius); };
  } else if (spec.kind == "product-spheres") {
    const int p = intParam(spec, "p", 1, 1);
    const int q = intParam(spec, "q", 2, 1);
    rejectUnknownParams(spec, b, p + q);
    const double r1 = param(spec, "r1", 1.0);
    const double r2 = param(spec, "r2", 1.0);
    if (!(r1 > 0.0) || !(r2 > 0.0)) {
      throw GeometryError(ErrorCode::InvalidParameter, "radii must be > 0");
    }
    out.n = p + q;
    out.m = p + q + 2;
    out.at = chartPoint(spec, p + q, kDefaultAngle);
    out.map = [p, q, r1, r2](const Eigen::VectorXd& t) {
      Eigen::VectorXd x(p + q + 2);
      x.head(p + 1) = sphereChart(t.head(p), r1);
      x.tail(q + 1) = sphereChart(t.tail(q), r2);
      return x;
    };
  } else {  // scaled-catenoid-3d
    rejectUnknownParams(spec, b, 0);
    const double r0 = param(spec, "scale", 1.0);
    const double r = param(spec, "r", 1.5 * r0);
    if (!(r0 > 0.0) || !(r > r0)) {
      throw GeometryError(ErrorCode::InvalidParameter, "catenoid needs scale > 0 and r > scale");
    }
    out.n = 3;
    out.m = 4;
    out.at = Eigen::Vector3d(r, param(spec, "phi", 1.2), param(spec, "psi", 1.2));
    out.exactJet = catenoidJet(r0, r, out.at(1), out.at(2));
  }
  return out;
}

void checkJetRank(const JetData& jet, const Tolerances& tol) {
  if (jet.n() < 1 || jet.m() <= jet.n()) {
    throw GeometryError(ErrorCode::InvalidParameter, "jet needs m > n >= 1");
  }
  if (static_cast<int>(jet.second.size()) != jet.n()) {
    throw GeometryError(ErrorCode::InvalidParameter, "second derivatives must be n x n");
  }
  for (const auto& row : jet.second) {
    if (static_cast<int>(row.size()) != jet.n()) {
      throw GeometryError(ErrorCode::InvalidParameter, "second derivatives must be n x n");
    }
    for (const Eigen::VectorXd& v : row) {
      if (v.size() != jet.m()) {
        throw GeometryError(ErrorCode::InvalidParameter, "second derivatives must be m-vectors");
      }
      if (!v.allFinite()) throw GeometryError(ErrorCode::NonFinite, "non-finite jet entry");
    }
  }
  if (!jet.first.allFinite()) throw GeometryError(ErrorCode::NonFinite, "non-finite jet entry");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jet.first);
  const auto& sv = svd.singularValues();
  if (!(sv(sv.size() - 1) > tol.rankTol * std::max(1.0, sv(0)))) {
    throw GeometryError(ErrorCode::RankDeficient, "differential of the immersion drops rank");
  }
}

JetData finiteDifferenceJet(const ImmersionMap& map, const Eigen::VectorXd& at, double step,
                            const Tolerances& tol) {
  if (!(step > 0.0)) throw GeometryError(ErrorCode::InvalidParameter, "step must be > 0");
  const int n = static_cast<int>(at.size());
  const Eigen::VectorXd center = map(at);
  const int m = static_cast<int>(center.size());
  auto shifted = [&](int i, double si, int j, double sj) {
    Eigen::VectorXd x = at;
    x(i) += si * step;
    x(j) += sj * step;
    return map(x);
  };

  JetData jet;
  jet.first.resize(m, n);
  jet.second.assign(n, std::vector<Eigen::VectorXd>(n));
  const double h2 = step * step;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd plus = at, minus = at;
    plus(i) += step;
    minus(i) -= step;
    const Eigen::VectorXd fp = map(plus);
    const Eigen::VectorXd fm = map(minus);
    jet.first.col(i) = (fp - fm) / (2.0 * step);
    jet.second[i][i] = (fp - 2.0 * center + fm) / h2;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      jet.second[i][j] = (shifted(i, 1, j, 1) - shifted(i, 1, j, -1) - shifted(i, -1, j, 1) +
                          shifted(i, -1, j, -1)) /
                         (4.0 * h2);
      jet.second[j][i] = jet.second[i][j];
    }
  }
  checkJetRank(jet, tol);
  return jet;
}

JetData sampleJet(const ImmersionSpec& spec, const Tolerances& tol) {
  const ResolvedImmersion resolved = resolve(spec);
  if (resolved.exactJet) {
    checkJetRank(*resolved.exactJet, tol);
    return *resolved.exactJet;
  }
  return finiteDifferenceJet(resolved.map, resolved.at, spec.step, tol);
}

PointData jetToPointData(const JetData& jet, double c, const Tolerances& tol) {
  checkJetRank(jet, tol);
  const int n = jet.n();
  const int m = jet.m();

  // first = T R with T orthonormal; e_a = sum_i dX/du_i (R^-1)_{ia} = T(:, a).
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(jet.first);
  const Eigen::MatrixXd tangent = qr.householderQ() * Eigen::MatrixXd::Identity(m, n);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd rInv = r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(n, n));

  // Normal frame: pivoted QR of the normal projector.
  const Eigen::MatrixXd projector = Eigen::MatrixXd::Identity(m, m) - tangent * tangent.transpose();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> pivoted(projector);
  Eigen::MatrixXd normals = pivoted.householderQ() * Eigen::MatrixXd::Identity(m, m - n);
  for (int r2 = 0; r2 < m - n; ++r2) {
    Eigen::VectorXd nu = normals.col(r2);
    nu -= tangent * (tangent.transpose() * nu);
    for (int s = 0; s < r2; ++s) nu -= normals.col(s).dot(nu) * normals.col(s);
    normals.col(r2) = nu.normalized();
  }

  PointData point;
  point.n = n;
  point.m = m;
  point.c = c;
  for (int k = 0; k < m - n; ++k) {
    Eigen::VectorXd nu = normals.col(k);
    Eigen::MatrixXd coords(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) coords(i, j) = jet.second[i][j].dot(nu);
    }
    Eigen::MatrixXd a = rInv.transpose() * coords * rInv;
    a = 0.5 * (a + a.transpose()).eval();

    const double trace = sequentialTrace(a);
    double sign = 1.0;
    if (std::abs(trace) > 1e-9 * (1.0 + a.cwiseAbs().maxCoeff())) {
      sign = trace < 0.0 ? -1.0 : 1.0;
    } else {
      Eigen::Index largest = 0;
      nu.cwiseAbs().maxCoeff(&largest);
      sign = nu(largest) < 0.0 ? -1.0 : 1.0;
    }
    point.shapeOps.push_back(sign * a);
  }
  return validate(point, tol);
}

}  // namespace chengap
