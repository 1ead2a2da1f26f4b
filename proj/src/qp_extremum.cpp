#include "chengap/qp_extremum.hpp"

#include <cmath>
#include <string>

#include "chengap/sequences.hpp"

namespace chengap {

namespace {

constexpr double kTangentTol = 1e-10;
constexpr double kCertifyTol = 1e-10;
constexpr int kOracleMaxDim = 6;

void requireTangent(const Eigen::VectorXd& x, int n, const char* name) {
  if (x.size() != n) {
    throw GeometryError(ErrorCode::InvalidParameter, std::string(name) + " must have n components");
  }
  if (std::abs(x.sum()) > kTangentTol * std::max(1.0, x.cwiseAbs().sum())) {
    throw GeometryError(ErrorCode::NotTangent,
                        std::string(name) + " is not tangent to the trace hyperplane");
  }
}

// Orthonormal basis of {x : sum x = 0}.
Eigen::MatrixXd tangentBasis(int n) {
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(ones);
  const Eigen::MatrixXd full = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  return full.rightCols(n - 1);
}

}  // namespace

void QpProblem::check() const {
  if (n < 3) throw GeometryError(ErrorCode::NotApplicable, "QP requires n >= 3");
  if (!std::isfinite(kTotal)) throw GeometryError(ErrorCode::NonFinite, "k must be finite");
  if (a == 1.0) {
    throw GeometryError(ErrorCode::AOutOfRange,
                        "a = 1 is excluded: the a -> 1 limit (Chen's inequality) has a "
                        "non-unique maximizer; only the limit value of the bound is available");
  }
  if (!(a >= -1.0 && a < 1.0)) {
    throw GeometryError(ErrorCode::AOutOfRange, "a must lie in [-1, 1)");
  }
}

double qpObjective(const QpProblem& problem, const Eigen::VectorXd& h) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    for (Eigen::Index j = i + 1; j < h.size(); ++j) sum += h(i) * h(j);
  }
  return sum - problem.a * h(0) * h(1);
}

Eigen::VectorXd qpGradient(const QpProblem& problem, const Eigen::VectorXd& h) {
  const Eigen::Index n = h.size();
  const double total = h.sum();
  Eigen::VectorXd g(n);
  g(0) = (total - h(0)) - problem.a * h(1);
  g(1) = (total - h(1)) - problem.a * h(0);
  for (Eigen::Index j = 2; j < n; ++j) g(j) = total - h(j);
  return g;
}

Eigen::MatrixXd qpHessian(const QpProblem& problem) {
  Eigen::MatrixXd hess = Eigen::MatrixXd::Ones(problem.n, problem.n);
  hess.diagonal().setZero();
  hess(0, 1) = hess(1, 0) = 1.0 - problem.a;
  return hess;
}

Eigen::VectorXd traceHyperplaneSecondFundamentalForm(int n, const Eigen::VectorXd& x,
                                                     const Eigen::VectorXd& y) {
  // P = g^{-1}(k) with g(h) = sum h_i: h'(X, Y) = -Hess g(X, Y) / |grad g| * nu.
  const Eigen::MatrixXd constraintHessian = Eigen::MatrixXd::Zero(n, n);
  const Eigen::VectorXd gradG = Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd nu = gradG.normalized();
  return -(x.dot(constraintHessian * y) / gradG.norm()) * nu;
}

QpSolution solveClosedForm(const QpProblem& problem) {
  problem.check();
  const int n = problem.n;
  const double a = problem.a;
  const double k = problem.kTotal;

  QpSolution sol;
  sol.maximizer = Eigen::VectorXd::Zero(n);
  if (problem.primeFamily()) {
    sol.b = k / 2.0;
    sol.maximizer(0) = sol.maximizer(1) = sol.b;
    sol.maxValue = k * k / 2.0;
  } else {
    const double denom = n * (a + 1.0) - 2.0 * a;
    sol.b = k / denom;
    sol.maximizer.setConstant(sol.b * (a + 1.0));
    sol.maximizer(0) = sol.maximizer(1) = sol.b;
    sol.maxValue = k * k / (2.0 * denom) * (n * (a + 1.0) - 3.0 * a - 1.0);
  }
  sol.certified = certifyMaximum(problem, sol);
  return sol;
}

double alphaForm(const QpProblem& problem, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                 const Eigen::VectorXd& at) {
  problem.check();
  requireTangent(x, problem.n, "X");
  requireTangent(y, problem.n, "Y");
  const Eigen::VectorXd second = traceHyperplaneSecondFundamentalForm(problem.n, x, y);
  if (second.cwiseAbs().maxCoeff() != 0.0) {
    throw GeometryError(ErrorCode::InvalidParameter,
                        "trace hyperplane must be totally geodesic");
  }
  return x.dot(qpHessian(problem) * y) + second.dot(qpGradient(problem, at));
}

double alphaForm(const QpProblem& problem, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  problem.check();
  Eigen::VectorXd centroid = Eigen::VectorXd::Constant(problem.n, problem.kTotal / problem.n);
  return alphaForm(problem, x, y, centroid);
}

QpCertificate certify(const QpProblem& problem, const Eigen::VectorXd& candidate) {
  problem.check();
  const int n = problem.n;
  if (candidate.size() != n) {
    throw GeometryError(ErrorCode::ShapeSizeMismatch, "candidate must have n entries");
  }
  QpCertificate cert;

  // First order: the candidate lies on P and grad f is a multiple of (1, ..., 1).
  const bool onP = std::abs(candidate.sum() - problem.kTotal) <=
                   kCertifyTol * std::max(1.0, candidate.cwiseAbs().sum());
  const Eigen::VectorXd grad = qpGradient(problem, candidate);
  const Eigen::VectorXd tangential = grad.array() - grad.mean();
  cert.gradientDeviation = tangential.cwiseAbs().maxCoeff();
  cert.firstOrder =
      onP && cert.gradientDeviation <= kCertifyTol * std::max(1.0, grad.cwiseAbs().maxCoeff());

  // Second order: alpha restricted to T P, assembled entrywise from the form.
  const Eigen::MatrixXd basis = tangentBasis(n);
  Eigen::MatrixXd restricted(n - 1, n - 1);
  for (int i = 0; i < n - 1; ++i) {
    for (int j = 0; j < n - 1; ++j) {
      restricted(i, j) = alphaForm(problem, basis.col(i), basis.col(j), candidate);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (restricted + restricted.transpose()),
                                                     Eigen::EigenvaluesOnly);
  cert.maxRestrictedEigenvalue = eig.eigenvalues().maxCoeff();
  cert.secondOrder = cert.maxRestrictedEigenvalue <= kCertifyTol;
  return cert;
}

bool certifyMaximum(const QpProblem& problem, const QpSolution& solution) {
  return certify(problem, solution.maximizer).ok();
}

double bruteForceMax(const QpProblem& problem, const SamplerSpec& sampler) {
  problem.check();
  const int n = problem.n;
  if (n > kOracleMaxDim) {
    throw GeometryError(ErrorCode::DimensionTooLarge,
                        "QP oracle is limited to n <= " + std::to_string(kOracleMaxDim));
  }
  if (sampler.globalSamples < 1 || !(sampler.resolution > 0.0)) {
    throw GeometryError(ErrorCode::InvalidParameter, "sampler needs samples >= 1, resolution > 0");
  }
  const double k = problem.kTotal;
  const double half = 2.0 * std::abs(k) + 1.0;

  // Free coordinates h_1..h_{n-1}; h_n closes the constraint.
  auto complete = [&](const Eigen::VectorXd& free) {
    Eigen::VectorXd h(n);
    h.head(n - 1) = free;
    h(n - 1) = k - free.sum();
    return h;
  };
  auto inBox = [&](const Eigen::VectorXd& h) { return h.cwiseAbs().maxCoeff() <= half; };

  Eigen::VectorXd best = Eigen::VectorXd::Zero(n - 1);
  best(0) = k;  // h = (k, 0, ..., 0) is feasible
  double bestValue = qpObjective(problem, complete(best));
  for (int s = 1; s <= sampler.globalSamples; ++s) {
    const Eigen::VectorXd u = haltonPoint(static_cast<std::uint64_t>(s), n - 1);
    const Eigen::VectorXd free = (2.0 * u.array() - 1.0) * half;
    const Eigen::VectorXd h = complete(free);
    if (!inBox(h)) continue;
    const double value = qpObjective(problem, h);
    if (value > bestValue) {
      bestValue = value;
      best = free;
    }
  }

  // Compass search on the free coordinates; the step starts at the sample
  // spacing and halves until it is below the resolution.
  double step = 2.0 * half / std::pow(static_cast<double>(sampler.globalSamples), 1.0 / (n - 1));
  while (step >= sampler.resolution * 0.5) {
    bool improved = false;
    for (int i = 0; i < n - 1; ++i) {
      for (double sign : {1.0, -1.0}) {
        Eigen::VectorXd trial = best;
        trial(i) += sign * step;
        const Eigen::VectorXd h = complete(trial);
        if (!inBox(h)) continue;
        const double value = qpObjective(problem, h);
        if (value > bestValue) {
          bestValue = value;
          best = trial;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return bestValue;
}

}  // namespace chengap
