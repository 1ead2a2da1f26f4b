#pragma once

#include <Eigen/Dense>

#include "chengap/errors.hpp"

namespace chengap {

/// Maximize f(h) = sum_{i<j} h_i h_j - a h_1 h_2 over the hyperplane
/// P: h_1 + ... + h_n = kTotal. a in (-1, 1) is the delta^a family; a = -1 is
/// the delta' family, where the coupling becomes +h_1 h_2. a = 1 is rejected:
/// the maximizer stops being unique there.
struct QpProblem {
  int n = 3;
  double a = 0.0;
  double kTotal = 0.0;

  void check() const;
  bool primeFamily() const { return a == -1.0; }
};

struct QpSolution {
  Eigen::VectorXd maximizer;
  double b = 0.0;           // common value of the first two coordinates
  double maxValue = 0.0;
  bool certified = false;
};

struct QpCertificate {
  bool firstOrder = false;    // grad f is normal to P
  bool secondOrder = false;   // alpha form negative semidefinite on T P
  double maxRestrictedEigenvalue = 0.0;
  double gradientDeviation = 0.0;

  bool ok() const { return firstOrder && secondOrder; }
};

double qpObjective(const QpProblem& problem, const Eigen::VectorXd& h);

/// Partial derivatives written term by term: the a-coupling only touches
/// slots 1 and 2.
Eigen::VectorXd qpGradient(const QpProblem& problem, const Eigen::VectorXd& h);

/// Constant Hessian: zero diagonal, ones elsewhere, 1 - a at (1,2) and (2,1).
Eigen::MatrixXd qpHessian(const QpProblem& problem);

/// Second fundamental form h'(X, Y) of P as a level set of sum_i h_i. It
/// vanishes identically; computed so the alpha form carries the term.
Eigen::VectorXd traceHyperplaneSecondFundamentalForm(int n, const Eigen::VectorXd& x,
                                                     const Eigen::VectorXd& y);

QpSolution solveClosedForm(const QpProblem& problem);

/// alpha(X, Y) = Hess f(X, Y) + <h'(X, Y), grad f(p)> at the point p for
/// tangent X, Y. Throws NotTangent if a component sum exceeds 1e-10.
double alphaForm(const QpProblem& problem, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                 const Eigen::VectorXd& at);
double alphaForm(const QpProblem& problem, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// First- and second-order optimality at `candidate`.
QpCertificate certify(const QpProblem& problem, const Eigen::VectorXd& candidate);
bool certifyMaximum(const QpProblem& problem, const QpSolution& solution);

struct SamplerSpec {
  int globalSamples = 20000;   // Halton points over the box on P
  double resolution = 1e-3;    // final pattern-search step
};

/// Independent oracle: best f over a Halton sample of
/// {sum h = k, |h_i| <= 2|k| + 1} followed by a compass search down to
/// `resolution`. Only evaluated points are reported. n <= 6.
double bruteForceMax(const QpProblem& problem, const SamplerSpec& sampler = {});

}  // namespace chengap
