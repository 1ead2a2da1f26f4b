#include "chengap/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <ostream>
#include <thread>
#include <tuple>

#include <CLI11.hpp>

#include "chengap/invariants.hpp"
#include "chengap/qp_extremum.hpp"

namespace chengap::cli {

namespace {

constexpr std::size_t kMaxListedFailures = 20;

CommandResult inputError(const std::string& message) {
  CommandResult result;
  result.exitCode = kExitInputError;
  result.error = message;
  return result;
}

Json reportDocument(const InvariantReport& report, int& exitCode) {
  exitCode = report.allHold() ? kExitOk : kExitVerdictFailed;
  return toJson(report);
}

struct InstanceOutcome {
  int n = 0;
  int codim = 0;
  double c = 0.0;
  std::uint64_t seed = 0;
  std::vector<BoundVerdict> verdicts;
  std::string error;
};

struct Tally {
  TheoremTag tag;
  BoundSide side;
  std::optional<double> a;
  long evaluated = 0;
  long violations = 0;
  long equalityHits = 0;
  double minSlack = std::numeric_limits<double>::infinity();
};

// Orders tallies by tag, side, then a (absent first).
using TallyKey = std::tuple<int, int, bool, double>;

TallyKey keyOf(const BoundVerdict& v) {
  return {static_cast<int>(v.tag), static_cast<int>(v.side), v.a.has_value(), v.a.value_or(0.0)};
}

}  // namespace

void ScanConfig::check() const {
  if (count < 1) throw GeometryError(ErrorCode::InvalidParameter, "count must be >= 1");
  if (nMin < 2 || nMax < nMin) throw GeometryError(ErrorCode::InvalidParameter, "empty n range");
  if (codimMin < 1 || codimMax < codimMin) {
    throw GeometryError(ErrorCode::InvalidParameter, "empty codim range");
  }
  if (cValues.empty()) throw GeometryError(ErrorCode::InvalidParameter, "no c values");
  if (!(scale >= 0.0)) throw GeometryError(ErrorCode::InvalidParameter, "scale must be >= 0");
}

std::vector<double> defaultAValues() { return {-0.9, -0.5, 0.0, 0.5, 0.9}; }

Tolerances tolerancesFromEnvironment() {
  Tolerances tol;
  if (const char* env = std::getenv("CHEN_GAP_TOL"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const double value = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(value > 0.0) || !std::isfinite(value)) {
      throw GeometryError(ErrorCode::InvalidParameter,
                          std::string("CHEN_GAP_TOL must be a positive number, got '") + env + "'");
    }
    tol.eqTol = value;
  }
  return tol;
}

std::uint64_t instanceSeed(std::uint64_t seed, int index) {
  // splitmix64
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CommandResult cmdReport(const std::string& inputPath, const std::vector<double>& aValues,
                        const PlaneSearchConfig& cfg, const Tolerances& tol) {
  try {
    const PointData point = loadPointData(inputPath);
    CommandResult result;
    result.document = reportDocument(fullReport(point, aValues, cfg, tol), result.exitCode);
    return result;
  } catch (const GeometryError& e) {
    return inputError(e.what());
  }
}

CommandResult cmdQp(int n, double a, double k, bool oracle) {
  try {
    const QpProblem problem{n, a, k};
    const QpSolution solution = solveClosedForm(problem);
    CommandResult result;
    result.document = toJson(solution);
    result.document["n"] = n;
    result.document["a"] = a;
    result.document["k"] = k;
    result.document["certificate"] = toJson(certify(problem, solution.maximizer));
    if (oracle) {
      const double value = bruteForceMax(problem);
      result.document["oracle"] = {{"value", value}, {"delta", solution.maxValue - value}};
    }
    result.exitCode = solution.certified ? kExitOk : kExitVerdictFailed;
    return result;
  } catch (const GeometryError& e) {
    return inputError(e.what());
  }
}

CommandResult cmdScan(const ScanConfig& scan, const PlaneSearchConfig& cfg, const Tolerances& tol) {
  try {
    scan.check();
    cfg.check();
    for (double a : scan.aValues) deltaAFrom(0.0, 0.0, 0.0, a);
  } catch (const GeometryError& e) {
    return inputError(e.what());
  }

  const int nCount = scan.nMax - scan.nMin + 1;
  const int codimCount = scan.codimMax - scan.codimMin + 1;
  std::vector<InstanceOutcome> outcomes(static_cast<std::size_t>(scan.count));
  for (int i = 0; i < scan.count; ++i) {
    InstanceOutcome& o = outcomes[i];
    o.n = scan.nMin + i % nCount;
    o.codim = scan.codimMin + (i / nCount) % codimCount;
    o.c = scan.cValues[static_cast<std::size_t>(i / (nCount * codimCount)) % scan.cValues.size()];
    o.seed = instanceSeed(scan.seed, i);
  }

  // Instances are independent; each worker owns a strided subset and writes
  // only its own slots, and aggregation below runs in index order.
  const unsigned workers =
      std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), scan.count));
  auto work = [&](unsigned worker) {
    for (std::size_t i = worker; i < outcomes.size(); i += workers) {
      InstanceOutcome& o = outcomes[i];
      try {
        const PointData point = randomPointData(o.seed, o.n, o.codim, scan.minimal, scan.scale, o.c);
        o.verdicts = fullReport(point, scan.aValues, cfg, tol).verdicts;
      } catch (const std::exception& e) {
        o.error = e.what();
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  std::map<TallyKey, Tally> tallies;
  long totalViolations = 0;
  Json failures = Json::array();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const InstanceOutcome& o = outcomes[i];
    if (!o.error.empty()) return inputError("instance " + std::to_string(i) + ": " + o.error);
    bool failed = false;
    for (const BoundVerdict& v : o.verdicts) {
      if (!v.applicable) continue;
      auto [it, inserted] = tallies.try_emplace(keyOf(v), Tally{v.tag, v.side, v.a});
      Tally& t = it->second;
      ++t.evaluated;
      t.minSlack = std::min(t.minSlack, v.slack);
      if (v.equality) ++t.equalityHits;
      if (!v.holds) {
        ++t.violations;
        ++totalViolations;
        failed = true;
      }
    }
    if (failed && failures.size() < kMaxListedFailures) {
      failures.push_back({{"index", i}, {"n", o.n}, {"codim", o.codim}, {"c", o.c}, {"seed", o.seed}});
    }
  }

  Json theorems = Json::array();
  for (const auto& [key, t] : tallies) {
    Json entry = {{"tag", std::string(toString(t.tag))},
                  {"side", t.side == BoundSide::Upper ? "upper" : "lower"},
                  {"evaluated", t.evaluated},
                  {"violations", t.violations},
                  {"equality_hits", t.equalityHits},
                  {"min_slack", t.minSlack}};
    if (t.a) entry["a"] = *t.a;
    theorems.push_back(entry);
  }

  CommandResult result;
  result.document = {{"config",
                      {{"count", scan.count},
                       {"n_min", scan.nMin},
                       {"n_max", scan.nMax},
                       {"codim_min", scan.codimMin},
                       {"codim_max", scan.codimMax},
                       {"minimal", scan.minimal},
                       {"c", scan.cValues},
                       {"a", scan.aValues},
                       {"seed", scan.seed},
                       {"scale", scan.scale},
                       {"eq_tol", tol.eqTol}}},
                     {"theorems", theorems},
                     {"violations", totalViolations},
                     {"failed_instances", failures}};
  result.exitCode = totalViolations == 0 ? kExitOk : kExitVerdictFailed;
  return result;
}

CommandResult cmdImmersion(const ImmersionSpec& spec, const std::vector<double>& aValues,
                           const PlaneSearchConfig& cfg, const Tolerances& tol) {
  try {
    const ResolvedImmersion resolved = resolve(spec);
    const JetData jet = sampleJet(spec, tol);
    const PointData point = jetToPointData(jet, 0.0, tol);
    CommandResult result;
    Json params = Json::object();
    for (const auto& [name, value] : spec.params) params[name] = value;
    Json at = Json::array();
    for (Eigen::Index i = 0; i < resolved.at.size(); ++i) at.push_back(resolved.at(i));
    result.document = {{"builtin", spec.kind},
                       {"params", params},
                       {"at", at},
                       {"step", spec.step},
                       {"point", toJson(point)},
                       {"report", reportDocument(fullReport(point, aValues, cfg, tol), result.exitCode)}};
    return result;
  } catch (const GeometryError& e) {
    return inputError(e.what());
  }
}

CommandResult cmdCatalog() {
  CommandResult result;
  result.document = Json::array();
  for (const BuiltinInfo& b : builtinCatalog()) {
    Json params = Json::array();
    for (const ParameterSchema& p : b.params) {
      params.push_back({{"name", p.name}, {"default", p.defaultValue}, {"description", p.description}});
    }
    result.document.push_back({{"name", b.name},
                               {"description", b.description},
                               {"tabulated", b.tabulated},
                               {"params", params}});
  }
  return result;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curvature invariants, Chen-type bounds and minimal-immersion obstructions"};
  app.require_subcommand(1);

  PlaneSearchConfig cfg;
  auto addSearchOptions = [&cfg](CLI::App* sub) {
    sub->add_option("--restarts", cfg.restarts, "random starts of the plane search");
    sub->add_option("--max-iter", cfg.maxIter, "refinement sweeps per start");
  };

  std::vector<double> aValues = defaultAValues();

  std::string input;
  auto* report = app.add_subcommand("report", "invariants and verdicts for a point data file");
  report->add_option("--input", input, "PointData JSON file")->required();
  report->add_option("--a", aValues, "comma-separated a values in (-1, 1)")->delimiter(',');
  addSearchOptions(report);

  int qpN = 3;
  double qpA = 0.0;
  double qpK = 0.0;
  bool qpOracle = false;
  auto* qp = app.add_subcommand("qp", "closed-form maximum on the trace hyperplane");
  qp->add_option("--n", qpN, "dimension >= 3")->required();
  qp->add_option("--a", qpA, "coupling in [-1, 1)")->required();
  qp->add_option("--k", qpK, "trace constraint value")->required();
  qp->add_flag("--oracle", qpOracle, "cross-check against the sampling oracle");

  ScanConfig scan;
  std::optional<double> scanEqTol;
  auto* scanCmd = app.add_subcommand("scan", "verify the bounds on random instances");
  scanCmd->add_option("--count", scan.count)->required();
  scanCmd->add_option("--n-min", scan.nMin);
  scanCmd->add_option("--n-max", scan.nMax);
  scanCmd->add_option("--codim-min", scan.codimMin);
  scanCmd->add_option("--codim-max", scan.codimMax);
  scanCmd->add_flag("--minimal", scan.minimal, "trace-free shape operators");
  scanCmd->add_option("--c", scan.cValues, "comma-separated space-form curvatures")->delimiter(',');
  scanCmd->add_option("--a", scan.aValues, "comma-separated a values")->delimiter(',');
  scanCmd->add_option("--seed", scan.seed)->required();
  scanCmd->add_option("--scale", scan.scale, "entries drawn from [-scale, scale]");
  scanCmd->add_option("--eq-tol", scanEqTol, "equality tolerance override");
  addSearchOptions(scanCmd);

  ImmersionSpec spec;
  std::vector<std::string> rawParams;
  std::string jetPath;
  auto* immersion = app.add_subcommand("immersion", "report for a builtin or tabulated immersion");
  auto* builtinOpt = immersion->add_option("--builtin", spec.kind, "builtin name (see catalog)");
  auto* jetOpt = immersion->add_option("--jet", jetPath, "tabulated jet JSON file");
  builtinOpt->excludes(jetOpt);
  immersion->add_option("--param", rawParams, "K=V parameter override, repeatable");
  immersion->add_option("--step", spec.step, "finite-difference step");
  immersion->add_option("--a", aValues, "comma-separated a values")->delimiter(',');
  addSearchOptions(immersion);

  auto* catalog = app.add_subcommand("catalog", "list builtin immersions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  CommandResult result;
  try {
    Tolerances tol = tolerancesFromEnvironment();
    if (*report) {
      result = cmdReport(input, aValues, cfg, tol);
    } else if (*qp) {
      result = cmdQp(qpN, qpA, qpK, qpOracle);
    } else if (*scanCmd) {
      if (scanEqTol) {
        // A negative value demands a strict margin; it exists to exercise the failure path.
        if (!std::isfinite(*scanEqTol)) {
          throw GeometryError(ErrorCode::InvalidParameter, "--eq-tol must be finite");
        }
        tol.eqTol = *scanEqTol;
      }
      result = cmdScan(scan, cfg, tol);
    } else if (*immersion) {
      for (const std::string& kv : rawParams) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
          throw GeometryError(ErrorCode::InvalidParameter, "--param expects K=V, got '" + kv + "'");
        }
        try {
          std::size_t used = 0;
          const std::string value = kv.substr(eq + 1);
          spec.params[kv.substr(0, eq)] = std::stod(value, &used);
          if (used != value.size()) throw std::invalid_argument(kv);
        } catch (const std::logic_error&) {
          throw GeometryError(ErrorCode::InvalidParameter, "--param value is not a number: " + kv);
        }
      }
      if (!jetPath.empty()) {
        spec.kind = "tabulated";
        spec.jet = loadJet(jetPath);
      } else if (spec.kind.empty()) {
        throw GeometryError(ErrorCode::InvalidParameter, "immersion needs --builtin or --jet");
      }
      result = cmdImmersion(spec, aValues, cfg, tol);
    } else if (*catalog) {
      result = cmdCatalog();
    }
  } catch (const GeometryError& e) {
    result = inputError(e.what());
  }

  if (result.exitCode == kExitInputError) {
    err << "error: " << result.error << "\n";
    return kExitInputError;
  }
  out << dumpJson(result.document) << "\n";
  return result.exitCode;
}

}  // namespace chengap::cli
