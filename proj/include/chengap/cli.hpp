#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "chengap/curvature.hpp"
#include "chengap/immersion.hpp"
#include "chengap/json_io.hpp"
#include "chengap/point_data.hpp"

namespace chengap::cli {

// Exit codes: 0 every applicable verdict holds, 1 input or usage error,
// 2 a verdict failed (a theorem would be falsified, so: an implementation bug).
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitVerdictFailed = 2;

struct CommandResult {
  Json document;
  int exitCode = kExitOk;
  std::string error;  // set when exitCode == kExitInputError
};

struct ScanConfig {
  int count = 100;
  int nMin = 3;
  int nMax = 5;
  int codimMin = 1;
  int codimMax = 3;
  bool minimal = false;
  std::vector<double> cValues{0.0};
  std::vector<double> aValues{-0.9, -0.5, 0.0, 0.5, 0.9};
  std::uint64_t seed = 1;
  double scale = 2.0;

  void check() const;
};

/// Default a-values for report and immersion.
std::vector<double> defaultAValues();

/// Tolerances with eqTol taken from CHEN_GAP_TOL when set.
Tolerances tolerancesFromEnvironment();

/// Seed of scan instance `index`.
std::uint64_t instanceSeed(std::uint64_t seed, int index);

CommandResult cmdReport(const std::string& inputPath, const std::vector<double>& aValues,
                        const PlaneSearchConfig& cfg, const Tolerances& tol);
CommandResult cmdQp(int n, double a, double k, bool oracle);
CommandResult cmdScan(const ScanConfig& scan, const PlaneSearchConfig& cfg, const Tolerances& tol);
CommandResult cmdImmersion(const ImmersionSpec& spec, const std::vector<double>& aValues,
                           const PlaneSearchConfig& cfg, const Tolerances& tol);
CommandResult cmdCatalog();

/// Full command line front end; documents go to `out`, messages to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace chengap::cli
