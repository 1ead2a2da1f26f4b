#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "chengap/point_data.hpp"

namespace chengap {

/// Van der Corput radical inverse of `index` in the given base.
double radicalInverse(std::uint64_t index, int base);

/// Halton point with `dim` coordinates in (0,1); dim <= 32. Index 0 is
/// excluded by callers (it maps to the origin).
Eigen::VectorXd haltonPoint(std::uint64_t index, int dim);

/// `count` orthonormal planes in R^n drawn from a Halton sequence mapped to
/// Gaussian pairs. Results are cached per (n, count) and shared.
std::shared_ptr<const std::vector<TangentPlane>> quasiRandomPlanes(int n, int count);

}  // namespace chengap
