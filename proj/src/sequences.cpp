#include "chengap/sequences.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

namespace chengap {

namespace {

constexpr std::array<int, 32> kPrimes = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,  31,
                                         37, 41, 43, 47, 53, 59, 61, 67, 71, 73,  79,
                                         83, 89, 97, 101, 103, 107, 109, 113, 127, 131};

}  // namespace

double radicalInverse(std::uint64_t index, int base) {
  const double inv = 1.0 / base;
  double factor = inv;
  double result = 0.0;
  while (index > 0) {
    result += static_cast<double>(index % base) * factor;
    index /= base;
    factor *= inv;
  }
  return result;
}

Eigen::VectorXd haltonPoint(std::uint64_t index, int dim) {
  if (dim < 1 || dim > static_cast<int>(kPrimes.size())) {
    throw GeometryError(ErrorCode::DimensionTooLarge, "Halton dimension out of range");
  }
  Eigen::VectorXd x(dim);
  for (int d = 0; d < dim; ++d) x(d) = radicalInverse(index, kPrimes[d]);
  return x;
}

std::shared_ptr<const std::vector<TangentPlane>> quasiRandomPlanes(int n, int count) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const std::vector<TangentPlane>>> cache;

  const std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find({n, count});
  if (it != cache.end()) return it->second;

  // 2n Gaussians per plane, Box-Muller on consecutive coordinate pairs.
  auto planes = std::make_shared<std::vector<TangentPlane>>();
  planes->reserve(count);
  Eigen::VectorXd g(2 * n);
  std::uint64_t index = 1;
  while (static_cast<int>(planes->size()) < count) {
    const Eigen::VectorXd x = haltonPoint(index++, 2 * n);
    for (int k = 0; k < n; ++k) {
      const double radius = std::sqrt(-2.0 * std::log(x(2 * k)));
      const double angle = 2.0 * std::numbers::pi * x(2 * k + 1);
      g(2 * k) = radius * std::cos(angle);
      g(2 * k + 1) = radius * std::sin(angle);
    }
    try {
      planes->push_back(orthonormalize({g.head(n), g.tail(n)}));
    } catch (const GeometryError&) {
      // measure-zero degenerate pair; take the next point
    }
  }
  cache.emplace(std::make_pair(n, count), planes);
  return planes;
}

}  // namespace chengap
