#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sffd/geometry.hpp"

namespace sffd {

// Seeded generator for randomized invariant sampling. Everything drawn
// from it is reproducible for a fixed seed on a fixed toolchain.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi);
  int integer(int lo, int hi);  // inclusive

  // Text of a random polynomial over `names`: `terms` monomials with
  // coefficients in [-1, 1] and total degree <= max_degree.
  std::string polynomial_text(std::span<const std::string> names, int max_degree = 2, int terms = 3);

  Expression polynomial(std::span<const std::string> names, int max_degree = 2, int terms = 3);

  // Field with independent random polynomial components.
  VectorField field(std::span<const std::string> names, int max_degree = 2, int terms = 3);

  // Same, but polynomial in x - center, so derivatives at the center stay O(1).
  VectorField field_about(std::span<const std::string> names, const Point& center, int max_degree = 2,
                          int terms = 3);

  // Random C-infinity(M) combination sum_a f_a X_a of the given fields.
  VectorField combination(std::span<const VectorField> basis, std::span<const std::string> names,
                          int max_degree = 1, int terms = 2);

  TangentVector vector(std::size_t n, double scale = 1.0);

  // A point within `radius` (max-norm) of `center` and inside the chart;
  // `accept` may reject further (e.g. degenerate frames).
  template <typename Accept>
  Point point_near(const Chart& chart, const Point& center, double radius, Accept&& accept) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      std::vector<double> c(center.dim());
      for (std::size_t i = 0; i < c.size(); ++i) c[i] = center[i] + uniform(-radius, radius);
      Point p(std::move(c));
      if (chart.contains(p) && accept(p)) return p;
    }
    return center;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace sffd
