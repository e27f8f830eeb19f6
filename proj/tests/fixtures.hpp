#pragma once

// In-code geometries shared by the unit tests, plus test-only oracles that
// do not go through the engine's derivative code.

#include <cmath>
#include <string>
#include <vector>

#include "sffd/connection.hpp"
#include "sffd/distribution.hpp"
#include "sffd/riemann.hpp"

namespace fixtures {

using namespace sffd;

inline const std::vector<std::string> kXY{"x", "y"};
inline const std::vector<std::string> kXYZ{"x", "y", "z"};
inline const std::vector<std::string> kPolar{"r", "phi"};

inline VectorField field(const std::vector<std::string>& names, std::initializer_list<const char*> comps) {
  std::vector<Expression> c;
  for (const char* s : comps) c.push_back(parse(s, names));
  return VectorField(std::move(c));
}

inline OneForm form(const std::vector<std::string>& names, std::initializer_list<const char*> comps) {
  std::vector<Expression> c;
  for (const char* s : comps) c.push_back(parse(s, names));
  return OneForm(std::move(c));
}

inline Metric metric(const std::vector<std::string>& names, std::initializer_list<std::initializer_list<const char*>> rows) {
  std::vector<std::vector<Expression>> m;
  for (const auto& r : rows) {
    std::vector<Expression> row;
    for (const char* s : r) row.push_back(parse(s, names));
    m.push_back(std::move(row));
  }
  return Metric(m);
}

// R^3 with Gamma^3_12 = 1 as the only nonzero symbol.
inline Connection torsion_connection() {
  return Connection::from_entries(3, {{2, 0, 1, Expression::constant(1.0)}});
}

// Flat plane in polar coordinates, symbols written out by hand.
inline Connection polar_connection() {
  return Connection::from_entries(2, {
                                         {0, 1, 1, parse("-r", kPolar)},
                                         {1, 0, 1, parse("1/r", kPolar)},
                                         {1, 1, 0, parse("1/r", kPolar)},
                                     });
}

inline VectorField e(std::size_t n, std::size_t i) { return VectorField::coordinate(n, i); }

// Spheres about the origin: V1 = -y dx + x dy, V2 = -z dx + x dz.
inline VectorField sphere_v1() { return field(kXYZ, {"-y", "x", "0"}); }
inline VectorField sphere_v2() { return field(kXYZ, {"-z", "0", "x"}); }
inline VectorField sphere_normal() {
  return field(kXYZ, {"x/(x^2+y^2+z^2)", "y/(x^2+y^2+z^2)", "z/(x^2+y^2+z^2)"});
}
inline VectorField sphere_unit_normal() {
  return field(kXYZ, {"x/sqrt(x^2+y^2+z^2)", "y/sqrt(x^2+y^2+z^2)", "z/sqrt(x^2+y^2+z^2)"});
}
inline OneForm sphere_theta() { return form(kXYZ, {"x", "y", "z"}); }

inline Distribution sphere_distribution() {
  return Distribution({sphere_v1(), sphere_v2()}, {sphere_normal()}, {sphere_theta()});
}

inline Metric euclidean3() { return metric(kXYZ, {{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}}); }

// Central difference of f along coordinate i.
template <typename F>
double central_difference(F&& f, std::vector<double> x, std::size_t i, double h) {
  const double x0 = x[i];
  x[i] = x0 + h;
  const double plus = f(x);
  x[i] = x0 - h;
  const double minus = f(x);
  return (plus - minus) / (2.0 * h);
}

}  // namespace fixtures
