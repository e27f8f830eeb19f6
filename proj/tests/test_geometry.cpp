#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "sffd/errors.hpp"
#include "sffd/geometry.hpp"
#include "sffd/sampling.hpp"

using namespace sffd;
using namespace fixtures;

TEST_CASE("lie_bracket_eval hand cases") {
  const VectorField x = field(kXY, {"0", "x"});
  const VectorField y = field(kXY, {"y", "0"});
  CHECK(lie_bracket_eval(x, y, Point{1, 1}) == Vector{1, -1});

  CHECK(lie_bracket_eval(e(3, 0), e(3, 1), Point{0.2, 3, -1}) == Vector{0, 0, 0});

  CHECK(lie_bracket_eval(sphere_v1(), sphere_v2(), Point{1, 2, 3}) == Vector{0, 3, -2});
}

TEST_CASE("bracket is exactly antisymmetric") {
  Sampler s(21);
  for (int trial = 0; trial < 30; ++trial) {
    const VectorField x = s.field(kXYZ);
    const VectorField y = s.field(kXYZ);
    const Point p(s.vector(3).values());
    CHECK(lie_bracket_eval(x, y, p) == -lie_bracket_eval(y, x, p));
  }
}

TEST_CASE("expression-level bracket agrees with pointwise bracket") {
  Sampler s(22);
  for (int trial = 0; trial < 20; ++trial) {
    const VectorField x = s.field(kXYZ);
    const VectorField y = s.field(kXYZ);
    const Point p(s.vector(3).values());
    CHECK((lie_bracket(x, y).at(p) - lie_bracket_eval(x, y, p)).norm_inf() <= 1e-12);
  }
}

TEST_CASE("Jacobi identity on polynomial fields") {
  Sampler s(23);
  for (int trial = 0; trial < 20; ++trial) {
    const VectorField x = s.field(kXYZ);
    const VectorField y = s.field(kXYZ);
    const VectorField z = s.field(kXYZ);
    const Point p(s.vector(3).values());
    const Vector sum = lie_bracket_eval(x, lie_bracket(y, z), p) + lie_bracket_eval(y, lie_bracket(z, x), p) +
                       lie_bracket_eval(z, lie_bracket(x, y), p);
    CHECK(sum.norm_inf() <= 1e-8);
  }
}

TEST_CASE("exterior derivative hand cases") {
  const Point p{0.3, -1.2, 2.0};
  CHECK(exterior_derivative_eval(form(kXYZ, {"0", "0", "1"}), p).max_abs() == 0.0);

  const Matrix d = exterior_derivative_eval(form(kXYZ, {"-y", "0", "1"}), p);
  CHECK(d(0, 1) == 1.0);
  CHECK(d(1, 0) == -1.0);
  CHECK(d(0, 2) == 0.0);
  CHECK(d(1, 2) == 0.0);

  CHECK(exterior_derivative_eval(sphere_theta(), p).max_abs() == 0.0);
}

TEST_CASE("frobenius_residual") {
  const std::vector<Point> pts{{0, 0, 0}, {1, -2, 0.5}, {0.3, 0.7, -4}};
  CHECK(frobenius_residual(form(kXYZ, {"0", "0", "1"}), pts).max == 0.0);
  const auto contact = frobenius_residual(form(kXYZ, {"-y", "0", "1"}), pts);
  CHECK(contact.max == doctest::Approx(1.0));
  CHECK(contact.worst.has_value());
  CHECK(frobenius_residual(sphere_theta(), pts).max == 0.0);
  // integrable but not closed: theta = x dz has d theta ^ theta = dx^dz ^ x dz = 0
  CHECK(frobenius_residual(form(kXYZ, {"0", "0", "x"}), pts).max == 0.0);
  // n = 2 is always integrable
  CHECK(frobenius_residual(form(kXY, {"-y", "x"}), std::vector<Point>{{1, 2}}).max == 0.0);
}

TEST_CASE("metric evaluation and positivity") {
  const Metric polar = metric(kPolar, {{"1", "0"}, {"0", "r^2"}});
  const Matrix g = polar.at(Point{2, 0.3});
  CHECK(g(1, 1) == 4.0);
  Matrix value;
  std::vector<Matrix> grad;
  polar.eval_with_gradient(Point{2, 0.3}, value, grad);
  CHECK(grad[0](1, 1) == 4.0);
  CHECK(grad[1](1, 1) == 0.0);
  CHECK_NOTHROW(polar.check_positive_definite(Point{2, 0.3}));
  CHECK_THROWS_AS(polar.check_positive_definite(Point{0, 0.3}), NotPositiveDefiniteError);
  // lower triangle ignored
  const Metric m = metric(kXY, {{"2", "1"}, {"99", "3"}});
  CHECK(m.at(Point{0, 0})(1, 0) == 1.0);
}

TEST_CASE("chart validation and domain") {
  CHECK_THROWS_AS(Chart({"x"}), DimensionError);
  CHECK_THROWS_AS(Chart({"x", "x"}), DimensionError);
  const Chart c({"r", "phi"}, parse("r", kPolar));
  CHECK(c.contains(Point{1, 0}));
  CHECK_FALSE(c.contains(Point{-1, 0}));
  CHECK_FALSE(c.contains(Point{1, 0, 0}));
}
