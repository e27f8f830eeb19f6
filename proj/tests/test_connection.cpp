#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "sffd/connection.hpp"
#include "sffd/errors.hpp"
#include "sffd/riemann.hpp"
#include "sffd/sampling.hpp"

using namespace sffd;
using namespace fixtures;

TEST_CASE("covariant_derivative_eval hand cases") {
  CHECK(covariant_derivative_eval(Connection::flat(2), e(2, 0), field(kXY, {"0", "x"}), Point{2, 5}) ==
        Vector{0, 1});

  const Vector polar = covariant_derivative_eval(polar_connection(), e(2, 1), e(2, 1), Point{2, 0});
  CHECK(polar[0] == doctest::Approx(-2.0));
  CHECK(polar[1] == 0.0);

  CHECK(covariant_derivative_eval(torsion_connection(), e(3, 0), e(3, 1), Point{0.4, -1, 3}) == Vector{0, 0, 1});
  CHECK(covariant_derivative_eval(torsion_connection(), e(3, 1), e(3, 0), Point{0.4, -1, 3}) == Vector{0, 0, 0});
}

TEST_CASE("torsion_eval hand cases") {
  Sampler s(31);
  for (int trial = 0; trial < 10; ++trial) {
    const VectorField x = s.field(kPolar);
    const VectorField y = s.field(kPolar);
    const Point p{s.uniform(0.5, 2.0), s.uniform(-3, 3)};
    CHECK(torsion_eval(polar_connection(), x, y, p).norm_inf() <= 1e-12);
  }
  CHECK(torsion_eval(torsion_connection(), e(3, 0), e(3, 1), Point{0, 0, 0}) == Vector{0, 0, 1});
  CHECK(torsion_eval(torsion_connection(), e(3, 0), e(3, 0), Point{0, 0, 0}) == Vector{0, 0, 0});
  CHECK(torsion_of_vectors(torsion_connection(), {1, 0, 0}, {0, 1, 0}, Point{0, 0, 0}) == Vector{0, 0, 1});
}

TEST_CASE("torsion is tensorial despite the bracket term") {
  Sampler s(32);
  const Connection conn = Connection::from_entries(
      3, {{2, 0, 1, parse("1 + x*y", kXYZ)}, {0, 1, 2, parse("z", kXYZ)}, {1, 2, 0, parse("-x^2", kXYZ)}});
  for (int trial = 0; trial < 20; ++trial) {
    const VectorField x = s.field(kXYZ);
    const VectorField y = s.field(kXYZ);
    const Expression f = s.polynomial(kXYZ);
    const Point p(s.vector(3).values());
    const double fp = f.eval(p.coords());
    const Vector lhs = torsion_eval(conn, x.scaled(f), y, p);
    const Vector rhs = fp * torsion_eval(conn, x, y, p);
    CHECK((lhs - rhs).norm_inf() <= 1e-9 * (1.0 + std::abs(fp)));
    // and the literal three-term form equals the component form
    CHECK((torsion_eval(conn, x, y, p) - torsion_of_vectors(conn, x.at(p), y.at(p), p)).norm_inf() <= 1e-12);
  }
}

TEST_CASE("flow_advance and flow_jacobian") {
  const VectorField shear = field(kXY, {"0", "x"});
  const Point end = flow_advance(shear, Point{1, 0}, 2.0, 10);
  CHECK(end[0] == doctest::Approx(1.0));
  CHECK(end[1] == doctest::Approx(2.0));

  CHECK(flow_advance(VectorField::zero(2), Point{0.3, 0.4}, 5.0, 3) == Point{0.3, 0.4});
  const Point shifted = flow_advance(e(3, 0), Point{0, 0, 0}, 1.0, 7);
  CHECK(shifted[0] == doctest::Approx(1.0));
  CHECK(shifted[1] == 0.0);

  for (double t : {0.5, 2.0, -1.5}) {
    const Matrix j = flow_jacobian(shear, Point{0.7, -0.2}, t, 20);
    CHECK(j(0, 0) == doctest::Approx(1.0));
    CHECK(j(0, 1) == doctest::Approx(0.0));
    CHECK(j(1, 0) == doctest::Approx(t));
    CHECK(j(1, 1) == doctest::Approx(1.0));
  }
  CHECK(flow_jacobian(VectorField::zero(2), Point{1, 2}, 3.0, 5) == Matrix::identity(2));
  CHECK(flow_jacobian(e(3, 0), Point{1, 2, 3}, 3.0, 5) == Matrix::identity(3));
}

TEST_CASE("flow_jacobian agrees with finite differences of the flow") {
  const VectorField z = field(kXY, {"-y + 0.3*x^2", "x + sin(y)"});
  const Point x0{0.4, 0.2};
  const double t = 0.8;
  const Matrix j = flow_jacobian(z, x0, t, 400);
  for (std::size_t col = 0; col < 2; ++col)
    for (std::size_t row = 0; row < 2; ++row) {
      const double fd = central_difference(
          [&](const std::vector<double>& x) { return flow_advance(z, Point(x), t, 400)[row]; },
          std::vector<double>(x0.coords().begin(), x0.coords().end()), col, 1e-5);
      CHECK(j(row, col) == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("flow leaving the chart is reported with its step") {
  const Chart c({"x", "y"}, parse("1 - x", kXY));
  try {
    flow_advance(e(2, 0), Point{0, 0}, 2.0, 10, &c);
    FAIL("expected an IntegrationError");
  } catch (const IntegrationError& err) {
    CHECK(err.step() == 5);
  }
  // a singular Christoffel evaluation surfaces as an integration error, too
  const Connection singular = Connection::from_entries(2, {{0, 1, 1, parse("1/(x - 0.25)", kXY)}});
  CHECK_THROWS_AS(parallel_transport(singular, e(2, 0), Point{0, 0}, {0, 1}, 1.0, 4, TransportDirection::Forward),
                  IntegrationError);
}

TEST_CASE("parallel_transport hand cases") {
  const Vector v{0.3, -1.2, 4.0};
  CHECK(parallel_transport(Connection::flat(3), field(kXYZ, {"y", "-x", "1"}), Point{1, 0, 0}, v, 2.0, 50,
                           TransportDirection::Forward) == v);

  const Vector fwd = parallel_transport(torsion_connection(), e(3, 0), Point{0, 0, 0}, {0, 1, 0}, 1.0, 20,
                                        TransportDirection::Forward);
  CHECK(fwd[0] == 0.0);
  CHECK(fwd[1] == 1.0);
  CHECK(fwd[2] == doctest::Approx(-1.0));

  const Vector back = parallel_transport(torsion_connection(), e(3, 0), Point{0, 0, 0}, fwd, 1.0, 20,
                                         TransportDirection::Inverse);
  CHECK((back - Vector{0, 1, 0}).norm_inf() <= 1e-9);
}

TEST_CASE("forward then inverse transport is the identity on a curved scene") {
  const VectorField z = field(kPolar, {"0.3", "1"});
  const Point x0{1.0, 0.2};
  const Vector v{0.5, -0.7};
  const Vector fwd = parallel_transport(polar_connection(), z, x0, v, 1.0, 200, TransportDirection::Forward);
  const Vector back = parallel_transport(polar_connection(), z, x0, fwd, 1.0, 200, TransportDirection::Inverse);
  CHECK((back - v).norm_inf() <= 1e-9);
}

TEST_CASE("transport is linear") {
  const VectorField z = field(kPolar, {"0.2*r", "1 + 0.1*phi"});
  const Point x0{1.2, 0.0};
  const Vector v{0.3, 0.9}, w{-1.1, 0.4};
  auto tr = [&](const Vector& u) {
    return parallel_transport(polar_connection(), z, x0, u, 1.0, 100, TransportDirection::Forward);
  };
  CHECK((tr(v) + tr(w) - tr(v + w)).norm_inf() <= 1e-10);
}

TEST_CASE("Levi-Civita transport preserves inner products") {
  const std::vector<std::string> names{"th", "ph"};
  const Metric g = metric(names, {{"1", "0"}, {"0", "sin(th)^2"}});
  const Connection lc = levi_civita(g);
  const VectorField z = field(names, {"0.4", "1"});
  const Point x0{1.0, 0.0};
  const Vector v{0.6, 0.8}, w{-0.3, 1.7};
  const Point end = flow_advance(z, x0, 1.0, 100);
  const Vector tv = parallel_transport(lc, z, x0, v, 1.0, 100, TransportDirection::Forward);
  const Vector tw = parallel_transport(lc, z, x0, w, 1.0, 100, TransportDirection::Forward);
  CHECK(std::abs(g.inner(end, tv, tw) - g.inner(x0, v, w)) <= 1e-7);
  CHECK(std::abs(g.inner(end, tv, tv) - g.inner(x0, v, v)) <= 1e-7);
}

TEST_CASE("RK4 transport converges at fourth order") {
  const VectorField z = field(kPolar, {"0.3", "1"});
  const Point x0{1.0, 0.0};
  const Vector v{0.0, 1.0};
  auto tr = [&](int steps) {
    return parallel_transport(polar_connection(), z, x0, v, 1.0, steps, TransportDirection::Forward);
  };
  const Vector ref = tr(160);
  const double coarse = (tr(8) - ref).norm_inf();
  const double fine = (tr(16) - ref).norm_inf();
  const double ratio = coarse / fine;
  CHECK(ratio >= 8.0);
  CHECK(ratio <= 32.0);
}

TEST_CASE("autoparallel_advance") {
  const Autoparallel line = autoparallel_advance(Connection::flat(2), Point{0, 0}, {1, 2}, 1.0, 10);
  CHECK(line.point[0] == doctest::Approx(1.0));
  CHECK(line.point[1] == doctest::Approx(2.0));
  CHECK(line.velocity == Vector{1, 2});

  const Autoparallel radial = autoparallel_advance(polar_connection(), Point{1, 0}, {1, 0}, 1.0, 50);
  CHECK(radial.point[0] == doctest::Approx(2.0));
  CHECK(radial.point[1] == 0.0);
  CHECK(radial.velocity[0] == doctest::Approx(1.0));
  CHECK(radial.velocity[1] == 0.0);

  const Point x0{1.0, 0.3};
  const Vector v0{0.4, 0.7};
  const Autoparallel there = autoparallel_advance(polar_connection(), x0, v0, 1.0, 200);
  const Autoparallel back = autoparallel_advance(polar_connection(), there.point, there.velocity, -1.0, 200);
  CHECK((back.point.as_vector() - x0.as_vector()).norm_inf() <= 1e-8);
  CHECK((back.velocity - v0).norm_inf() <= 1e-8);
}

TEST_CASE("polar autoparallels are straight lines") {
  // start at (1,0) heading in the +y direction: x = 1, y = t, so r = sqrt(1+t^2), phi = atan(t)
  const Autoparallel a = autoparallel_advance(polar_connection(), Point{1, 0}, {0, 1}, 1.0, 200);
  CHECK(a.point[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  CHECK(a.point[1] == doctest::Approx(std::atan(1.0)).epsilon(1e-10));
}
