#include <doctest.h>

#include <cmath>

#include "sffd/errors.hpp"
#include "sffd/linalg.hpp"
#include "sffd/sampling.hpp"

using namespace sffd;

TEST_CASE("decompose_in_frame") {
  SUBCASE("skew frame") {
    const std::vector<Vector> frame{{1, 0}, {1, 1}};
    const Vector c = decompose_in_frame(frame, {0, 1});
    CHECK(c[0] == doctest::Approx(-1.0));
    CHECK(c[1] == doctest::Approx(1.0));
  }
  SUBCASE("identity frame returns the components") {
    const std::vector<Vector> frame{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    const Vector v{0.3, -2.5, 7.0};
    CHECK(decompose_in_frame(frame, v) == v);
  }
  SUBCASE("diagonal frame") {
    const std::vector<Vector> frame{{2, 0}, {0, 1}};
    const Vector c = decompose_in_frame(frame, {4, 3});
    CHECK(c[0] == 2.0);
    CHECK(c[1] == 3.0);
  }
  SUBCASE("dependent frame is rejected") {
    const std::vector<Vector> frame{{1, 2}, {2, 4}};
    CHECK_THROWS_AS(decompose_in_frame(frame, {1, 0}), DegenerateFrameError);
    const std::vector<Vector> nearly{{1, 0}, {1, 1e-14}};
    CHECK_THROWS_AS(decompose_in_frame(nearly, {1, 0}), DegenerateFrameError);
  }
}

TEST_CASE("recombining frame coefficients reproduces the vector") {
  Sampler s(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = static_cast<std::size_t>(s.integer(2, 8));
    std::vector<Vector> frame;
    for (std::size_t a = 0; a < n; ++a) {
      Vector f = s.vector(n);
      f[a] += 3.0;  // keep it comfortably nonsingular
      frame.push_back(f);
    }
    const Vector v = s.vector(n, 5.0);
    const Vector c = decompose_in_frame(frame, v);
    Vector back(n);
    for (std::size_t a = 0; a < n; ++a) back += c[a] * frame[a];
    CHECK((back - v).norm_inf() <= 1e-10 * (1.0 + v.norm_inf()));
  }
}

TEST_CASE("cholesky rejects indefinite matrices") {
  CHECK_THROWS_AS(cholesky(Matrix{{1, 2}, {2, 1}}), NotPositiveDefiniteError);
  const Matrix l = cholesky(Matrix{{4, 2}, {2, 3}});
  CHECK(l(0, 0) == 2.0);
  CHECK(l(1, 0) == 1.0);
  CHECK(l(1, 1) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("sym_gen_eigen hand cases") {
  SUBCASE("diagonal") {
    const auto e = sym_gen_eigen(Matrix{{2, 0}, {0, 3}}, Matrix::identity(2));
    CHECK(e.values[0] == 2.0);
    CHECK(e.values[1] == 3.0);
  }
  SUBCASE("off-diagonal") {
    const auto e = sym_gen_eigen(Matrix{{0, 1}, {1, 0}}, Matrix::identity(2));
    CHECK(e.values[0] == doctest::Approx(-1.0));
    CHECK(e.values[1] == doctest::Approx(1.0));
  }
  SUBCASE("decoupled generalized") {
    const auto e = sym_gen_eigen(Matrix{{2, 0}, {0, 3}}, Matrix{{2, 0}, {0, 1}});
    CHECK(e.values[0] == doctest::Approx(1.0));
    CHECK(e.values[1] == doctest::Approx(3.0));
  }
  SUBCASE("degenerate eigenvalue keeps multiplicity") {
    const auto e = sym_gen_eigen(Matrix{{5, 0, 0}, {0, 5, 0}, {0, 0, 1}}, Matrix{{2, 1, 0}, {1, 2, 0}, {0, 0, 1}} );
    CHECK(e.values.size() == 3);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(sym_gen_eigen(Matrix{{0, 1}, {1.1, 0}}, Matrix::identity(2)), AsymmetricFormError);
    CHECK_THROWS_AS(sym_gen_eigen(Matrix::identity(2), Matrix{{1, 0}, {0, -1}}), NotPositiveDefiniteError);
  }
}

TEST_CASE("sym_gen_eigen invariants on random problems") {
  Sampler s(5);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = static_cast<std::size_t>(s.integer(1, 8));
    Matrix h(n, n), b(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) b(i, j) = s.uniform(-1, 1);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) h(i, j) = h(j, i) = s.uniform(-2, 2);
    Matrix g = b * b.transpose() + Matrix::identity(n);
    const auto e = sym_gen_eigen(h, g);

    // sum of eigenvalues = trace(G^-1 H)
    const Matrix ginv_h = LuDecomposition(g).inverse() * h;
    double trace = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      trace += ginv_h(i, i);
      sum += e.values[i];
    }
    CHECK(std::abs(trace - sum) <= 1e-9);

    for (std::size_t a = 0; a < n; ++a) {
      if (a > 0) CHECK(e.values[a - 1] <= e.values[a]);
      const Vector& v = e.vectors[a];
      CHECK((h * v - e.values[a] * (g * v)).norm_inf() <= 1e-9);
      for (std::size_t c = 0; c < n; ++c) {
        const double gv = dot(e.vectors[c], g * v);
        CHECK(std::abs(gv - (a == c ? 1.0 : 0.0)) <= 1e-9);
      }
    }
  }
}

TEST_CASE("negating H negates the spectrum exactly") {
  const Matrix h{{-1.3, 0.2, 0.7}, {0.2, 0.4, -0.1}, {0.7, -0.1, 2.2}};
  const Matrix g{{2.0, 0.3, 0.0}, {0.3, 1.0, 0.1}, {0.0, 0.1, 1.5}};
  const auto a = sym_gen_eigen(h, g);
  const auto b = sym_gen_eigen(-1.0 * h, g);
  for (std::size_t i = 0; i < 3; ++i) CHECK(b.values[i] == -a.values[2 - i]);
}
