#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sffd/expr.hpp"
#include "sffd/linalg.hpp"

namespace sffd {

using TangentVector = Vector;

// A point of the chart, in coordinates.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coords) : coords_(std::move(coords)) {}
  Point(std::initializer_list<double> coords) : coords_(coords) {}
  explicit Point(const Vector& v) : coords_(v.values()) {}

  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const { return coords_; }
  Vector as_vector() const { return Vector(coords_); }

  bool operator==(const Point&) const = default;

 private:
  std::vector<double> coords_;
};

std::string to_string(const Point& p);

// Single coordinate chart; 2 <= dim <= 8.
class Chart {
 public:
  Chart(std::vector<std::string> names, std::optional<Expression> domain = std::nullopt);

  std::size_t dim() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::optional<Expression>& domain() const { return domain_; }

  // True when there is no domain predicate or it evaluates > 0 at p.
  bool contains(const Point& p) const;

  Expression parse(std::string_view text) const;

 private:
  std::vector<std::string> names_;
  std::optional<Expression> domain_;
};

class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(std::vector<Expression> components) : components_(std::move(components)) {}

  // The coordinate field d/dx^index on an n-dimensional chart.
  static VectorField coordinate(std::size_t n, std::size_t index);
  static VectorField zero(std::size_t n);

  std::size_t dim() const { return components_.size(); }
  const Expression& operator[](std::size_t k) const { return components_[k]; }
  const std::vector<Expression>& components() const { return components_; }

  TangentVector at(const Point& p) const;
  // J(k, j) = d_j X^k at p.
  Matrix jacobian_at(const Point& p) const;
  void eval_with_jacobian(const Point& p, TangentVector& value, Matrix& jacobian) const;

  VectorField scaled(const Expression& f) const;

  friend VectorField operator+(const VectorField& a, const VectorField& b);
  friend VectorField operator-(const VectorField& a, const VectorField& b);

 private:
  std::vector<Expression> components_;
};

class OneForm {
 public:
  OneForm() = default;
  explicit OneForm(std::vector<Expression> components) : components_(std::move(components)) {}

  std::size_t dim() const { return components_.size(); }
  const Expression& operator[](std::size_t i) const { return components_[i]; }

  Vector at(const Point& p) const;
  double apply(const Point& p, const Vector& v) const { return dot(at(p), v); }
  // J(i, j) = d_j theta_i at p.
  Matrix jacobian_at(const Point& p) const;

  OneForm scaled(const Expression& f) const;

 private:
  std::vector<Expression> components_;
};

// Riemannian metric; only the upper triangle is stored.
class Metric {
 public:
  // `components` is a full n x n array; entries below the diagonal are ignored.
  explicit Metric(const std::vector<std::vector<Expression>>& components);

  std::size_t dim() const { return n_; }
  const Expression& component(std::size_t i, std::size_t j) const;

  Matrix at(const Point& p) const;
  // dg[l](i, j) = d_l g_ij at p.
  void eval_with_gradient(const Point& p, Matrix& value, std::vector<Matrix>& gradient) const;
  double inner(const Point& p, const Vector& u, const Vector& v) const;

  // Throws NotPositiveDefiniteError naming the point.
  void check_positive_definite(const Point& p) const;

 private:
  std::size_t n_;
  std::vector<Expression> upper_;  // row-major upper triangle
};

// Maximum of a sampled residual together with where it occurred.
struct SampledResidual {
  double max = 0.0;
  std::optional<Point> worst;
  std::vector<Point> skipped;  // degenerate points left out of a batch
  std::vector<std::string> warnings;

  void record(double value, const Point& p) {
    if (!worst || value > max) {
      max = value;
      worst = p;
    }
  }
};

// [X,Y]^k = X^j d_j Y^k - Y^j d_j X^k at p.
TangentVector lie_bracket_eval(const VectorField& x, const VectorField& y, const Point& p);

// The bracket as an expression-level field, for nested brackets.
VectorField lie_bracket(const VectorField& x, const VectorField& y);

// (d theta)_ij = d_i theta_j - d_j theta_i at p.
Matrix exterior_derivative_eval(const OneForm& theta, const Point& p);

// max over points and i<j<k of |(d theta ^ theta)_ijk|; 0 when n = 2.
SampledResidual frobenius_residual(const OneForm& theta, std::span<const Point> points);

}  // namespace sffd
