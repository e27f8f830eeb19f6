#include "sffd/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "sffd/errors.hpp"

namespace sffd {

std::string to_string(const Point& p) { return to_string(p.as_vector()); }

Chart::Chart(std::vector<std::string> names, std::optional<Expression> domain)
    : names_(std::move(names)), domain_(std::move(domain)) {
  if (names_.size() < 2 || names_.size() > kMaxDim)
    throw DimensionError("chart dimension must be between 2 and " + std::to_string(kMaxDim));
  for (std::size_t i = 0; i < names_.size(); ++i)
    for (std::size_t j = i + 1; j < names_.size(); ++j)
      if (names_[i] == names_[j]) throw DimensionError("duplicate coordinate name '" + names_[i] + "'");
  if (domain_ && domain_->arity() > names_.size())
    throw DimensionError("domain predicate references a coordinate beyond the chart dimension");
}

bool Chart::contains(const Point& p) const {
  if (p.dim() != dim()) return false;
  if (!domain_) return true;
  try {
    return domain_->eval(p.coords()) > 0.0;
  } catch (const DomainError&) {
    return false;
  }
}

Expression Chart::parse(std::string_view text) const { return sffd::parse(text, names_); }

VectorField VectorField::coordinate(std::size_t n, std::size_t index) {
  std::vector<Expression> c(n);
  c[index] = Expression::constant(1.0);
  return VectorField(std::move(c));
}

VectorField VectorField::zero(std::size_t n) { return VectorField(std::vector<Expression>(n)); }

TangentVector VectorField::at(const Point& p) const {
  if (p.dim() != dim()) throw DimensionError("field and point dimensions differ");
  Vector v(dim());
  for (std::size_t k = 0; k < dim(); ++k) v[k] = components_[k].eval(p.coords());
  return v;
}

Matrix VectorField::jacobian_at(const Point& p) const {
  TangentVector v;
  Matrix j;
  eval_with_jacobian(p, v, j);
  return j;
}

void VectorField::eval_with_jacobian(const Point& p, TangentVector& value, Matrix& jacobian) const {
  const std::size_t n = dim();
  if (p.dim() != n) throw DimensionError("field and point dimensions differ");
  value = Vector(n);
  jacobian = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const Dual d = components_[k].eval_dual(p.coords());
    value[k] = d.value;
    for (std::size_t j = 0; j < n; ++j) jacobian(k, j) = d.partials[j];
  }
}

VectorField VectorField::scaled(const Expression& f) const {
  std::vector<Expression> c;
  c.reserve(dim());
  for (const auto& e : components_) c.push_back(f * e);
  return VectorField(std::move(c));
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  if (a.dim() != b.dim()) throw DimensionError("field dimensions differ");
  std::vector<Expression> c;
  for (std::size_t k = 0; k < a.dim(); ++k) c.push_back(a[k] + b[k]);
  return VectorField(std::move(c));
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  if (a.dim() != b.dim()) throw DimensionError("field dimensions differ");
  std::vector<Expression> c;
  for (std::size_t k = 0; k < a.dim(); ++k) c.push_back(a[k] - b[k]);
  return VectorField(std::move(c));
}

Vector OneForm::at(const Point& p) const {
  if (p.dim() != dim()) throw DimensionError("form and point dimensions differ");
  Vector v(dim());
  for (std::size_t i = 0; i < dim(); ++i) v[i] = components_[i].eval(p.coords());
  return v;
}

Matrix OneForm::jacobian_at(const Point& p) const {
  const std::size_t n = dim();
  if (p.dim() != n) throw DimensionError("form and point dimensions differ");
  Matrix j(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const Dual d = components_[i].eval_dual(p.coords());
    for (std::size_t l = 0; l < n; ++l) j(i, l) = d.partials[l];
  }
  return j;
}

OneForm OneForm::scaled(const Expression& f) const {
  std::vector<Expression> c;
  for (const auto& e : components_) c.push_back(f * e);
  return OneForm(std::move(c));
}

Metric::Metric(const std::vector<std::vector<Expression>>& components) : n_(components.size()) {
  for (std::size_t i = 0; i < n_; ++i) {
    if (components[i].size() != n_) throw DimensionError("metric must be a square array");
    for (std::size_t j = i; j < n_; ++j) upper_.push_back(components[i][j]);
  }
}

const Expression& Metric::component(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  // offset of row i in the packed upper triangle
  const std::size_t row = i * n_ - i * (i - 1) / 2;
  return upper_[row + (j - i)];
}

Matrix Metric::at(const Point& p) const {
  if (p.dim() != n_) throw DimensionError("metric and point dimensions differ");
  Matrix g(n_, n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i; j < n_; ++j) {
      g(i, j) = component(i, j).eval(p.coords());
      g(j, i) = g(i, j);
    }
  return g;
}

void Metric::eval_with_gradient(const Point& p, Matrix& value, std::vector<Matrix>& gradient) const {
  if (p.dim() != n_) throw DimensionError("metric and point dimensions differ");
  value = Matrix(n_, n_);
  gradient.assign(n_, Matrix(n_, n_));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i; j < n_; ++j) {
      const Dual d = component(i, j).eval_dual(p.coords());
      value(i, j) = value(j, i) = d.value;
      for (std::size_t l = 0; l < n_; ++l) gradient[l](i, j) = gradient[l](j, i) = d.partials[l];
    }
}

double Metric::inner(const Point& p, const Vector& u, const Vector& v) const { return dot(u, at(p) * v); }

void Metric::check_positive_definite(const Point& p) const {
  try {
    (void)cholesky(at(p));
  } catch (const NotPositiveDefiniteError&) {
    throw NotPositiveDefiniteError("metric is not positive definite at " + to_string(p));
  }
}

TangentVector lie_bracket_eval(const VectorField& x, const VectorField& y, const Point& p) {
  if (x.dim() != y.dim()) throw DimensionError("bracket of fields with different dimensions");
  TangentVector xv, yv;
  Matrix jx, jy;
  x.eval_with_jacobian(p, xv, jx);
  y.eval_with_jacobian(p, yv, jy);
  return jy * xv - jx * yv;
}

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  if (x.dim() != y.dim()) throw DimensionError("bracket of fields with different dimensions");
  const std::size_t n = x.dim();
  std::vector<Expression> c(n);
  for (std::size_t k = 0; k < n; ++k) {
    Expression s;
    for (std::size_t j = 0; j < n; ++j) s = s + x[j] * y[k].derivative(j) - y[j] * x[k].derivative(j);
    c[k] = s;
  }
  return VectorField(std::move(c));
}

Matrix exterior_derivative_eval(const OneForm& theta, const Point& p) {
  const Matrix j = theta.jacobian_at(p);  // j(i, l) = d_l theta_i
  const std::size_t n = theta.dim();
  Matrix d(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      d(a, b) = j(b, a) - j(a, b);
      d(b, a) = -d(a, b);
    }
  return d;
}

SampledResidual frobenius_residual(const OneForm& theta, std::span<const Point> points) {
  SampledResidual out;
  const std::size_t n = theta.dim();
  for (const Point& p : points) {
    double worst = 0.0;
    if (n >= 3) {
      const Matrix d = exterior_derivative_eval(theta, p);
      const Vector t = theta.at(p);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          for (std::size_t k = j + 1; k < n; ++k) {
            const double w = d(i, j) * t[k] + d(j, k) * t[i] + d(k, i) * t[j];
            worst = std::max(worst, std::abs(w));
          }
    }
    out.record(worst, p);
  }
  return out;
}

}  // namespace sffd
