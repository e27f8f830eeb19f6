#include "sffd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "sffd/errors.hpp"

namespace sffd {

Vector& Vector::operator+=(const Vector& o) {
  if (o.size() != size()) throw DimensionError("vector size mismatch");
  for (std::size_t i = 0; i < size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& o) {
  if (o.size() != size()) throw DimensionError("vector size mismatch");
  for (std::size_t i = 0; i < size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Vector& Vector::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

double Vector::norm_inf() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Vector::norm2() const { return std::sqrt(dot(*this, *this)); }

Vector operator+(Vector a, const Vector& b) { return a += b; }
Vector operator-(Vector a, const Vector& b) { return a -= b; }
Vector operator-(Vector a) { return a *= -1.0; }
Vector operator*(double s, Vector a) { return a *= s; }
Vector operator*(Vector a, double s) { return a *= s; }

double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionError("vector size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ragged matrix initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_columns(std::span<const Vector> columns) {
  const std::size_t n = columns.empty() ? 0 : columns.front().size();
  Matrix m(n, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != n) throw DimensionError("frame vectors differ in size");
    for (std::size_t i = 0; i < n; ++i) m(i, j) = columns[j][i];
  }
  return m;
}

Vector Matrix::column(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Matrix::asymmetry() const {
  double m = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j) m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
  return m;
}

Vector operator*(const Matrix& a, const Vector& v) {
  if (a.cols() != v.size()) throw DimensionError("matrix-vector size mismatch");
  Vector r(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product size mismatch");
  Matrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  Matrix r = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) += b(i, j);
  return r;
}

Matrix operator-(const Matrix& a, const Matrix& b) { return a + (-1.0) * b; }

Matrix operator*(double s, const Matrix& a) {
  Matrix r = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) *= s;
  return r;
}

LuDecomposition::LuDecomposition(const Matrix& a) : lu_(a), perm_(a.rows()) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DimensionError("LU of a non-square matrix");
  std::iota(perm_.begin(), perm_.end(), 0);
  for (std::size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < n; ++i) col += std::abs(a(i, j));
    norm1_ = std::max(norm1_, col);
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu_(i, k)) > std::abs(lu_(piv, k))) piv = i;
    if (lu_(piv, k) == 0.0) throw DegenerateFrameError("singular matrix (zero pivot in column " + std::to_string(k) + ")");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(piv, j));
      std::swap(perm_[k], perm_[piv]);
      sign_ = -sign_;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      lu_(i, k) /= lu_(k, k);
      const double f = lu_(i, k);
      for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
    }
  }
}

Vector LuDecomposition::solve(const Vector& b) const {
  const std::size_t n = lu_.rows();
  if (b.size() != n) throw DimensionError("LU solve size mismatch");
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[perm_[i]];
    for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
    x[i] = s / lu_(i, i);
  }
  return x;
}

Matrix LuDecomposition::inverse() const {
  const std::size_t n = lu_.rows();
  Matrix inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Vector e(n);
    e[j] = 1.0;
    const Vector c = solve(e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = c[i];
  }
  return inv;
}

double LuDecomposition::determinant() const {
  double d = sign_;
  for (std::size_t i = 0; i < lu_.rows(); ++i) d *= lu_(i, i);
  return d;
}

double LuDecomposition::condition_estimate() const {
  const Matrix inv = inverse();
  double inv_norm = 0.0;
  for (std::size_t j = 0; j < inv.cols(); ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < inv.rows(); ++i) col += std::abs(inv(i, j));
    inv_norm = std::max(inv_norm, col);
  }
  return norm1_ * inv_norm;
}

Matrix cholesky(const Matrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DimensionError("Cholesky of a non-square matrix");
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) throw NotPositiveDefiniteError("matrix is not positive definite (pivot " + std::to_string(j) + ")");
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

Vector decompose_in_frame(std::span<const Vector> frame, const Vector& v) {
  if (frame.size() != v.size()) throw DimensionError("frame size does not match vector dimension");
  const LuDecomposition lu(Matrix::from_columns(frame));
  const double cond = lu.condition_estimate();
  if (!(cond <= kMaxFrameCondition)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", cond);
    throw DegenerateFrameError(std::string("degenerate frame (condition estimate ") + buf + ")");
  }
  return lu.solve(v);
}

namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

// Solves L^T x = y for lower-triangular L.
Vector back_substitute_transpose(const Matrix& l, const Vector& y) {
  const std::size_t n = l.rows();
  Vector x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = y[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * x[k];
    x[i] = s / l(i, i);
  }
  return x;
}

// Solves L x = b for lower-triangular L.
Vector forward_substitute(const Matrix& l, const Vector& b) {
  const std::size_t n = l.rows();
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * x[k];
    x[i] = s / l(i, i);
  }
  return x;
}

}  // namespace

GeneralizedEigen sym_gen_eigen(const Matrix& h, const Matrix& g, double symmetry_tol) {
  const std::size_t n = h.rows();
  if (h.cols() != n || g.rows() != n || g.cols() != n) throw DimensionError("eigenproblem size mismatch");
  if (h.asymmetry() > symmetry_tol) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", h.asymmetry());
    throw AsymmetricFormError(std::string("form is not symmetric (|H - H^T| = ") + buf + ")");
  }
  if (g.asymmetry() > symmetry_tol) throw NotPositiveDefiniteError("Gram matrix is not symmetric");

  const Matrix l = cholesky(g);

  // C = L^-1 H L^-T, symmetrised.
  Matrix c(n, n);
  {
    Matrix tmp(n, n);  // L^-1 H
    for (std::size_t j = 0; j < n; ++j) {
      const Vector col = forward_substitute(l, h.column(j));
      for (std::size_t i = 0; i < n; ++i) tmp(i, j) = col[i];
    }
    const Matrix tmp_t = tmp.transpose();  // H L^-T
    for (std::size_t j = 0; j < n; ++j) {
      const Vector col = forward_substitute(l, tmp_t.column(j));
      for (std::size_t i = 0; i < n; ++i) c(i, j) = col[i];
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double m = 0.5 * (c(i, j) + c(j, i));
        c(i, j) = m;
        c(j, i) = m;
      }
  }

  Matrix q = Matrix::identity(n);
  const double scale = std::max(1.0, c.max_abs());
  constexpr double kOffDiagonalTol = 1e-12;
  constexpr int kMaxSweeps = 100;
  int sweeps = 0;
  while (off_diagonal_norm(c) > kOffDiagonalTol * scale && sweeps < kMaxSweeps) {
    ++sweeps;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t r = p + 1; r < n; ++r) {
        const double apr = c(p, r);
        if (apr == 0.0) continue;
        const double theta = (c(r, r) - c(p, p)) / (2.0 * apr);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double cs = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * cs;
        for (std::size_t k = 0; k < n; ++k) {
          const double ckp = c(k, p);
          const double ckr = c(k, r);
          c(k, p) = cs * ckp - sn * ckr;
          c(k, r) = sn * ckp + cs * ckr;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double cpk = c(p, k);
          const double crk = c(r, k);
          c(p, k) = cs * cpk - sn * crk;
          c(r, k) = sn * cpk + cs * crk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double qkp = q(k, p);
          const double qkr = q(k, r);
          q(k, p) = cs * qkp - sn * qkr;
          q(k, r) = sn * qkp + cs * qkr;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return c(a, a) < c(b, b); });

  GeneralizedEigen out;
  out.sweeps = sweeps;
  out.values = Vector(n);
  for (std::size_t a = 0; a < n; ++a) {
    out.values[a] = c(order[a], order[a]);
    out.vectors.push_back(back_substitute_transpose(l, q.column(order[a])));
  }

  // G-orthonormalise within clusters of (numerically) equal eigenvalues.
  auto g_dot = [&](const Vector& u, const Vector& v) { return dot(u, g * v); };
  const double cluster_tol = 1e-10 * std::max(1.0, out.values.norm_inf());
  for (std::size_t a = 0; a < n; ++a) {
    Vector& v = out.vectors[a];
    for (std::size_t b = 0; b < a; ++b) {
      if (std::abs(out.values[a] - out.values[b]) > cluster_tol) continue;
      v -= g_dot(out.vectors[b], v) * out.vectors[b];
    }
    v *= 1.0 / std::sqrt(g_dot(v, v));
  }
  return out;
}

std::string to_string(const Vector& v) {
  std::string s = "(";
  char buf[40];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g", v[i]);
    s += (i ? ", " : "") + std::string(buf);
  }
  return s + ")";
}

}  // namespace sffd
