#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace sffd {

// Small dense real vector. Tangent vectors, covectors and coefficient
// arrays are all carried by this type.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n, double fill = 0.0) : data_(n, fill) {}
  Vector(std::initializer_list<double> values) : data_(values) {}
  explicit Vector(std::vector<double> values) : data_(std::move(values)) {}

  std::size_t size() const { return data_.size(); }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<const double> span() const { return data_; }
  const std::vector<double>& values() const { return data_; }

  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  Vector& operator+=(const Vector& o);
  Vector& operator-=(const Vector& o);
  Vector& operator*=(double s);

  double norm_inf() const;
  double norm2() const;

  bool operator==(const Vector&) const = default;

 private:
  std::vector<double> data_;
};

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator-(Vector a);
Vector operator*(double s, Vector a);
Vector operator*(Vector a, double s);
double dot(const Vector& a, const Vector& b);

// Row-major dense matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  // Matrix whose columns are the given vectors (all of equal size).
  static Matrix from_columns(std::span<const Vector> columns);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vector column(std::size_t j) const;
  Matrix transpose() const;
  double max_abs() const;
  // max |A - A^T|
  double asymmetry() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Vector operator*(const Matrix& a, const Vector& v);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

// LU factorisation with partial pivoting. Throws DegenerateFrameError when
// an exact zero pivot shows up.
class LuDecomposition {
 public:
  explicit LuDecomposition(const Matrix& a);

  Vector solve(const Vector& b) const;
  Matrix inverse() const;
  double determinant() const;
  // 1-norm condition number, computed from the explicit inverse.
  double condition_estimate() const;

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
  int sign_ = 1;
  double norm1_ = 0.0;
};

// Lower-triangular L with A = L L^T. Throws NotPositiveDefiniteError.
Matrix cholesky(const Matrix& a);

// Frames whose condition estimate exceeds this are treated as degenerate.
inline constexpr double kMaxFrameCondition = 1e12;

// Coefficients c with sum_a c[a] * frame[a] = v.
// Throws DegenerateFrameError if the frame is (numerically) dependent.
Vector decompose_in_frame(std::span<const Vector> frame, const Vector& v);

struct GeneralizedEigen {
  Vector values;                // ascending
  std::vector<Vector> vectors;  // G-orthonormal, vectors[a] pairs with values[a]
  int sweeps = 0;
};

// Solves H v = lambda G v for symmetric H and symmetric positive definite G
// via Cholesky reduction and cyclic Jacobi rotations.
// Throws AsymmetricFormError if |H - H^T| exceeds `symmetry_tol`, and
// NotPositiveDefiniteError if G has no Cholesky factor.
GeneralizedEigen sym_gen_eigen(const Matrix& h, const Matrix& g, double symmetry_tol = 1e-9);

std::string to_string(const Vector& v);

}  // namespace sffd
