#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "sffd/geometry.hpp"

namespace sffd {

// Christoffel symbols evaluated at one point.
// Convention, project-wide: nabla_{d_i} d_j = Gamma^k_ij d_k, so
// torsion components are T^k_ij = Gamma^k_ij - Gamma^k_ji.
class Christoffels {
 public:
  explicit Christoffels(std::size_t n) : n_(n), data_(n * n * n, 0.0) {}

  std::size_t dim() const { return n_; }
  double& operator()(std::size_t k, std::size_t i, std::size_t j) { return data_[(k * n_ + i) * n_ + j]; }
  double operator()(std::size_t k, std::size_t i, std::size_t j) const { return data_[(k * n_ + i) * n_ + j]; }

  // Gamma^k_ij u^i v^j
  Vector contract(const Vector& u, const Vector& v) const;
  // T^k_ij u^i v^j
  Vector torsion(const Vector& u, const Vector& v) const;
  // max |Gamma^k_ij - Gamma^k_ji|
  double max_torsion() const;

 private:
  std::size_t n_;
  std::vector<double> data_;
};

// A linear connection on the chart, not necessarily symmetric.
//
// Usually backed by a sparse list of Christoffel expressions. Connections
// built pointwise (the Levi-Civita path for n > 4) carry an evaluator
// instead and expose no expressions.
class Connection {
 public:
  struct Entry {
    std::size_t k, i, j;  // Gamma^k_ij, 0-based
    Expression value;
  };
  using Evaluator = std::function<Christoffels(const Point&)>;

  static Connection flat(std::size_t n);
  // Zero entries are dropped; repeated (k, i, j) is an error.
  static Connection from_entries(std::size_t n, std::vector<Entry> entries);
  static Connection from_evaluator(std::size_t n, Evaluator evaluator);

  std::size_t dim() const { return n_; }
  bool has_expressions() const { return !evaluator_; }
  const std::vector<Entry>& entries() const { return entries_; }

  Christoffels at(const Point& p) const;

 private:
  Connection(std::size_t n) : n_(n) {}

  std::size_t n_;
  std::vector<Entry> entries_;
  Evaluator evaluator_;
};

// (nabla_X Y)^k = X^i d_i Y^k + Gamma^k_ij X^i Y^j at p.
TangentVector covariant_derivative_eval(const Connection& conn, const VectorField& x, const VectorField& y,
                                        const Point& p);

// nabla_xi Y for a tangent vector xi at p.
TangentVector covariant_derivative_along(const Connection& conn, const TangentVector& xi, const VectorField& y,
                                         const Point& p);

// T(X,Y) = nabla_X Y - nabla_Y X - [X,Y], evaluated from its three terms.
TangentVector torsion_eval(const Connection& conn, const VectorField& x, const VectorField& y, const Point& p);

// T(u, v) = T^k_ij u^i v^j for tangent vectors at p.
TangentVector torsion_of_vectors(const Connection& conn, const TangentVector& u, const TangentVector& v,
                                 const Point& p);

// State carried along a curve by the integrators.
struct CurveState {
  Point point;
  double time = 0.0;
  std::optional<TangentVector> carried;
};

// zeta_t(x0) by fixed-step RK4. A chart, when given, is checked at every
// step; leaving it raises IntegrationError.
Point flow_advance(const VectorField& z, const Point& x0, double t, int steps, const Chart* chart = nullptr);

struct FlowWithJacobian {
  Point point;
  Matrix jacobian;  // d(zeta_t)/dx at x0
};

// Flow together with the variational equation J' = DZ(x(t)) J, J(0) = I.
FlowWithJacobian flow_with_jacobian(const VectorField& z, const Point& x0, double t, int steps,
                                    const Chart* chart = nullptr);

Matrix flow_jacobian(const VectorField& z, const Point& x0, double t, int steps, const Chart* chart = nullptr);

enum class TransportDirection { Forward, Inverse };

// Parallel transport along the integral curve of Z through x0.
// Forward carries v from x0 to zeta_t(x0). Inverse carries v, given at
// zeta_t(x0), back to x0 by integrating the same equation backward in time.
TangentVector parallel_transport(const Connection& conn, const VectorField& z, const Point& x0,
                                 const TangentVector& v, double t, int steps, TransportDirection direction,
                                 const Chart* chart = nullptr);

// Co-integrates the curve x' = Z(x) and V' = -Gamma(x)(Z(x), V) from `start`.
CurveState transport_along_flow(const Connection& conn, const VectorField& z, const CurveState& start, double dt,
                                int steps, const Chart* chart = nullptr);

struct Autoparallel {
  Point point;
  TangentVector velocity;
};

// x'' + Gamma(x)(x', x') = 0 by fixed-step RK4.
Autoparallel autoparallel_advance(const Connection& conn, const Point& x0, const TangentVector& v0, double t,
                                  int steps, const Chart* chart = nullptr);

}  // namespace sffd
