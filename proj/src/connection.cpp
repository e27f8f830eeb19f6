#include "sffd/connection.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "sffd/errors.hpp"

namespace sffd {

Vector Christoffels::contract(const Vector& u, const Vector& v) const {
  Vector r(n_);
  for (std::size_t k = 0; k < n_; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (u[i] == 0.0) continue;
      for (std::size_t j = 0; j < n_; ++j) s += (*this)(k, i, j) * u[i] * v[j];
    }
    r[k] = s;
  }
  return r;
}

Vector Christoffels::torsion(const Vector& u, const Vector& v) const {
  Vector r(n_);
  for (std::size_t k = 0; k < n_; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) s += ((*this)(k, i, j) - (*this)(k, j, i)) * u[i] * v[j];
    r[k] = s;
  }
  return r;
}

double Christoffels::max_torsion() const {
  double m = 0.0;
  for (std::size_t k = 0; k < n_; ++k)
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) m = std::max(m, std::abs((*this)(k, i, j) - (*this)(k, j, i)));
  return m;
}

Connection Connection::flat(std::size_t n) { return Connection(n); }

Connection Connection::from_entries(std::size_t n, std::vector<Entry> entries) {
  Connection c(n);
  for (auto& e : entries) {
    if (e.k >= n || e.i >= n || e.j >= n) throw DimensionError("Christoffel index out of range");
    if (e.value.arity() > n) throw DimensionError("Christoffel expression references a coordinate beyond the chart");
    for (const auto& prev : c.entries_)
      if (prev.k == e.k && prev.i == e.i && prev.j == e.j)
        throw DimensionError("duplicate Christoffel component");
    if (e.value.is_zero()) continue;
    c.entries_.push_back(std::move(e));
  }
  std::sort(c.entries_.begin(), c.entries_.end(),
            [](const Entry& a, const Entry& b) { return std::tie(a.k, a.i, a.j) < std::tie(b.k, b.i, b.j); });
  return c;
}

Connection Connection::from_evaluator(std::size_t n, Evaluator evaluator) {
  Connection c(n);
  c.evaluator_ = std::move(evaluator);
  return c;
}

Christoffels Connection::at(const Point& p) const {
  if (p.dim() != n_) throw DimensionError("connection and point dimensions differ");
  if (evaluator_) return evaluator_(p);
  Christoffels g(n_);
  for (const auto& e : entries_) g(e.k, e.i, e.j) = e.value.eval(p.coords());
  return g;
}

TangentVector covariant_derivative_along(const Connection& conn, const TangentVector& xi, const VectorField& y,
                                         const Point& p) {
  TangentVector yv;
  Matrix jy;
  y.eval_with_jacobian(p, yv, jy);
  return jy * xi + conn.at(p).contract(xi, yv);
}

TangentVector covariant_derivative_eval(const Connection& conn, const VectorField& x, const VectorField& y,
                                        const Point& p) {
  return covariant_derivative_along(conn, x.at(p), y, p);
}

TangentVector torsion_eval(const Connection& conn, const VectorField& x, const VectorField& y, const Point& p) {
  return covariant_derivative_eval(conn, x, y, p) - covariant_derivative_eval(conn, y, x, p) -
         lie_bracket_eval(x, y, p);
}

TangentVector torsion_of_vectors(const Connection& conn, const TangentVector& u, const TangentVector& v,
                                 const Point& p) {
  return conn.at(p).torsion(u, v);
}

namespace {

// Classical RK4 over a flat state vector. `rhs(y)` returns y'. Every
// accepted state is handed to `check(step, y)`.
template <typename Rhs, typename Check>
Vector rk4(Vector y, double dt, int steps, Rhs&& rhs, Check&& check) {
  if (steps < 1) throw IntegrationError(0, "step count must be at least 1");
  for (int s = 0; s < steps; ++s) {
    try {
      const Vector k1 = rhs(y);
      const Vector k2 = rhs(y + (0.5 * dt) * k1);
      const Vector k3 = rhs(y + (0.5 * dt) * k2);
      const Vector k4 = rhs(y + dt * k3);
      y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } catch (const DomainError& e) {
      throw IntegrationError(s + 1, e.what());
    }
    check(s + 1, y);
  }
  return y;
}

Point head(const Vector& y, std::size_t n) {
  return Point(std::vector<double>(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n)));
}

auto domain_check(const Chart* chart, std::size_t n) {
  return [chart, n](int step, const Vector& y) {
    for (std::size_t i = 0; i < n; ++i)
      if (!std::isfinite(y[i])) throw IntegrationError(step, "state became non-finite");
    if (chart && !chart->contains(head(y, n)))
      throw IntegrationError(step, "curve left the chart domain at " + to_string(head(y, n)));
  };
}

void require_start_inside(const Chart* chart, const Point& x0) {
  if (chart && !chart->contains(x0)) throw IntegrationError(0, "start point " + to_string(x0) + " is outside the chart domain");
}

}  // namespace

Point flow_advance(const VectorField& z, const Point& x0, double t, int steps, const Chart* chart) {
  const std::size_t n = z.dim();
  if (x0.dim() != n) throw DimensionError("field and point dimensions differ");
  require_start_inside(chart, x0);
  const Vector y = rk4(x0.as_vector(), t / steps, steps, [&](const Vector& s) { return z.at(Point(s)); },
                       domain_check(chart, n));
  return Point(y);
}

FlowWithJacobian flow_with_jacobian(const VectorField& z, const Point& x0, double t, int steps,
                                    const Chart* chart) {
  const std::size_t n = z.dim();
  if (x0.dim() != n) throw DimensionError("field and point dimensions differ");
  require_start_inside(chart, x0);
  Vector y0(n + n * n);
  for (std::size_t i = 0; i < n; ++i) {
    y0[i] = x0[i];
    y0[n + i * n + i] = 1.0;
  }
  auto rhs = [&](const Vector& y) {
    Vector zv;
    Matrix dz;
    z.eval_with_jacobian(head(y, n), zv, dz);
    Vector out(n + n * n);
    for (std::size_t i = 0; i < n; ++i) out[i] = zv[i];
    // J' = DZ J, J row-major after the point
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += dz(i, k) * y[n + k * n + j];
        out[n + i * n + j] = s;
      }
    return out;
  };
  const Vector y = rk4(y0, t / steps, steps, rhs, domain_check(chart, n));
  FlowWithJacobian out{head(y, n), Matrix(n, n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.jacobian(i, j) = y[n + i * n + j];
  return out;
}

Matrix flow_jacobian(const VectorField& z, const Point& x0, double t, int steps, const Chart* chart) {
  return flow_with_jacobian(z, x0, t, steps, chart).jacobian;
}

CurveState transport_along_flow(const Connection& conn, const VectorField& z, const CurveState& start, double dt,
                                int steps, const Chart* chart) {
  const std::size_t n = z.dim();
  if (start.point.dim() != n || conn.dim() != n) throw DimensionError("transport dimensions differ");
  if (!start.carried || start.carried->size() != n) throw DimensionError("transport needs a carried vector of the chart dimension");
  require_start_inside(chart, start.point);
  Vector y0(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    y0[i] = start.point[i];
    y0[n + i] = (*start.carried)[i];
  }
  auto rhs = [&](const Vector& y) {
    const Point x = head(y, n);
    const Vector zv = z.at(x);
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = y[n + i];
    const Vector dv = conn.at(x).contract(zv, v);
    Vector out(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = zv[i];
      out[n + i] = -dv[i];
    }
    return out;
  };
  const Vector y = rk4(y0, dt, steps, rhs, domain_check(chart, n));
  Vector carried(n);
  for (std::size_t i = 0; i < n; ++i) carried[i] = y[n + i];
  return CurveState{head(y, n), start.time + dt * steps, carried};
}

TangentVector parallel_transport(const Connection& conn, const VectorField& z, const Point& x0,
                                 const TangentVector& v, double t, int steps, TransportDirection direction,
                                 const Chart* chart) {
  if (steps < 1) throw IntegrationError(0, "step count must be at least 1");
  if (direction == TransportDirection::Forward)
    return *transport_along_flow(conn, z, CurveState{x0, 0.0, v}, t / steps, steps, chart).carried;
  const Point end = flow_advance(z, x0, t, steps, chart);
  return *transport_along_flow(conn, z, CurveState{end, t, v}, -t / steps, steps, chart).carried;
}

Autoparallel autoparallel_advance(const Connection& conn, const Point& x0, const TangentVector& v0, double t,
                                  int steps, const Chart* chart) {
  const std::size_t n = conn.dim();
  if (x0.dim() != n || v0.size() != n) throw DimensionError("autoparallel dimensions differ");
  require_start_inside(chart, x0);
  Vector y0(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    y0[i] = x0[i];
    y0[n + i] = v0[i];
  }
  auto rhs = [&](const Vector& y) {
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = y[n + i];
    const Vector acc = conn.at(head(y, n)).contract(v, v);
    Vector out(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = v[i];
      out[n + i] = -acc[i];
    }
    return out;
  };
  const Vector y = rk4(y0, t / steps, steps, rhs, domain_check(chart, n));
  Vector vel(n);
  for (std::size_t i = 0; i < n; ++i) vel[i] = y[n + i];
  return Autoparallel{head(y, n), vel};
}

}  // namespace sffd
