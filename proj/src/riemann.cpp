#include "sffd/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sffd/errors.hpp"
#include "sffd/shape.hpp"

namespace sffd {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

using ExprMatrix = std::vector<std::vector<Expression>>;

// Laplace expansion along the first row.
Expression determinant(const ExprMatrix& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  Expression det;
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c].is_zero()) continue;
    ExprMatrix minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Expression> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      minor.push_back(std::move(row));
    }
    const Expression term = m[0][c] * determinant(minor);
    det = (c % 2 == 0) ? det + term : det - term;
  }
  return det;
}

ExprMatrix cofactor_inverse(const Metric& g) {
  const std::size_t n = g.dim();
  ExprMatrix m(n, std::vector<Expression>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = g.component(i, j);
  const Expression det = determinant(m);
  ExprMatrix inv(n, std::vector<Expression>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      // inverse(i, j) = cofactor(j, i) / det; g symmetric so cofactor(j, i) = cofactor(i, j)
      ExprMatrix minor;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == j) continue;
        std::vector<Expression> row;
        for (std::size_t c = 0; c < n; ++c)
          if (c != i) row.push_back(m[r][c]);
        minor.push_back(std::move(row));
      }
      Expression cof = determinant(minor);
      if ((i + j) % 2 == 1) cof = -cof;
      inv[i][j] = cof.is_zero() ? Expression() : cof / det;
      inv[j][i] = inv[i][j];
    }
  return inv;
}

Connection levi_civita_symbolic(const Metric& g) {
  const std::size_t n = g.dim();
  const ExprMatrix inv = cofactor_inverse(g);
  // dg[l][i][j] = d_l g_ij
  std::vector<ExprMatrix> dg(n, ExprMatrix(n, std::vector<Expression>(n)));
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        dg[l][i][j] = g.component(i, j).derivative(l);
        dg[l][j][i] = dg[l][i][j];
      }
  const Expression half = Expression::constant(0.5);
  std::vector<Connection::Entry> entries;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        Expression s;
        for (std::size_t l = 0; l < n; ++l) {
          if (inv[k][l].is_zero()) continue;
          const Expression bracket = dg[i][j][l] + dg[j][i][l] - dg[l][i][j];
          if (bracket.is_zero()) continue;
          s = s + inv[k][l] * bracket;
        }
        if (s.is_zero()) continue;
        const Expression gamma = half * s;
        entries.push_back({k, i, j, gamma});
        if (i != j) entries.push_back({k, j, i, gamma});
      }
  return Connection::from_entries(n, std::move(entries));
}

Connection levi_civita_pointwise(const Metric& g) {
  const std::size_t n = g.dim();
  return Connection::from_evaluator(n, [g, n](const Point& p) {
    Matrix value;
    std::vector<Matrix> grad;
    g.eval_with_gradient(p, value, grad);
    Matrix inv;
    try {
      inv = LuDecomposition(value).inverse();
    } catch (const DegenerateFrameError&) {
      throw DomainError("metric is not invertible at " + to_string(p));
    }
    Christoffels gamma(n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
          double s = 0.0;
          for (std::size_t l = 0; l < n; ++l) s += inv(k, l) * (grad[i](j, l) + grad[j](i, l) - grad[l](i, j));
          gamma(k, i, j) = gamma(k, j, i) = 0.5 * s;
        }
    return gamma;
  });
}

void require_symmetric(const Connection& conn, const Point& p) {
  const double t = conn.at(p).max_torsion();
  if (t > 1e-10)
    throw TorsionfulConnectionError("connection has torsion " + fmt(t) + " at " + to_string(p) +
                                    "; this is the Riemannian specialisation");
}

void check_unit_normal(const Metric& g, const Distribution& dist, const TangentVector& n, const Point& p) {
  const Matrix gp = g.at(p);
  const double len = dot(n, gp * n);
  if (std::abs(len - 1.0) > 1e-9)
    throw InvalidSetupError("normal is not unit length at " + to_string(p) + " (g(N,N) = " + fmt(len) + ")");
  for (const auto& x : dist.span()) {
    const double ip = dot(x.at(p), gp * n);
    if (std::abs(ip) > 1e-9)
      throw InvalidSetupError("normal is not orthogonal to the distribution at " + to_string(p) + " (g(X,N) = " +
                              fmt(ip) + ")");
  }
}

}  // namespace

Connection levi_civita(const Metric& g) {
  if (g.dim() <= kMaxSymbolicMetricDim) return levi_civita_symbolic(g);
  return levi_civita_pointwise(g);
}

double metric_compatibility_residual(const Metric& g, const Connection& conn, const Point& p) {
  const std::size_t n = g.dim();
  Matrix value;
  std::vector<Matrix> grad;
  g.eval_with_gradient(p, value, grad);
  const Christoffels gamma = conn.at(p);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        double r = grad[i](j, k);
        for (std::size_t l = 0; l < n; ++l) r -= gamma(l, i, j) * value(l, k) + gamma(l, i, k) * value(j, l);
        worst = std::max(worst, std::abs(r));
      }
  return worst;
}

GaussDecomposition gauss_decomposition(const Connection& conn, const Distribution& dist, const VectorField& x,
                                       const VectorField& y, const Point& p) {
  require_symmetric(conn, p);
  require_integrable_at(dist, p);
  require_in_distribution(dist, x, p);
  require_in_distribution(dist, y, p);
  const Projection split = project(dist, covariant_derivative_eval(conn, x, y, p), p);
  return GaussDecomposition{split.top, split.bot};
}

SampledResidual classical_sff_symmetry_residual(const Connection& conn, const Distribution& dist,
                                                std::span<const Point> points, const Metric* g) {
  SampledResidual out;
  const auto& span = dist.span();
  bool warned = false;
  for (const Point& p : points) {
    require_symmetric(conn, p);
    try {
      double worst = 0.0;
      for (std::size_t a = 0; a < span.size(); ++a)
        for (std::size_t b = a + 1; b < span.size(); ++b) {
          const TangentVector ab = second_fundamental_form(conn, dist, span[a], span[b], p);
          const TangentVector ba = second_fundamental_form(conn, dist, span[b], span[a], p);
          worst = std::max(worst, (ab - ba).norm_inf());
        }
      out.record(worst, p);
    } catch (const DegenerateFrameError& e) {
      out.skipped.push_back(p);
      out.warnings.push_back(std::string("skipped: ") + e.what());
      continue;
    }
    if (g && !warned) {
      const Matrix gp = g->at(p);
      for (const auto& x : span)
        for (const auto& c : dist.complement())
          if (!warned && std::abs(dot(x.at(p), gp * c.at(p))) > 1e-9) {
            out.warnings.push_back("complement is not g-orthogonal to D at " + to_string(p) +
                                   "; symmetry still holds since T = 0");
            warned = true;
          }
    }
  }
  return out;
}

TangentVector unit_normal_at(const Metric& g, const OneForm& theta, const Point& p) {
  const Vector t = theta.at(p);
  const Vector raised = LuDecomposition(g.at(p)).solve(t);
  const double len2 = dot(t, raised);
  if (!(len2 > 0.0)) throw InvalidSetupError("constraint form vanishes at " + to_string(p));
  return (1.0 / std::sqrt(len2)) * raised;
}

double scalar_sff(const Metric& g, const Connection& conn, const Distribution& dist, const TangentVector& unit_normal,
                  const VectorField& x, const VectorField& y, const Point& p) {
  check_unit_normal(g, dist, unit_normal, p);
  return g.inner(p, second_fundamental_form(conn, dist, x, y, p), unit_normal);
}

double scalar_sff(const Metric& g, const Connection& conn, const Distribution& dist, const VectorField& unit_normal,
                  const VectorField& x, const VectorField& y, const Point& p) {
  return scalar_sff(g, conn, dist, unit_normal.at(p), x, y, p);
}

PrincipalData principal_curvatures(const Metric& g, const Connection& conn, const Distribution& dist,
                                   const TangentVector& unit_normal, const Point& p, std::string orientation) {
  check_unit_normal(g, dist, unit_normal, p);
  const auto& span = dist.span();
  const std::size_t r = span.size();
  const Matrix gp = g.at(p);
  PrincipalData out{p, Matrix(r, r), Matrix(r, r), {}, {}, std::move(orientation)};
  std::vector<TangentVector> frame;
  for (const auto& x : span) frame.push_back(x.at(p));
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b) {
      out.h(a, b) = dot(second_fundamental_form(conn, dist, span[a], span[b], p), gp * unit_normal);
      out.gram(a, b) = dot(frame[a], gp * frame[b]);
    }
  GeneralizedEigen eig;
  try {
    eig = sym_gen_eigen(out.h, out.gram, 1e-9);
  } catch (const AsymmetricFormError& e) {
    throw AsymmetricFormError(std::string(e.what()) + " at " + to_string(p) +
                              "; the connection has torsion, use symmetry_obstruction_eval");
  }
  out.kappa = eig.values;
  for (const Vector& v : eig.vectors) {
    TangentVector dir(g.dim());
    for (std::size_t a = 0; a < r; ++a) dir += v[a] * frame[a];
    out.frame.push_back(dir);
  }
  return out;
}

PrincipalData principal_curvatures(const Metric& g, const Connection& conn, const Distribution& dist,
                                   const VectorField& unit_normal, const Point& p, std::string orientation) {
  return principal_curvatures(g, conn, dist, unit_normal.at(p), p, std::move(orientation));
}

Codim1Setup Codim1Setup::create(OneForm theta, VectorField normal, std::vector<VectorField> span, Connection conn,
                                std::span<const Point> points, std::optional<Metric> metric, Codim1Tolerances tol) {
  const std::size_t n = theta.dim();
  if (normal.dim() != n || conn.dim() != n || (metric && metric->dim() != n))
    throw DimensionError("codimension-one data have inconsistent dimensions");
  if (span.size() + 1 != n) throw DimensionError("codimension-one distribution needs n - 1 spanning fields");
  DistributionTolerances dtol;
  dtol.annihilation = tol.annihilation;
  Distribution dist(std::move(span), {normal}, {theta}, dtol);
  for (const Point& p : points) {
    const double tn = theta.apply(p, normal.at(p));
    if (std::abs(tn - 1.0) > tol.normalization)
      throw InvalidSetupError("theta(N) = " + fmt(tn) + " at " + to_string(p) + ", expected 1");
    dist.validate_at(p);
  }
  const SampledResidual fr = frobenius_residual(theta, points);
  if (fr.max > tol.frobenius)
    throw InvalidSetupError("constraint form fails the Frobenius condition at " + to_string(*fr.worst) +
                            " (|d theta ^ theta| = " + fmt(fr.max) + ")");
  return Codim1Setup(std::move(theta), std::move(normal), std::move(dist), std::move(conn), std::move(metric), tol);
}

VectorField normal_from_gauge(const OneForm& theta, const VectorField& gauge) {
  if (theta.dim() != gauge.dim()) throw DimensionError("gauge field and form dimensions differ");
  Expression pairing;
  for (std::size_t i = 0; i < theta.dim(); ++i) pairing = pairing + theta[i] * gauge[i];
  std::vector<Expression> c;
  for (std::size_t i = 0; i < gauge.dim(); ++i) c.push_back(gauge[i] / pairing);
  return VectorField(std::move(c));
}

namespace {

void codim1_gate(const Codim1Setup& setup, const VectorField& x, const VectorField& y, const Point& p) {
  const Distribution& dist = setup.distribution();
  require_integrable_at(dist, p);
  require_in_distribution(dist, x, p);
  require_in_distribution(dist, y, p);
}

}  // namespace

double h_D_eval(const Codim1Setup& setup, const VectorField& x, const VectorField& y, const Point& p) {
  codim1_gate(setup, x, y, p);
  const Vector t = setup.theta().at(p);
  const TangentVector nabla = covariant_derivative_eval(setup.connection(), x, y, p);
  const double direct = dot(t, nabla);
  const double projected = dot(t, project(setup.distribution(), nabla, p).bot);
  if (std::abs(direct - projected) > setup.tolerances().cross_check * (1.0 + std::abs(direct)))
    throw InvalidSetupError("theta(nabla_X Y) and theta(II_D(X,Y)) disagree at " + to_string(p) + " (" +
                            fmt(direct) + " vs " + fmt(projected) + ")");
  return direct;
}

double a_star_theta_eval(const Codim1Setup& setup, const VectorField& x, const VectorField& y, const Point& p) {
  codim1_gate(setup, x, y, p);
  return setup.theta().apply(p, shape_map_eval(setup.connection(), x, y.at(p), p));
}

double symmetry_obstruction_eval(const Codim1Setup& setup, const VectorField& x, const VectorField& y,
                                 const Point& p) {
  codim1_gate(setup, x, y, p);
  return setup.theta().apply(p, torsion_eval(setup.connection(), x, y, p));
}

ScalarFormSplit scalar_form_split(const Codim1Setup& setup, const Point& p) {
  const auto& span = setup.distribution().span();
  const std::size_t r = span.size();
  ScalarFormSplit out{Matrix(r, r), Matrix(r, r), Matrix(r, r), Matrix(r, r), Matrix(r, r)};
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b) {
      out.h(a, b) = h_D_eval(setup, span[a], span[b], p);
      out.a_star(a, b) = a_star_theta_eval(setup, span[a], span[b], p);
      out.obstruction(a, b) = symmetry_obstruction_eval(setup, span[a], span[b], p);
    }
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b) {
      out.symmetric(a, b) = 0.5 * (out.h(a, b) + out.h(b, a));
      out.skew(a, b) = 0.5 * (out.h(a, b) - out.h(b, a));
    }
  return out;
}

}  // namespace sffd
