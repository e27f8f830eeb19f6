#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sffd/distribution.hpp"

namespace sffd {

// Levi-Civita connection of g:
//   Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij).
// For n <= 4 the Christoffels are built as expressions (cofactor inverse of
// g). For larger n they are evaluated pointwise with a numeric inverse and
// the result carries no expressions.
Connection levi_civita(const Metric& g);

inline constexpr std::size_t kMaxSymbolicMetricDim = 4;

// max_ijk |d_i g_jk - Gamma^l_ij g_lk - Gamma^l_ik g_jl| at p.
double metric_compatibility_residual(const Metric& g, const Connection& conn, const Point& p);

struct GaussDecomposition {
  TangentVector tangential;  // pi_top(nabla_X Y)
  TangentVector normal;      // pi_bot(nabla_X Y) = II_D(X,Y)
};

// Splits nabla_X Y for a symmetric connection. Throws
// TorsionfulConnectionError if the connection has torsion at p.
GaussDecomposition gauss_decomposition(const Connection& conn, const Distribution& dist, const VectorField& x,
                                       const VectorField& y, const Point& p);

// max over points and spanning pairs of |II_D(X_a,X_b) - II_D(X_b,X_a)|.
// With a metric, a complement that is not g-orthogonal to D is reported as
// a warning. Degenerate points are skipped.
SampledResidual classical_sff_symmetry_residual(const Connection& conn, const Distribution& dist,
                                                std::span<const Point> points, const Metric* g = nullptr);

// g-unit normal to ker(theta), oriented so that theta(N) > 0.
TangentVector unit_normal_at(const Metric& g, const OneForm& theta, const Point& p);

// h(X,Y) = g(II_D(X,Y), N) for a unit normal N at p.
double scalar_sff(const Metric& g, const Connection& conn, const Distribution& dist, const TangentVector& unit_normal,
                  const VectorField& x, const VectorField& y, const Point& p);
double scalar_sff(const Metric& g, const Connection& conn, const Distribution& dist, const VectorField& unit_normal,
                  const VectorField& x, const VectorField& y, const Point& p);

struct PrincipalData {
  Point point;
  Matrix h;                          // h(X_a, X_b) over the spanning frame
  Matrix gram;                       // g(X_a, X_b)
  Vector kappa;                      // ascending
  std::vector<TangentVector> frame;  // principal directions, g-orthonormal
  std::string orientation;           // which normal the signs refer to
};

// Solves h v = kappa G v over the spanning frame. Throws AsymmetricFormError
// when h is not symmetric (use symmetry_obstruction_eval instead).
PrincipalData principal_curvatures(const Metric& g, const Connection& conn, const Distribution& dist,
                                   const TangentVector& unit_normal, const Point& p,
                                   std::string orientation = "declared");
PrincipalData principal_curvatures(const Metric& g, const Connection& conn, const Distribution& dist,
                                   const VectorField& unit_normal, const Point& p,
                                   std::string orientation = "declared");

struct Codim1Tolerances {
  double annihilation = 1e-10;  // |theta(X_a)|
  double normalization = 1e-10; // |theta(N) - 1|
  double frobenius = 1e-9;      // |d theta ^ theta|
  double cross_check = 1e-10;   // theta(nabla_X Y) vs theta(II_D(X,Y))
};

// Codimension-one data: D = ker(theta), D' = Sp{N} with theta(N) = 1.
class Codim1Setup {
 public:
  // Validates the invariants at every sample point; throws InvalidSetupError.
  static Codim1Setup create(OneForm theta, VectorField normal, std::vector<VectorField> span, Connection conn,
                            std::span<const Point> points, std::optional<Metric> metric = std::nullopt,
                            Codim1Tolerances tol = {});

  const OneForm& theta() const { return theta_; }
  const VectorField& normal() const { return normal_; }
  const Distribution& distribution() const { return dist_; }
  const Connection& connection() const { return conn_; }
  const std::optional<Metric>& metric() const { return metric_; }
  const Codim1Tolerances& tolerances() const { return tol_; }

 private:
  Codim1Setup(OneForm theta, VectorField normal, Distribution dist, Connection conn, std::optional<Metric> metric,
              Codim1Tolerances tol)
      : theta_(std::move(theta)),
        normal_(std::move(normal)),
        dist_(std::move(dist)),
        conn_(std::move(conn)),
        metric_(std::move(metric)),
        tol_(tol) {}

  OneForm theta_;
  VectorField normal_;
  Distribution dist_;
  Connection conn_;
  std::optional<Metric> metric_;
  Codim1Tolerances tol_;
};

// N = G / theta(G) for a gauge field G transverse to ker(theta).
VectorField normal_from_gauge(const OneForm& theta, const VectorField& gauge);

// h_D(X,Y) = theta(nabla_X Y), cross-checked against theta(II_D(X,Y)).
double h_D_eval(const Codim1Setup& setup, const VectorField& x, const VectorField& y, const Point& p);

// (A*_X theta)(Y) = theta(A_X(Y)).
double a_star_theta_eval(const Codim1Setup& setup, const VectorField& x, const VectorField& y, const Point& p);

// theta(T(X,Y)), the obstruction to symmetry of h_D.
double symmetry_obstruction_eval(const Codim1Setup& setup, const VectorField& x, const VectorField& y,
                                 const Point& p);

// h_D over the spanning frame, split without symmetrising.
struct ScalarFormSplit {
  Matrix h;            // h_D(X_a, X_b)
  Matrix a_star;       // theta(A_{X_a}(X_b))
  Matrix symmetric;    // (h + h^T) / 2
  Matrix skew;         // (h - h^T) / 2
  Matrix obstruction;  // theta(T(X_a, X_b))
};

ScalarFormSplit scalar_form_split(const Codim1Setup& setup, const Point& p);

}  // namespace sffd
