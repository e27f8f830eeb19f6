#pragma once

#include <span>
#include <vector>

#include "sffd/connection.hpp"

namespace sffd {

struct DistributionTolerances {
  double membership = 1e-10;     // |pi_bot(X)| for X claimed to lie in D
  double integrability = 1e-9;   // |pi_bot([X_a, X_b])|
  double annihilation = 1e-10;   // |theta(X_a)|
};

// An integrable distribution D together with a chosen complement D'.
//
// D is spanned by `span`, D' by `complement`; together they must form a
// frame of the tangent space wherever the distribution is used. Optional
// annihilator forms are one-forms vanishing on D.
class Distribution {
 public:
  Distribution(std::vector<VectorField> span, std::vector<VectorField> complement,
               std::vector<OneForm> annihilator = {}, DistributionTolerances tol = {});

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return span_.size(); }

  const std::vector<VectorField>& span() const { return span_; }
  const std::vector<VectorField>& complement() const { return complement_; }
  const std::vector<OneForm>& annihilator() const { return annihilator_; }
  const DistributionTolerances& tolerances() const { return tol_; }

  // Same D, different D'.
  Distribution with_complement(std::vector<VectorField> complement) const;

  // span(p) followed by complement(p).
  std::vector<TangentVector> frame_at(const Point& p) const;

  // Throws DegenerateFrameError or InvalidSetupError when the frame or an
  // annihilator fails at p.
  void validate_at(const Point& p) const;

 private:
  std::size_t dim_;
  std::vector<VectorField> span_;
  std::vector<VectorField> complement_;
  std::vector<OneForm> annihilator_;
  DistributionTolerances tol_;
};

struct Projection {
  TangentVector top;  // in D
  TangentVector bot;  // in D'
};

// v = top + bot. Throws DegenerateFrameError naming p.
Projection project(const Distribution& dist, const TangentVector& v, const Point& p);

// max over points and pairs a < b of |pi_bot([X_a, X_b])|. Points where
// the frame degenerates are skipped and listed.
SampledResidual integrability_residual(const Distribution& dist, std::span<const Point> points);

// II_D(X,Y) = pi_bot(nabla_X Y) at p.
//
// X and Y must lie in D at p, and the integrability gate must pass there;
// otherwise NotInDistributionError / NotIntegrableError.
TangentVector second_fundamental_form(const Connection& conn, const Distribution& dist, const VectorField& x,
                                      const VectorField& y, const Point& p);

// pi_bot(A_X(Y(p))); agrees with second_fundamental_form on integrable D.
TangentVector sff_via_shape_map(const Connection& conn, const Distribution& dist, const VectorField& x,
                                const VectorField& y, const Point& p);

// |II_D(X,Y) - II_D(Y,X) - pi_bot(T(X,Y))| at p.
double skew_vs_torsion_residual(const Connection& conn, const Distribution& dist, const VectorField& x,
                                const VectorField& y, const Point& p);

// |pi_bot(A_X(Y) - nabla_X Y)| at p: the difference lies in D.
double tangentiality_residual(const Connection& conn, const Distribution& dist, const VectorField& x,
                              const VectorField& y, const Point& p);

// |theta(A_X Y) - theta(A_Y X) - theta(T(X,Y))| at p, using no projector.
double annihilator_skew_residual(const Connection& conn, const OneForm& theta, const VectorField& x,
                                 const VectorField& y, const Point& p);

// Throws unless X(p) lies in D within the membership tolerance.
void require_in_distribution(const Distribution& dist, const VectorField& x, const Point& p);

// Throws NotIntegrableError unless the bracket residual at p passes.
void require_integrable_at(const Distribution& dist, const Point& p);

}  // namespace sffd
