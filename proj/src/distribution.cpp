#include "sffd/distribution.hpp"

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

}  // namespace

Distribution::Distribution(std::vector<VectorField> span, std::vector<VectorField> complement,
                           std::vector<OneForm> annihilator, DistributionTolerances tol)
    : span_(std::move(span)),
      complement_(std::move(complement)),
      annihilator_(std::move(annihilator)),
      tol_(tol) {
  if (span_.empty()) throw DimensionError("distribution needs at least one spanning field");
  dim_ = span_.front().dim();
  if (span_.size() + complement_.size() != dim_)
    throw DimensionError("span and complement together must have " + std::to_string(dim_) + " fields, got " +
                         std::to_string(span_.size() + complement_.size()));
  for (const auto& f : span_)
    if (f.dim() != dim_) throw DimensionError("spanning field has the wrong dimension");
  for (const auto& f : complement_)
    if (f.dim() != dim_) throw DimensionError("complement field has the wrong dimension");
  for (const auto& f : annihilator_)
    if (f.dim() != dim_) throw DimensionError("annihilator form has the wrong dimension");
}

Distribution Distribution::with_complement(std::vector<VectorField> complement) const {
  return Distribution(span_, std::move(complement), annihilator_, tol_);
}

std::vector<TangentVector> Distribution::frame_at(const Point& p) const {
  std::vector<TangentVector> frame;
  frame.reserve(dim_);
  for (const auto& f : span_) frame.push_back(f.at(p));
  for (const auto& f : complement_) frame.push_back(f.at(p));
  return frame;
}

void Distribution::validate_at(const Point& p) const {
  const auto frame = frame_at(p);
  try {
    (void)decompose_in_frame(frame, Vector(dim_));
  } catch (const DegenerateFrameError& e) {
    throw DegenerateFrameError(std::string(e.what()) + " at " + to_string(p));
  }
  for (std::size_t f = 0; f < annihilator_.size(); ++f) {
    const Vector theta = annihilator_[f].at(p);
    for (std::size_t a = 0; a < span_.size(); ++a) {
      const double v = std::abs(dot(theta, frame[a]));
      if (v > tol_.annihilation)
        throw InvalidSetupError("annihilator " + std::to_string(f + 1) + " does not vanish on spanning field " +
                                std::to_string(a + 1) + " at " + to_string(p) + " (value " + fmt(v) + ")");
    }
  }
}

Projection project(const Distribution& dist, const TangentVector& v, const Point& p) {
  const auto frame = dist.frame_at(p);
  Vector c;
  try {
    c = decompose_in_frame(frame, v);
  } catch (const DegenerateFrameError& e) {
    throw DegenerateFrameError(std::string(e.what()) + " at " + to_string(p));
  }
  Projection out{Vector(dist.dim()), Vector(dist.dim())};
  for (std::size_t a = 0; a < frame.size(); ++a) {
    if (a < dist.rank())
      out.top += c[a] * frame[a];
    else
      out.bot += c[a] * frame[a];
  }
  return out;
}

namespace {

double integrability_at(const Distribution& dist, const Point& p) {
  double worst = 0.0;
  const auto& span = dist.span();
  for (std::size_t a = 0; a < span.size(); ++a)
    for (std::size_t b = a + 1; b < span.size(); ++b)
      worst = std::max(worst, project(dist, lie_bracket_eval(span[a], span[b], p), p).bot.norm_inf());
  return worst;
}

}  // namespace

SampledResidual integrability_residual(const Distribution& dist, std::span<const Point> points) {
  SampledResidual out;
  for (const Point& p : points) {
    try {
      out.record(integrability_at(dist, p), p);
    } catch (const DegenerateFrameError& e) {
      out.skipped.push_back(p);
      out.warnings.push_back(std::string("skipped: ") + e.what());
    }
  }
  return out;
}

void require_in_distribution(const Distribution& dist, const VectorField& x, const Point& p) {
  const TangentVector v = x.at(p);
  const double off = project(dist, v, p).bot.norm_inf();
  if (off > dist.tolerances().membership * (1.0 + v.norm_inf()))
    throw NotInDistributionError("field does not lie in the distribution at " + to_string(p) +
                                 " (normal part " + fmt(off) + ")");
}

void require_integrable_at(const Distribution& dist, const Point& p) {
  const double r = integrability_at(dist, p);
  if (r > dist.tolerances().integrability)
    throw NotIntegrableError("distribution not integrable at " + to_string(p) + " (bracket residual " + fmt(r) + ")");
}

namespace {

void gate(const Distribution& dist, const VectorField& x, const VectorField& y, const Point& p) {
  require_integrable_at(dist, p);
  require_in_distribution(dist, x, p);
  require_in_distribution(dist, y, p);
}

}  // namespace

TangentVector second_fundamental_form(const Connection& conn, const Distribution& dist, const VectorField& x,
                                      const VectorField& y, const Point& p) {
  gate(dist, x, y, p);
  return project(dist, covariant_derivative_eval(conn, x, y, p), p).bot;
}

TangentVector sff_via_shape_map(const Connection& conn, const Distribution& dist, const VectorField& x,
                                const VectorField& y, const Point& p) {
  gate(dist, x, y, p);
  return project(dist, shape_map_eval(conn, x, y.at(p), p), p).bot;
}

double skew_vs_torsion_residual(const Connection& conn, const Distribution& dist, const VectorField& x,
                                const VectorField& y, const Point& p) {
  const TangentVector skew =
      second_fundamental_form(conn, dist, x, y, p) - second_fundamental_form(conn, dist, y, x, p);
  const TangentVector t_bot = project(dist, torsion_eval(conn, x, y, p), p).bot;
  return (skew - t_bot).norm_inf();
}

double tangentiality_residual(const Connection& conn, const Distribution& dist, const VectorField& x,
                              const VectorField& y, const Point& p) {
  gate(dist, x, y, p);
  const TangentVector diff = shape_map_eval(conn, x, y.at(p), p) - covariant_derivative_eval(conn, x, y, p);
  return project(dist, diff, p).bot.norm_inf();
}

double annihilator_skew_residual(const Connection& conn, const OneForm& theta, const VectorField& x,
                                 const VectorField& y, const Point& p) {
  const Vector t = theta.at(p);
  const double lhs = dot(t, shape_map_eval(conn, x, y.at(p), p)) - dot(t, shape_map_eval(conn, y, x.at(p), p));
  return std::abs(lhs - dot(t, torsion_eval(conn, x, y, p)));
}

}  // namespace sffd
