#include "sffd/shape.hpp"

#include <algorithm>

#include "sffd/errors.hpp"

namespace sffd {

TangentVector shape_map_eval(const Connection& conn, const VectorField& z, const TangentVector& xi,
                             const Point& p) {
  return covariant_derivative_along(conn, xi, z, p) + torsion_of_vectors(conn, z.at(p), xi, p);
}

TangentVector transported_pushforward(const Connection& conn, const VectorField& z, const TangentVector& xi,
                                      const Point& p, double t, int steps, const Chart* chart) {
  const TangentVector pushed = flow_jacobian(z, p, t, steps, chart) * xi;
  return parallel_transport(conn, z, p, pushed, t, steps, TransportDirection::Inverse, chart);
}

TangentVector shape_map_flow_oracle(const Connection& conn, const VectorField& z, const TangentVector& xi,
                                    const Point& p, double h, int steps, const Chart* chart) {
  if (!(h > 0.0)) throw IntegrationError(0, "oracle step h must be positive");
  const TangentVector plus = transported_pushforward(conn, z, xi, p, h, steps, chart);
  const TangentVector minus = transported_pushforward(conn, z, xi, p, -h, steps, chart);
  return (1.0 / (2.0 * h)) * (plus - minus);
}

ShapeMapSample compare_shape_map(const Connection& conn, const VectorField& z, std::string z_label,
                                 const TangentVector& xi, const Point& p, const OracleParams& params,
                                 const Chart* chart) {
  ShapeMapSample s{p, std::move(z_label), xi, shape_map_eval(conn, z, xi, p),
                   shape_map_flow_oracle(conn, z, xi, p, params.h, params.steps, chart), 0.0};
  s.discrepancy = (s.formula - s.oracle).norm_inf();
  return s;
}

double SmResiduals::max_abs() const { return std::max({sm1.norm_inf(), sm2.norm_inf(), sm3.norm_inf()}); }

SmResiduals check_sm_identities(const Connection& conn, const VectorField& x, const VectorField& y,
                                const Point& p) {
  const TangentVector a_xy = shape_map_eval(conn, x, y.at(p), p);
  const TangentVector a_yx = shape_map_eval(conn, y, x.at(p), p);
  const TangentVector nabla_xy = covariant_derivative_eval(conn, x, y, p);
  const TangentVector nabla_yx = covariant_derivative_eval(conn, y, x, p);
  const TangentVector bracket = lie_bracket_eval(x, y, p);
  const TangentVector torsion = torsion_eval(conn, x, y, p);

  SmResiduals r;
  r.sm1 = a_xy - nabla_yx - torsion;
  r.sm2 = a_xy - nabla_xy + bracket;
  r.sm3 = torsion - a_xy + a_yx - bracket;
  r.scale = std::max({a_xy.norm_inf(), a_yx.norm_inf(), nabla_xy.norm_inf(), nabla_yx.norm_inf(),
                      bracket.norm_inf(), torsion.norm_inf()});
  return r;
}

}  // namespace sffd
