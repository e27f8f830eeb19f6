#pragma once

#include <string>

#include "sffd/connection.hpp"

namespace sffd {

// A_Z(xi) = nabla_xi Z + T(Z(p), xi): the covariant formula for the shape map.
TangentVector shape_map_eval(const Connection& conn, const VectorField& z, const TangentVector& xi,
                             const Point& p);

struct OracleParams {
  double h = 1e-3;
  int steps = 50;  // RK4 steps per leg
};

// The shape map from its definition, d/dt|0 tau_t^-1 (zeta_t* xi), by a
// central difference over [-h, h]. tau_t is transport along the integral
// curve of Z through p.
TangentVector shape_map_flow_oracle(const Connection& conn, const VectorField& z, const TangentVector& xi,
                                    const Point& p, double h, int steps, const Chart* chart = nullptr);

// tau_t^-1 (zeta_t* xi) for a single t; the curve whose derivative the oracle takes.
TangentVector transported_pushforward(const Connection& conn, const VectorField& z, const TangentVector& xi,
                                      const Point& p, double t, int steps, const Chart* chart = nullptr);

struct ShapeMapSample {
  Point base;
  std::string z_label;
  TangentVector xi;
  TangentVector formula;
  TangentVector oracle;
  double discrepancy = 0.0;  // max-abs component difference
};

ShapeMapSample compare_shape_map(const Connection& conn, const VectorField& z, std::string z_label,
                                 const TangentVector& xi, const Point& p, const OracleParams& params,
                                 const Chart* chart = nullptr);

struct SmResiduals {
  TangentVector sm1;  // A_X(Y) - nabla_Y X - T(X,Y)
  TangentVector sm2;  // A_X(Y) - nabla_X Y + [X,Y]
  TangentVector sm3;  // T(X,Y) - A_X(Y) + A_Y(X) - [X,Y]
  double scale = 0.0;  // largest magnitude among the terms, for relative tolerances

  double max_abs() const;
};

SmResiduals check_sm_identities(const Connection& conn, const VectorField& x, const VectorField& y,
                                const Point& p);

}  // namespace sffd
