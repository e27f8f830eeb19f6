#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace sffd {

// Charts never exceed this many coordinates.
inline constexpr std::size_t kMaxDim = 8;

// Forward-mode dual number carrying all first partials of a chart function.
// Unused trailing partial slots stay zero.
struct Dual {
  double value = 0.0;
  std::array<double, kMaxDim> partials{};

  static Dual constant(double v) { return Dual{v, {}}; }

  static Dual variable(double v, std::size_t index) {
    Dual d{v, {}};
    d.partials[index] = 1.0;
    return d;
  }
};

inline Dual operator-(const Dual& a) {
  Dual r{-a.value, {}};
  for (std::size_t i = 0; i < kMaxDim; ++i) r.partials[i] = -a.partials[i];
  return r;
}

inline Dual operator+(const Dual& a, const Dual& b) {
  Dual r{a.value + b.value, {}};
  for (std::size_t i = 0; i < kMaxDim; ++i) r.partials[i] = a.partials[i] + b.partials[i];
  return r;
}

inline Dual operator-(const Dual& a, const Dual& b) {
  Dual r{a.value - b.value, {}};
  for (std::size_t i = 0; i < kMaxDim; ++i) r.partials[i] = a.partials[i] - b.partials[i];
  return r;
}

inline Dual operator*(const Dual& a, const Dual& b) {
  Dual r{a.value * b.value, {}};
  for (std::size_t i = 0; i < kMaxDim; ++i)
    r.partials[i] = a.partials[i] * b.value + a.value * b.partials[i];
  return r;
}

// Caller guarantees b.value != 0.
inline Dual operator/(const Dual& a, const Dual& b) {
  const double inv = 1.0 / b.value;
  const double q = a.value * inv;
  Dual r{q, {}};
  for (std::size_t i = 0; i < kMaxDim; ++i) r.partials[i] = (a.partials[i] - q * b.partials[i]) * inv;
  return r;
}

// Chain rule helper: f(a) with f'(a) = slope.
inline Dual chain(const Dual& a, double value, double slope) {
  Dual r{value, {}};
  for (std::size_t i = 0; i < kMaxDim; ++i) r.partials[i] = slope * a.partials[i];
  return r;
}

inline Dual sin(const Dual& a) { return chain(a, std::sin(a.value), std::cos(a.value)); }
inline Dual cos(const Dual& a) { return chain(a, std::cos(a.value), -std::sin(a.value)); }

inline Dual exp(const Dual& a) {
  const double e = std::exp(a.value);
  return chain(a, e, e);
}

// Domain (a.value > 0) checked by the caller.
inline Dual log(const Dual& a) { return chain(a, std::log(a.value), 1.0 / a.value); }

inline Dual sqrt(const Dual& a) {
  const double s = std::sqrt(a.value);
  return chain(a, s, 0.5 / s);
}

}  // namespace sffd
