#include "sffd/sampling.hpp"

#include <cmath>
#include <cstdio>

namespace sffd {

double Sampler::uniform(double lo, double hi) {
  // Built from raw 64-bit draws so the stream does not depend on the
  // library's distribution implementation.
  const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

int Sampler::integer(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(rng_() % span);
}

std::string Sampler::polynomial_text(std::span<const std::string> names, int max_degree, int terms) {
  std::string text;
  char buf[40];
  for (int t = 0; t < terms; ++t) {
    std::snprintf(buf, sizeof buf, "%.6f", uniform(-1.0, 1.0));
    std::string term = buf;
    const int degree = integer(0, max_degree);
    for (int d = 0; d < degree; ++d) {
      const auto& name = names[static_cast<std::size_t>(integer(0, static_cast<int>(names.size()) - 1))];
      term += "*" + name;
    }
    if (t == 0) {
      text = term;
    } else {
      text += " + " + term;
    }
  }
  // An occasional power keeps '^' in the mix.
  if (max_degree >= 2 && integer(0, 2) == 0) {
    const auto& name = names[static_cast<std::size_t>(integer(0, static_cast<int>(names.size()) - 1))];
    std::snprintf(buf, sizeof buf, "%.6f", uniform(-1.0, 1.0));
    text += " + " + std::string(buf) + "*" + name + "^" + std::to_string(integer(2, max_degree));
  }
  return text;
}

Expression Sampler::polynomial(std::span<const std::string> names, int max_degree, int terms) {
  return parse(polynomial_text(names, max_degree, terms), names);
}

VectorField Sampler::field(std::span<const std::string> names, int max_degree, int terms) {
  std::vector<Expression> c;
  for (std::size_t k = 0; k < names.size(); ++k) c.push_back(polynomial(names, max_degree, terms));
  return VectorField(std::move(c));
}

VectorField Sampler::field_about(std::span<const std::string> names, const Point& center, int max_degree,
                                 int terms) {
  std::vector<std::string> shifted;
  char buf[64];
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double c = center[i];
    std::snprintf(buf, sizeof buf, "%s %.17g)", c < 0 ? " +" : " -", std::abs(c));
    shifted.push_back("(" + names[i] + buf);
  }
  std::vector<Expression> c;
  for (std::size_t k = 0; k < names.size(); ++k)
    c.push_back(parse(polynomial_text(shifted, max_degree, terms), names));
  return VectorField(std::move(c));
}

VectorField Sampler::combination(std::span<const VectorField> basis, std::span<const std::string> names,
                                 int max_degree, int terms) {
  VectorField out = VectorField::zero(basis.front().dim());
  for (const auto& x : basis) out = out + x.scaled(polynomial(names, max_degree, terms));
  return out;
}

TangentVector Sampler::vector(std::size_t n, double scale) {
  TangentVector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = uniform(-scale, scale);
  return v;
}

}  // namespace sffd
