#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sffd/connection.hpp"
#include "sffd/distribution.hpp"
#include "sffd/errors.hpp"
#include "sffd/shape.hpp"

namespace sffd::cli {

enum class SceneErrorKind { Parse, UnknownReference, DimensionMismatch, InvariantFailure, Io };

std::string_view to_string(SceneErrorKind kind);

// A scene that failed to load. `pointer` is a JSON pointer to the offending
// entry ("" for the whole document).
class SceneError : public Error {
 public:
  SceneError(SceneErrorKind kind, std::string pointer, const std::string& message);

  SceneErrorKind kind() const noexcept { return kind_; }
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  SceneErrorKind kind_;
  std::string pointer_;
};

struct Tolerances {
  double identity = 1e-9;   // identity residuals, scaled by 1 + magnitude
  double oracle = 1e-5;     // formula vs flow/transport oracle
  double frobenius = 1e-9;  // d theta ^ theta and bracket residuals
  double torsion = 1e-12;   // torsion of a connection claimed symmetric
  double curvature = 1e-8;  // principal curvature eigen-residuals, relative
};

template <typename T>
struct Named {
  std::string name;
  T value;
};

struct DistributionSpec {
  std::vector<std::string> span;
  std::vector<std::string> complement;
  std::vector<std::string> annihilator;
  Distribution distribution;
};

struct Codim1Spec {
  std::string theta;
  std::string normal;
};

struct Scene {
  std::string name;
  std::string digest;  // FNV-1a of the file bytes, hex
  Chart chart{{"x", "y"}};
  Connection connection = Connection::flat(2);
  bool connection_from_metric = false;
  std::optional<Metric> metric;
  std::vector<Named<VectorField>> fields;
  std::vector<Named<OneForm>> one_forms;
  std::optional<DistributionSpec> distribution;
  std::optional<Codim1Spec> codim1;
  std::vector<Point> points;
  std::vector<std::string> checks;  // catalog order; the full catalog when the file lists none
  Tolerances tolerances;
  OracleParams oracle;

  std::size_t dim() const { return chart.dim(); }
  const VectorField& field(std::string_view name) const;
  const OneForm& one_form(std::string_view name) const;
};

std::string fnv1a_hex(std::string_view bytes);

Scene load_scene(const std::filesystem::path& path);
// `name` labels the scene in reports.
Scene parse_scene(std::string_view text, std::string name);

}  // namespace sffd::cli
