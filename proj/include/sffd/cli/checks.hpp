#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sffd/cli/scene.hpp"

namespace sffd::cli {

inline constexpr std::string_view kVersion = "0.1.0";

enum class Status { Pass, Fail, Skipped };

std::string_view to_string(Status status);

struct CheckResult {
  std::string name;
  Status status = Status::Pass;
  std::optional<double> max_residual;
  std::optional<Point> worst_point;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
};

struct CheckReport {
  std::string scene;
  std::string digest;
  Tolerances tolerances;
  std::optional<std::uint64_t> seed;
  std::vector<CheckResult> checks;
  double elapsed_ms = 0.0;

  bool any_failed() const;
};

struct CatalogEntry {
  std::string_view name;
  std::vector<std::string_view> operations;  // library operations the check exercises
};

// Every check in execution order.
std::span<const CatalogEntry> catalog();
bool is_catalog_check(std::string_view name);

inline constexpr std::string_view kNotIntegrable = "distribution not integrable at samples";
inline constexpr std::string_view kNoMetric = "no metric";
inline constexpr std::string_view kTorsion = "connection has torsion";

// Runs the scene's checks, restricted to `only` when it is non-empty.
CheckReport run_checks(const Scene& scene, std::optional<std::uint64_t> seed = std::nullopt,
                       std::span<const std::string> only = {});

}  // namespace sffd::cli
