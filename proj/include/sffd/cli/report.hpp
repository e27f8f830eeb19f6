#pragma once

#include <ostream>

#include "sffd/cli/checks.hpp"

namespace sffd::cli {

enum class Format { Text, Json };

nlohmann::ordered_json to_json(const CheckReport& report);

// Writes the report and returns the process exit code: 0 when nothing
// failed, 1 when a check failed, 2 when the stream could not be written.
int emit_report(const CheckReport& report, Format format, std::ostream& out);

// Matrices and vectors at every sample point, without pass/fail gating.
void write_values(const Scene& scene, std::ostream& out);

}  // namespace sffd::cli
