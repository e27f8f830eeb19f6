#include "sffd/cli/app.hpp"

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sffd/cli/report.hpp"

namespace sffd::cli {

namespace {

std::vector<std::string> split_list(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const std::string& item : raw) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ','))
      if (!part.empty()) out.push_back(part);
  }
  return out;
}

}  // namespace

int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Check second-fundamental-form identities on scene files."};
  app.require_subcommand(1);

  std::string scene_path;
  bool json = false;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> only_raw;
  std::string output;

  CLI::App* check = app.add_subcommand("check", "Run the scene's checks and report pass/fail");
  check->add_option("scene", scene_path, "Scene file")->required();
  check->add_flag("--json", json, "Emit the report as JSON");
  check->add_option("--tol", tol, "Override the identity tolerance")->check(CLI::PositiveNumber);
  check->add_option("--seed", seed, "Add seeded random samples");
  check->add_option("--only", only_raw, "Comma-separated subset of checks");
  check->add_option("-o,--output", output, "Write the report to a file");

  CLI::App* report = app.add_subcommand("report", "Print II_D, h_D, A*theta, torsion and kappa at every point");
  report->add_option("scene", scene_path, "Scene file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? 0 : 2;
  }

  Scene scene;
  try {
    scene = load_scene(scene_path);
  } catch (const SceneError& e) {
    err << "sffd: " << e.what() << "\n";
    return 2;
  }

  if (report->parsed()) {
    write_values(scene, out);
    out.flush();
    return out ? 0 : 2;
  }

  const std::vector<std::string> only = split_list(only_raw);
  for (const std::string& name : only) {
    if (!is_catalog_check(name)) {
      err << "sffd: unknown check '" << name << "'\n";
      return 2;
    }
  }
  if (tol) scene.tolerances.identity = *tol;

  const CheckReport result = run_checks(scene, seed, only);
  const Format format = json ? Format::Json : Format::Text;
  if (output.empty()) return emit_report(result, format, out);

  std::ofstream file(output);
  if (!file) {
    err << "sffd: cannot write " << output << "\n";
    return 2;
  }
  const int code = emit_report(result, format, file);
  if (code == 2) err << "sffd: failed writing " << output << "\n";
  return code;
}

}  // namespace sffd::cli
