#include "sffd/cli/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "sffd/riemann.hpp"

namespace sffd::cli {

using nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string fmt_vector(std::span<const double> v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v[i]);
    out += (i ? ", " : "") + std::string(buf);
  }
  return out + ")";
}

std::string note(const CheckResult& c) {
  for (const char* key : {"reason", "error"})
    if (auto it = c.details.find(key); it != c.details.end() && it->is_string()) return it->get<std::string>();
  if (auto it = c.details.find("samples"); it != c.details.end()) return std::to_string(it->get<std::size_t>()) + " samples";
  return "";
}

void write_text(const CheckReport& r, std::ostream& out) {
  out << "scene  " << r.scene << "  (digest " << r.digest << ")\n";
  if (r.seed) out << "seed   " << *r.seed << "\n";
  out << "\n";

  std::size_t w_name = 5, w_point = 11;
  std::vector<std::string> points;
  for (const CheckResult& c : r.checks) {
    w_name = std::max(w_name, c.name.size());
    points.push_back(c.worst_point ? fmt_vector(c.worst_point->coords()) : "-");
    w_point = std::max(w_point, points.back().size());
  }
  auto pad = [](std::string s, std::size_t w) {
    s.resize(std::max(s.size(), w), ' ');
    return s;
  };
  out << pad("check", w_name) << "  " << pad("status", 7) << "  " << pad("max residual", 12) << "  "
      << pad("worst point", w_point) << "  note\n";
  out << std::string(w_name + 2 + 7 + 2 + 12 + 2 + w_point + 6, '-') << "\n";
  std::size_t counts[3] = {0, 0, 0};
  for (std::size_t i = 0; i < r.checks.size(); ++i) {
    const CheckResult& c = r.checks[i];
    ++counts[static_cast<int>(c.status)];
    out << pad(c.name, w_name) << "  " << pad(std::string(to_string(c.status)), 7) << "  "
        << pad(c.max_residual ? fmt(*c.max_residual) : "-", 12) << "  " << pad(points[i], w_point) << "  " << note(c)
        << "\n";
  }
  out << "\n" << counts[0] << " pass, " << counts[1] << " fail, " << counts[2] << " skipped\n";
}

}  // namespace

ordered_json to_json(const CheckReport& r) {
  ordered_json doc;
  doc["scene"] = r.scene;
  doc["version"] = kVersion;
  doc["digest"] = r.digest;
  doc["seed"] = r.seed ? ordered_json(*r.seed) : ordered_json(nullptr);
  doc["tolerances"] = {{"identity", r.tolerances.identity},
                       {"oracle", r.tolerances.oracle},
                       {"frobenius", r.tolerances.frobenius},
                       {"torsion", r.tolerances.torsion},
                       {"curvature", r.tolerances.curvature}};
  ordered_json checks = ordered_json::array();
  for (const CheckResult& c : r.checks) {
    ordered_json j;
    j["name"] = c.name;
    j["status"] = to_string(c.status);
    j["max_residual"] = c.max_residual ? ordered_json(*c.max_residual) : ordered_json(nullptr);
    j["worst_point"] = c.worst_point
                           ? ordered_json(std::vector<double>(c.worst_point->coords().begin(), c.worst_point->coords().end()))
                           : ordered_json(nullptr);
    j["details"] = c.details;
    checks.push_back(std::move(j));
  }
  doc["checks"] = std::move(checks);
  doc["elapsed_ms"] = r.elapsed_ms;
  return doc;
}

int emit_report(const CheckReport& report, Format format, std::ostream& out) {
  if (format == Format::Json)
    out << to_json(report).dump(2) << "\n";
  else
    write_text(report, out);
  out.flush();
  if (!out) return 2;
  return report.any_failed() ? 1 : 0;
}

namespace {

void write_matrix(std::ostream& out, const std::string& label, const Matrix& m) {
  out << "  " << label << "\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out << "    [";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%12.6g", m(i, j));
      out << (j ? " " : "") << buf;
    }
    out << " ]\n";
  }
}

}  // namespace

void write_values(const Scene& scene, std::ostream& out) {
  const std::size_t n = scene.dim();
  const bool has_codim1 = scene.codim1.has_value();
  out << "scene " << scene.name << ", " << n << " coordinates, " << scene.points.size() << " points\n";
  for (const Point& p : scene.points) {
    out << "\nat " << fmt_vector(p.coords()) << "\n";
    try {
      const Christoffels g = scene.connection.at(p);
      bool any = false;
      out << "  torsion T^k_ij (i < j, 1-based)\n";
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = i + 1; j < n; ++j) {
            const double t = g(k, i, j) - g(k, j, i);
            if (t == 0.0) continue;
            char buf[128];
            std::snprintf(buf, sizeof buf, "    T^%zu_%zu%zu = %.6g\n", k + 1, i + 1, j + 1, t);
            out << buf;
            any = true;
          }
      if (!any) out << "    all zero\n";
      if (!scene.distribution) continue;

      const Distribution& d = scene.distribution->distribution;
      const auto& span = d.span();
      try {
        require_integrable_at(d, p);
      } catch (const Error& e) {
        out << "  II_D not computed: " << e.what() << "\n";
        continue;
      }
      out << "  II_D(X_a, X_b)\n";
      for (std::size_t a = 0; a < span.size(); ++a)
        for (std::size_t b = 0; b < span.size(); ++b)
          out << "    (" << scene.distribution->span[a] << ", " << scene.distribution->span[b]
              << ") = " << fmt_vector(second_fundamental_form(scene.connection, d, span[a], span[b], p).span()) << "\n";

      if (!has_codim1) continue;
      const Codim1Setup cs = Codim1Setup::create(scene.one_form(scene.codim1->theta), scene.field(scene.codim1->normal),
                                                 span, scene.connection, std::vector<Point>{p}, scene.metric);
      const ScalarFormSplit split = scalar_form_split(cs, p);
      write_matrix(out, "h_D", split.h);
      write_matrix(out, "A*theta", split.a_star);
      write_matrix(out, "theta(T)", split.obstruction);

      if (scene.metric && g.max_torsion() <= scene.tolerances.torsion) {
        const Vector normal = unit_normal_at(*scene.metric, scene.one_form(scene.codim1->theta), p);
        const PrincipalData pd = principal_curvatures(*scene.metric, scene.connection, d, normal, p, "theta-positive");
        out << "  kappa (theta-positive normal) = " << fmt_vector(pd.kappa.span()) << "\n";
      }
    } catch (const Error& e) {
      out << "  error: " << e.what() << "\n";
    }
  }
}

}  // namespace sffd::cli
