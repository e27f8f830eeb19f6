#include "sffd/cli/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>

#include "sffd/riemann.hpp"
#include "sffd/sampling.hpp"
#include "sffd/shape.hpp"

namespace sffd::cli {

using nlohmann::ordered_json;

std::string_view to_string(Status status) {
  switch (status) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Skipped: return "skipped";
  }
  return "fail";
}

bool CheckReport::any_failed() const {
  return std::any_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == Status::Fail; });
}

std::span<const CatalogEntry> catalog() {
  static const std::vector<CatalogEntry> entries{
      {"torsion_tensoriality", {"torsion_eval", "torsion_of_vectors"}},
      {"sm_identities", {"check_sm_identities", "shape_map_eval"}},
      {"shape_oracle",
       {"compare_shape_map", "shape_map_eval", "shape_map_flow_oracle", "transported_pushforward"}},
      {"frobenius", {"frobenius_residual"}},
      {"integrability", {"integrability_residual", "require_integrable_at"}},
      {"prop4_bilinearity",
       {"second_fundamental_form", "project", "require_in_distribution", "require_integrable_at"}},
      {"prop4_shape_equivalence", {"sff_via_shape_map", "second_fundamental_form", "shape_map_eval"}},
      {"prop4_skew_torsion", {"skew_vs_torsion_residual", "second_fundamental_form", "project"}},
      {"prop4_tangential", {"tangentiality_residual", "shape_map_eval"}},
      {"remark_annihilator", {"annihilator_skew_residual", "shape_map_eval"}},
      {"levi_civita_consistency", {"levi_civita", "metric_compatibility_residual"}},
      {"gauss_decomposition", {"gauss_decomposition", "second_fundamental_form", "project"}},
      {"classical_symmetry", {"classical_sff_symmetry_residual"}},
      {"principal_curvatures", {"principal_curvatures", "unit_normal_at", "scalar_sff"}},
      {"h_d_consistency", {"Codim1Setup::create", "h_D_eval", "a_star_theta_eval", "normal_from_gauge"}},
      {"obstruction", {"Codim1Setup::create", "scalar_form_split", "symmetry_obstruction_eval", "h_D_eval"}},
  };
  return entries;
}

bool is_catalog_check(std::string_view name) {
  for (const CatalogEntry& c : catalog())
    if (c.name == name) return true;
  return false;
}

namespace {

ordered_json point_json(const Point& p) { return ordered_json(std::vector<double>(p.coords().begin(), p.coords().end())); }
ordered_json vector_json(const Vector& v) { return ordered_json(v.values()); }

// Largest residual seen, and whether every sample met its own tolerance.
struct Accumulator {
  double max = 0.0;
  std::optional<Point> worst;
  bool ok = true;
  std::size_t samples = 0;

  void add(double residual, double tolerance, const Point& p) {
    ++samples;
    if (!(residual <= tolerance)) ok = false;
    if (!worst || residual > max || std::isnan(residual)) {
      max = residual;
      worst = p;
    }
  }

  void merge(const SampledResidual& r, double tolerance) {
    if (!r.worst) return;
    add(r.max, tolerance, *r.worst);
  }

  CheckResult finish(std::string_view name) const {
    CheckResult out;
    out.name = name;
    out.status = ok && samples > 0 ? Status::Pass : Status::Fail;
    out.max_residual = max;
    out.worst_point = worst;
    out.details["samples"] = samples;
    if (samples == 0) out.details["error"] = "no usable samples";
    return out;
  }
};

CheckResult skipped(std::string_view name, std::string_view reason) {
  CheckResult out;
  out.name = name;
  out.status = Status::Skipped;
  out.details["reason"] = reason;
  return out;
}

class Runner {
 public:
  Runner(const Scene& scene, std::optional<std::uint64_t> seed) : s_(scene), seed_(seed) {
    if (seed_) rng_.emplace(*seed_);
    try {
      prepare();
    } catch (const std::exception& e) {
      setup_error_ = e.what();
    }
  }

  CheckResult run(std::string_view name) {
    static const std::vector<std::pair<std::string_view, CheckResult (Runner::*)()>> table{
        {"torsion_tensoriality", &Runner::torsion_tensoriality},
        {"sm_identities", &Runner::sm_identities},
        {"shape_oracle", &Runner::shape_oracle},
        {"frobenius", &Runner::frobenius},
        {"integrability", &Runner::integrability},
        {"prop4_bilinearity", &Runner::prop4_bilinearity},
        {"prop4_shape_equivalence", &Runner::prop4_shape_equivalence},
        {"prop4_skew_torsion", &Runner::prop4_skew_torsion},
        {"prop4_tangential", &Runner::prop4_tangential},
        {"remark_annihilator", &Runner::remark_annihilator},
        {"levi_civita_consistency", &Runner::levi_civita_consistency},
        {"gauss_decomposition", &Runner::gauss_decomposition},
        {"classical_symmetry", &Runner::classical_symmetry},
        {"principal_curvatures", &Runner::principal_curvatures},
        {"h_d_consistency", &Runner::h_d_consistency},
        {"obstruction", &Runner::obstruction},
    };
    for (const auto& [n, fn] : table) {
      if (n != name) continue;
      if (!setup_error_.empty()) {
        CheckResult out;
        out.name = name;
        out.status = Status::Fail;
        out.details["error"] = setup_error_;
        return out;
      }
      try {
        return (this->*fn)();
      } catch (const std::exception& e) {
        CheckResult out;
        out.name = name;
        out.status = Status::Fail;
        out.details["error"] = e.what();
        return out;
      }
    }
    CheckResult out;
    out.name = name;
    out.status = Status::Fail;
    out.details["error"] = "unknown check";
    return out;
  }

 private:
  const Tolerances& tol() const { return s_.tolerances; }
  const Distribution& dist() const { return s_.distribution->distribution; }
  std::span<const std::string> names() const { return s_.chart.names(); }

  // Points, sample fields and scalings shared by every check.
  void prepare() {
    points_ = s_.points;
    if (rng_) {
      for (const Point& c : s_.points) points_.push_back(rng_->point_near(s_.chart, c, 0.05, [&](const Point& p) {
        return usable(p);
      }));
    }

    for (const auto& f : s_.fields) pool_.push_back(f.value);
    if (pool_.empty()) {
      for (std::size_t i = 0; i < s_.dim(); ++i) pool_.push_back(VectorField::coordinate(s_.dim(), i));
    }
    if (rng_)
      for (int i = 0; i < 3; ++i) pool_.push_back(rng_->field(names()));

    const auto& nm = s_.chart.names();
    scalings_.push_back(sffd::parse("1 + " + nm[0] + "^2", nm));
    scalings_.push_back(sffd::parse(nm[0] + "*" + nm[1] + " - 0.5", nm));
    if (rng_)
      for (int i = 0; i < 3; ++i) scalings_.push_back(rng_->polynomial(names()));

    for (std::size_t i = 0; i < s_.dim(); ++i) {
      Vector xi(s_.dim());
      xi[i] = 1.0;
      directions_.push_back(xi);
    }

    for (const Point& p : points_) {
      const Christoffels g = s_.connection.at(p);
      max_torsion_ = std::max(max_torsion_, g.max_torsion());
    }

    if (!s_.distribution) return;
    const auto& span = dist().span();
    sections_ = span;
    sections_.push_back(span[0].scaled(scalings_[0]));
    if (span.size() > 1) sections_.push_back(span.front() + span.back().scaled(scalings_[1]));
    if (rng_)
      for (int i = 0; i < 3; ++i) sections_.push_back(rng_->combination(span, names()));

    for (const auto& f : s_.distribution->annihilator) forms_.push_back({f, s_.one_form(f)});
    if (s_.codim1 && std::none_of(forms_.begin(), forms_.end(), [&](const auto& f) { return f.name == s_.codim1->theta; }))
      forms_.push_back({s_.codim1->theta, s_.one_form(s_.codim1->theta)});

    gate();
  }

  bool usable(const Point& p) const {
    try {
      if (s_.distribution) (void)project(dist(), Vector(s_.dim()), p);
      for (const auto& f : s_.fields) (void)f.value.at(p);
      for (const auto& f : s_.one_forms) (void)f.value.at(p);
      (void)s_.connection.at(p);
      if (s_.metric) s_.metric->check_positive_definite(p);
      return true;
    } catch (const Error&) {
      return false;
    }
  }

  // Integrability is decided once, from the bracket and Frobenius residuals
  // at the samples; II_D-dependent checks run only when it passes.
  void gate() {
    integrability_ = integrability_residual(dist(), points_);
    bool ok = integrability_.worst.has_value() && integrability_.max <= tol().frobenius;
    for (const auto& f : forms_) {
      const SampledResidual r = frobenius_residual(f.value, points_);
      ok = ok && r.max <= tol().frobenius;
    }
    integrable_ = ok;
    for (const Point& p : points_)
      if (std::find(integrability_.skipped.begin(), integrability_.skipped.end(), p) == integrability_.skipped.end())
        leaf_points_.push_back(p);
  }

  std::optional<std::string_view> leaf_prerequisites() const {
    if (!s_.distribution) return "no distribution";
    if (!integrable_) return kNotIntegrable;
    return std::nullopt;
  }

  bool torsion_free() const { return max_torsion_ <= tol().torsion; }

  template <typename F>
  void pairs(std::span<const VectorField> fields, F&& body) const {
    for (const Point& p : leaf_points_)
      for (const auto& x : fields)
        for (const auto& y : fields) body(x, y, p);
  }

  CheckResult torsion_tensoriality() {
    Accumulator acc;
    for (const Point& p : points_)
      for (const auto& x : pool_)
        for (const auto& y : pool_) {
          const Vector t = torsion_eval(s_.connection, x, y, p);
          const double mag = 1.0 + covariant_derivative_eval(s_.connection, x, y, p).norm_inf() +
                             covariant_derivative_eval(s_.connection, y, x, p).norm_inf();
          acc.add((t - torsion_of_vectors(s_.connection, x.at(p), y.at(p), p)).norm_inf(), tol().identity * mag, p);
          for (const Expression& f : scalings_) {
            const double fp = f.eval(p.coords());
            const double scale = tol().identity * (1.0 + std::abs(fp)) * mag;
            acc.add((torsion_eval(s_.connection, x.scaled(f), y, p) - fp * t).norm_inf(), scale, p);
            acc.add((torsion_eval(s_.connection, x, y.scaled(f), p) - fp * t).norm_inf(), scale, p);
          }
        }
    CheckResult out = acc.finish("torsion_tensoriality");
    out.details["max_torsion_component"] = max_torsion_;
    return out;
  }

  CheckResult sm_identities() {
    Accumulator acc;
    auto one = [&](const VectorField& x, const VectorField& y, const Point& p) {
      const SmResiduals r = check_sm_identities(s_.connection, x, y, p);
      acc.add(r.max_abs(), tol().identity * (1.0 + r.scale), p);
    };
    for (const Point& p : points_)
      for (const auto& x : pool_)
        for (const auto& y : pool_) one(x, y, p);
    if (rng_) {
      for (int i = 0; i < 100; ++i) {
        const VectorField x = rng_->field(names());
        const VectorField y = rng_->field(names());
        one(x, y, points_[static_cast<std::size_t>(rng_->integer(0, static_cast<int>(points_.size()) - 1))]);
      }
    }
    return acc.finish("sm_identities");
  }

  CheckResult shape_oracle() {
    static constexpr double kNoiseFloor = 1e-9;
    Accumulator acc;
    const OracleParams coarse = s_.oracle;
    const OracleParams fine{s_.oracle.h / 2.0, s_.oracle.steps};
    std::size_t ratio_checks = 0;
    double min_ratio = std::numeric_limits<double>::infinity(), max_ratio = 0.0;
    bool ratios_ok = true;
    auto one = [&](const VectorField& z, const Vector& xi, const Point& p) {
      const ShapeMapSample a = compare_shape_map(s_.connection, z, "z", xi, p, coarse, &s_.chart);
      acc.add(a.discrepancy, tol().oracle * (1.0 + a.formula.norm_inf()), p);
      if (a.discrepancy <= kNoiseFloor) return;
      const ShapeMapSample b = compare_shape_map(s_.connection, z, "z", xi, p, fine, &s_.chart);
      const double ratio = a.discrepancy / b.discrepancy;
      ++ratio_checks;
      min_ratio = std::min(min_ratio, ratio);
      max_ratio = std::max(max_ratio, ratio);
      if (!(ratio >= 2.0 && ratio <= 8.0)) ratios_ok = false;
    };
    for (const Point& p : points_)
      for (const auto& f : s_.fields)
        for (const auto& xi : directions_) one(f.value, xi, p);
    if (rng_) {
      for (int i = 0; i < 20; ++i) {
        const Point& p = points_[static_cast<std::size_t>(rng_->integer(0, static_cast<int>(points_.size()) - 1))];
        const VectorField z = rng_->field_about(names(), p);
        one(z, rng_->vector(s_.dim()), p);
      }
    }
    CheckResult out = acc.finish("shape_oracle");
    out.details["h"] = coarse.h;
    out.details["steps"] = coarse.steps;
    out.details["order_checks"] = ratio_checks;
    if (ratio_checks > 0) {
      out.details["min_ratio"] = min_ratio;
      out.details["max_ratio"] = max_ratio;
    }
    if (!ratios_ok) {
      out.status = Status::Fail;
      out.details["error"] = "halving h did not shrink the discrepancy by a factor in [2, 8]";
    }
    return out;
  }

  CheckResult frobenius() {
    if (forms_.empty()) return skipped("frobenius", "no constraint form");
    Accumulator acc;
    ordered_json per = ordered_json::object();
    for (const auto& f : forms_) {
      const SampledResidual r = frobenius_residual(f.value, points_);
      acc.merge(r, tol().frobenius);
      per[f.name] = r.max;
    }
    CheckResult out = acc.finish("frobenius");
    out.details["samples"] = points_.size() * forms_.size();
    out.details["label"] = "sampled Frobenius check";
    out.details["per_form"] = std::move(per);
    return out;
  }

  CheckResult integrability() {
    if (!s_.distribution) return skipped("integrability", "no distribution");
    Accumulator acc;
    acc.merge(integrability_, tol().frobenius);
    for (const Point& p : leaf_points_) {
      try {
        require_integrable_at(dist(), p);
      } catch (const NotIntegrableError&) {
        acc.ok = false;
      }
    }
    CheckResult out = acc.finish("integrability");
    out.details["samples"] = leaf_points_.size();
    out.details["label"] = "sampled Frobenius check";
    if (!integrability_.skipped.empty()) {
      ordered_json sk = ordered_json::array();
      for (const Point& p : integrability_.skipped) sk.push_back(point_json(p));
      out.details["skipped_points"] = std::move(sk);
    }
    if (!integrability_.warnings.empty()) out.details["warnings"] = integrability_.warnings;
    return out;
  }

  CheckResult prop4_bilinearity() {
    if (auto r = leaf_prerequisites()) return skipped("prop4_bilinearity", *r);
    Accumulator acc;
    const VectorField& w = sections_.front();
    pairs(sections_, [&](const VectorField& x, const VectorField& y, const Point& p) {
      const Vector base = second_fundamental_form(s_.connection, dist(), x, y, p);
      const double mag = 1.0 + covariant_derivative_eval(s_.connection, x, y, p).norm_inf();
      for (const Expression& f : scalings_) {
        const double fp = f.eval(p.coords());
        const double scale = tol().identity * (1.0 + std::abs(fp)) * mag;
        acc.add((second_fundamental_form(s_.connection, dist(), x.scaled(f), y, p) - fp * base).norm_inf(), scale, p);
        acc.add((second_fundamental_form(s_.connection, dist(), x, y.scaled(f), p) - fp * base).norm_inf(), scale, p);
      }
      const Vector wy = second_fundamental_form(s_.connection, dist(), w, y, p);
      const Vector xw = second_fundamental_form(s_.connection, dist(), x, w, p);
      acc.add((second_fundamental_form(s_.connection, dist(), x + w, y, p) - base - wy).norm_inf(),
              tol().identity * mag, p);
      acc.add((second_fundamental_form(s_.connection, dist(), x, y + w, p) - base - xw).norm_inf(),
              tol().identity * mag, p);
    });
    return acc.finish("prop4_bilinearity");
  }

  CheckResult prop4_shape_equivalence() {
    if (auto r = leaf_prerequisites()) return skipped("prop4_shape_equivalence", *r);
    Accumulator acc;
    pairs(sections_, [&](const VectorField& x, const VectorField& y, const Point& p) {
      const Vector direct = second_fundamental_form(s_.connection, dist(), x, y, p);
      const Vector via = sff_via_shape_map(s_.connection, dist(), x, y, p);
      const double mag = 1.0 + covariant_derivative_eval(s_.connection, x, y, p).norm_inf() +
                         shape_map_eval(s_.connection, x, y.at(p), p).norm_inf();
      acc.add((direct - via).norm_inf(), tol().identity * mag, p);
    });
    return acc.finish("prop4_shape_equivalence");
  }

  CheckResult prop4_skew_torsion() {
    if (auto r = leaf_prerequisites()) return skipped("prop4_skew_torsion", *r);
    // a second complement, D' + X_1: still transverse, generally not orthogonal
    std::vector<VectorField> swapped;
    for (const VectorField& c : dist().complement()) swapped.push_back(c + dist().span().front());
    const Distribution other = dist().with_complement(swapped);

    Accumulator acc;
    double primary = 0.0, alternate = 0.0;
    pairs(sections_, [&](const VectorField& x, const VectorField& y, const Point& p) {
      const double mag = 1.0 + covariant_derivative_eval(s_.connection, x, y, p).norm_inf() +
                         covariant_derivative_eval(s_.connection, y, x, p).norm_inf();
      const double a = skew_vs_torsion_residual(s_.connection, dist(), x, y, p);
      const double b = skew_vs_torsion_residual(s_.connection, other, x, y, p);
      primary = std::max(primary, a);
      alternate = std::max(alternate, b);
      acc.add(a, tol().identity * mag, p);
      acc.add(b, tol().identity * mag, p);
    });
    CheckResult out = acc.finish("prop4_skew_torsion");
    out.details["residual"] = primary;
    out.details["residual_swapped_complement"] = alternate;
    if (dist().rank() > 1 && !leaf_points_.empty()) {
      const Point& p = leaf_points_.front();
      const auto& span = dist().span();
      const Vector skew = second_fundamental_form(s_.connection, dist(), span[0], span[1], p) -
                          second_fundamental_form(s_.connection, dist(), span[1], span[0], p);
      const Vector t = project(dist(), torsion_eval(s_.connection, span[0], span[1], p), p).bot;
      out.details["first_pair"] = {{"point", point_json(p)}, {"skew", vector_json(skew)}, {"torsion_bot", vector_json(t)}};
    }
    return out;
  }

  CheckResult prop4_tangential() {
    if (auto r = leaf_prerequisites()) return skipped("prop4_tangential", *r);
    Accumulator acc;
    pairs(sections_, [&](const VectorField& x, const VectorField& y, const Point& p) {
      const double mag = 1.0 + covariant_derivative_eval(s_.connection, x, y, p).norm_inf() +
                         shape_map_eval(s_.connection, x, y.at(p), p).norm_inf();
      acc.add(tangentiality_residual(s_.connection, dist(), x, y, p), tol().identity * mag, p);
    });
    return acc.finish("prop4_tangential");
  }

  CheckResult remark_annihilator() {
    if (auto r = leaf_prerequisites()) return skipped("remark_annihilator", *r);
    if (forms_.empty()) return skipped("remark_annihilator", "no annihilator");
    Accumulator acc;
    for (const auto& f : forms_)
      pairs(sections_, [&](const VectorField& x, const VectorField& y, const Point& p) {
        const double mag = (1.0 + f.value.at(p).norm_inf()) *
                           (1.0 + shape_map_eval(s_.connection, x, y.at(p), p).norm_inf() +
                            shape_map_eval(s_.connection, y, x.at(p), p).norm_inf());
        acc.add(annihilator_skew_residual(s_.connection, f.value, x, y, p), tol().identity * mag, p);
      });
    CheckResult out = acc.finish("remark_annihilator");
    out.details["complement_used"] = false;
    return out;
  }

  CheckResult levi_civita_consistency() {
    if (!s_.metric) return skipped("levi_civita_consistency", kNoMetric);
    const Connection lc = levi_civita(*s_.metric);
    Accumulator acc;
    double torsion = 0.0, compat = 0.0, gamma = 0.0;
    for (const Point& p : points_) {
      const Christoffels a = s_.connection.at(p);
      const Christoffels b = lc.at(p);
      double diff = 0.0, mag = 1.0;
      const std::size_t n = s_.dim();
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            diff = std::max(diff, std::abs(a(k, i, j) - b(k, i, j)));
            mag = std::max(mag, 1.0 + std::abs(b(k, i, j)));
          }
      const double t = a.max_torsion();
      const double c = metric_compatibility_residual(*s_.metric, s_.connection, p);
      torsion = std::max(torsion, t);
      compat = std::max(compat, c);
      gamma = std::max(gamma, diff);
      acc.add(diff, tol().identity * mag, p);
      acc.add(c, tol().identity * mag, p);
      if (t > tol().torsion) acc.ok = false;
    }
    CheckResult out = acc.finish("levi_civita_consistency");
    out.details["torsion"] = torsion;
    out.details["metric_compatibility"] = compat;
    out.details["christoffel_difference"] = gamma;
    out.details["connection_from_metric"] = s_.connection_from_metric;
    return out;
  }

  CheckResult gauss_decomposition() {
    if (auto r = leaf_prerequisites()) return skipped("gauss_decomposition", *r);
    if (!torsion_free()) return skipped("gauss_decomposition", kTorsion);
    Accumulator acc;
    pairs(sections_, [&](const VectorField& x, const VectorField& y, const Point& p) {
      const GaussDecomposition gd = sffd::gauss_decomposition(s_.connection, dist(), x, y, p);
      const Vector full = covariant_derivative_eval(s_.connection, x, y, p);
      const double scale = tol().identity * (1.0 + full.norm_inf());
      acc.add((gd.tangential + gd.normal - full).norm_inf(), scale, p);
      acc.add((gd.normal - second_fundamental_form(s_.connection, dist(), x, y, p)).norm_inf(), scale, p);
      acc.add(project(dist(), gd.tangential, p).bot.norm_inf(), scale, p);
    });
    return acc.finish("gauss_decomposition");
  }

  CheckResult classical_symmetry() {
    if (auto r = leaf_prerequisites()) return skipped("classical_symmetry", *r);
    if (!s_.metric) return skipped("classical_symmetry", kNoMetric);
    if (!torsion_free()) return skipped("classical_symmetry", kTorsion);
    const SampledResidual r = classical_sff_symmetry_residual(s_.connection, dist(), leaf_points_, &*s_.metric);
    Accumulator acc;
    acc.merge(r, tol().identity);
    CheckResult out = acc.finish("classical_symmetry");
    out.details["samples"] = leaf_points_.size() - r.skipped.size();
    if (!r.warnings.empty()) out.details["warnings"] = r.warnings;
    return out;
  }

  CheckResult principal_curvatures() {
    if (auto r = leaf_prerequisites()) return skipped("principal_curvatures", *r);
    if (!s_.metric) return skipped("principal_curvatures", kNoMetric);
    if (!torsion_free()) return skipped("principal_curvatures", kTorsion);
    if (!s_.codim1) return skipped("principal_curvatures", "no codimension-one data");
    const Metric& g = *s_.metric;
    const OneForm& theta = s_.one_form(s_.codim1->theta);
    const auto& span = dist().span();
    Accumulator acc;
    ordered_json values = ordered_json::array();
    for (const Point& p : leaf_points_) {
      const Vector n = unit_normal_at(g, theta, p);
      const PrincipalData pd = sffd::principal_curvatures(g, s_.connection, dist(), n, p, "theta-positive");
      const double scale = tol().curvature * (1.0 + pd.kappa.norm_inf());

      // h against the scalar form directly
      for (std::size_t a = 0; a < span.size(); ++a)
        for (std::size_t b = 0; b < span.size(); ++b)
          acc.add(std::abs(pd.h(a, b) - scalar_sff(g, s_.connection, dist(), n, span[a], span[b], p)), scale, p);

      // eigen-residual in frame coordinates
      const std::vector<Vector> frame = dist().frame_at(p);
      for (std::size_t a = 0; a < pd.frame.size(); ++a) {
        const Vector full = decompose_in_frame(frame, pd.frame[a]);
        Vector c(span.size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = full[i];
        acc.add((pd.h * c - pd.kappa[a] * (pd.gram * c)).norm_inf(), scale, p);
      }

      // the opposite normal flips every sign
      const PrincipalData flipped = sffd::principal_curvatures(g, s_.connection, dist(), -n, p, "theta-negative");
      double flip = 0.0;
      for (std::size_t a = 0; a < pd.kappa.size(); ++a)
        flip = std::max(flip, std::abs(flipped.kappa[a] + pd.kappa[pd.kappa.size() - 1 - a]));
      acc.add(flip, 0.0, p);

      values.push_back({{"point", point_json(p)}, {"kappa", vector_json(pd.kappa)}});
    }
    CheckResult out = acc.finish("principal_curvatures");
    out.details["orientation"] = "theta-positive";
    out.details["values"] = std::move(values);
    return out;
  }

  Codim1Setup setup() const {
    return Codim1Setup::create(s_.one_form(s_.codim1->theta), s_.field(s_.codim1->normal), dist().span(),
                               s_.connection, leaf_points_, s_.metric);
  }

  CheckResult h_d_consistency() {
    if (auto r = leaf_prerequisites()) return skipped("h_d_consistency", *r);
    if (!s_.codim1) return skipped("h_d_consistency", "no codimension-one data");
    const Codim1Setup cs = setup();
    const VectorField gauge = normal_from_gauge(cs.theta(), cs.normal());
    Accumulator acc;
    pairs(sections_, [&](const VectorField& x, const VectorField& y, const Point& p) {
      const double h = h_D_eval(cs, x, y, p);
      const double a = a_star_theta_eval(cs, x, y, p);
      acc.add(std::abs(h - a), tol().identity * (1.0 + std::abs(h)), p);
    });
    for (const Point& p : leaf_points_) {
      const Vector nv = cs.normal().at(p);
      acc.add((gauge.at(p) - nv).norm_inf(), tol().identity * (1.0 + nv.norm_inf()), p);
    }
    return acc.finish("h_d_consistency");
  }

  CheckResult obstruction() {
    if (auto r = leaf_prerequisites()) return skipped("obstruction", *r);
    if (!s_.codim1) return skipped("obstruction", "no codimension-one data");
    const Codim1Setup cs = setup();
    Accumulator acc;
    double value = 0.0;
    for (const Point& p : leaf_points_) {
      const ScalarFormSplit split = scalar_form_split(cs, p);
      const double scale = tol().identity * (1.0 + split.h.max_abs());
      acc.add((split.h - split.h.transpose() - split.obstruction).max_abs(), scale, p);
      acc.add((2.0 * split.skew - split.obstruction).max_abs(), scale, p);
      value = std::max(value, split.obstruction.max_abs());
    }
    pairs(sections_, [&](const VectorField& x, const VectorField& y, const Point& p) {
      const double hxy = h_D_eval(cs, x, y, p), hyx = h_D_eval(cs, y, x, p);
      acc.add(std::abs(hxy - hyx - symmetry_obstruction_eval(cs, x, y, p)),
              tol().identity * (1.0 + std::abs(hxy) + std::abs(hyx)), p);
    });
    CheckResult out = acc.finish("obstruction");
    out.details["value"] = value;
    return out;
  }

  struct NamedForm {
    std::string name;
    OneForm value;
  };

  const Scene& s_;
  std::optional<std::uint64_t> seed_;
  std::optional<Sampler> rng_;
  std::vector<Point> points_;
  std::vector<Point> leaf_points_;
  std::vector<VectorField> pool_;
  std::vector<VectorField> sections_;
  std::vector<Expression> scalings_;
  std::vector<Vector> directions_;
  std::vector<NamedForm> forms_;
  SampledResidual integrability_;
  bool integrable_ = false;
  double max_torsion_ = 0.0;
  std::string setup_error_;
};

}  // namespace

CheckReport run_checks(const Scene& scene, std::optional<std::uint64_t> seed, std::span<const std::string> only) {
  const auto start = std::chrono::steady_clock::now();
  CheckReport report;
  report.scene = scene.name;
  report.digest = scene.digest;
  report.tolerances = scene.tolerances;
  report.seed = seed;
  Runner runner(scene, seed);
  for (const std::string& name : scene.checks) {
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
    report.checks.push_back(runner.run(name));
  }
  report.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace sffd::cli
