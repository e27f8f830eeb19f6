#include "sffd/cli/scene.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sffd/cli/checks.hpp"
#include "sffd/riemann.hpp"

namespace sffd::cli {

using nlohmann::ordered_json;

std::string_view to_string(SceneErrorKind kind) {
  switch (kind) {
    case SceneErrorKind::Parse: return "parse error";
    case SceneErrorKind::UnknownReference: return "unknown reference";
    case SceneErrorKind::DimensionMismatch: return "dimension mismatch";
    case SceneErrorKind::InvariantFailure: return "invariant failure";
    case SceneErrorKind::Io: return "i/o error";
  }
  return "error";
}

SceneError::SceneError(SceneErrorKind kind, std::string pointer, const std::string& message)
    : Error(std::string(to_string(kind)) + " at '" + pointer + "': " + message),
      kind_(kind),
      pointer_(std::move(pointer)) {}

const VectorField& Scene::field(std::string_view name) const {
  for (const auto& f : fields)
    if (f.name == name) return f.value;
  throw SceneError(SceneErrorKind::UnknownReference, "/fields", "no field named '" + std::string(name) + "'");
}

const OneForm& Scene::one_form(std::string_view name) const {
  for (const auto& f : one_forms)
    if (f.name == name) return f.value;
  throw SceneError(SceneErrorKind::UnknownReference, "/one_forms", "no one-form named '" + std::string(name) + "'");
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::string child(const std::string& ptr, std::string_view key) {
  std::string out = ptr + "/";
  for (char c : key) {
    if (c == '~')
      out += "~0";
    else if (c == '/')
      out += "~1";
    else
      out += c;
  }
  return out;
}

std::string child(const std::string& ptr, std::size_t index) { return ptr + "/" + std::to_string(index); }

[[noreturn]] void fail(SceneErrorKind kind, const std::string& ptr, const std::string& msg) {
  throw SceneError(kind, ptr, msg);
}

const ordered_json& require(const ordered_json& doc, std::string_view key) {
  auto it = doc.find(key);
  if (it == doc.end()) fail(SceneErrorKind::Parse, "", "missing key '" + std::string(key) + "'");
  return *it;
}

void expect(bool ok, const std::string& ptr, const std::string& what) {
  if (!ok) fail(SceneErrorKind::Parse, ptr, "expected " + what);
}

class Loader {
 public:
  Loader(const ordered_json& doc, Scene& scene) : doc_(doc), s_(scene) {}

  void run() {
    static const char* const known[] = {"dim",    "coords", "domain", "metric",     "christoffels",
                                        "fields", "one_forms", "distribution", "codim1", "points",
                                        "checks", "tolerances", "oracle"};
    expect(doc_.is_object(), "", "a JSON object");
    for (const auto& [key, _] : doc_.items()) {
      bool ok = false;
      for (const char* k : known) ok = ok || key == k;
      if (!ok) fail(SceneErrorKind::Parse, child("", key), "unknown key '" + key + "'");
    }
    chart();
    fields();
    one_forms();
    points();
    guarded("/metric", [&] { connection(); });
    guarded("/distribution", [&] { distribution(); });
    guarded("/codim1", [&] { codim1(); });
    checks();
    tolerances();
    oracle();
  }

 private:
  template <typename F>
  void guarded(const std::string& ptr, F&& step) {
    try {
      step();
    } catch (const DomainError& e) {
      fail(SceneErrorKind::InvariantFailure, ptr, e.what());
    } catch (const DimensionError& e) {
      fail(SceneErrorKind::DimensionMismatch, ptr, e.what());
    }
  }

  Expression expr(const ordered_json& node, const std::string& ptr) {
    expect(node.is_string() || node.is_number(), ptr, "an expression string");
    const std::string text = node.is_string() ? node.get<std::string>() : node.dump();
    try {
      return sffd::parse(text, names_);
    } catch (const ParseError& e) {
      fail(SceneErrorKind::Parse, ptr, e.what());
    }
  }

  std::vector<Expression> components(const ordered_json& node, const std::string& ptr) {
    expect(node.is_array(), ptr, "an array of " + std::to_string(n_) + " expressions");
    if (node.size() != n_)
      fail(SceneErrorKind::DimensionMismatch, ptr,
           std::to_string(node.size()) + " components on a " + std::to_string(n_) + "-dimensional chart");
    std::vector<Expression> out;
    for (std::size_t i = 0; i < n_; ++i) out.push_back(expr(node[i], child(ptr, i)));
    return out;
  }

  void chart() {
    const ordered_json& dim = require(doc_, "dim");
    expect(dim.is_number_unsigned(), "/dim", "a positive integer");
    const ordered_json& coords = require(doc_, "coords");
    expect(coords.is_array(), "/coords", "an array of coordinate names");
    for (std::size_t i = 0; i < coords.size(); ++i) {
      expect(coords[i].is_string(), child("/coords", i), "a coordinate name");
      names_.push_back(coords[i].get<std::string>());
    }
    n_ = dim.get<std::size_t>();
    if (names_.size() != n_)
      fail(SceneErrorKind::DimensionMismatch, "/coords",
           std::to_string(names_.size()) + " names for dim " + std::to_string(n_));
    std::optional<Expression> domain;
    if (auto it = doc_.find("domain"); it != doc_.end()) domain = expr(*it, "/domain");
    try {
      s_.chart = Chart(names_, domain);
    } catch (const DimensionError& e) {
      fail(SceneErrorKind::DimensionMismatch, "/coords", e.what());
    }
  }

  template <typename T>
  void named(std::string_view key, std::vector<Named<T>>& out) {
    auto it = doc_.find(key);
    if (it == doc_.end()) return;
    const std::string ptr = child("", key);
    expect(it->is_object(), ptr, "an object of named component arrays");
    for (const auto& [name, value] : it->items()) out.push_back({name, T(components(value, child(ptr, name)))});
  }

  void fields() { named("fields", s_.fields); }
  void one_forms() { named("one_forms", s_.one_forms); }

  void points() {
    const ordered_json& pts = require(doc_, "points");
    expect(pts.is_array(), "/points", "an array of points");
    if (pts.empty()) fail(SceneErrorKind::InvariantFailure, "/points", "at least one sample point is required");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string ptr = child("/points", i);
      expect(pts[i].is_array(), ptr, "an array of coordinates");
      if (pts[i].size() != n_)
        fail(SceneErrorKind::DimensionMismatch, ptr,
             std::to_string(pts[i].size()) + " coordinates on a " + std::to_string(n_) + "-dimensional chart");
      std::vector<double> c;
      for (std::size_t k = 0; k < n_; ++k) {
        expect(pts[i][k].is_number(), child(ptr, k), "a number");
        c.push_back(pts[i][k].get<double>());
      }
      Point p(std::move(c));
      bool inside = false;
      try {
        inside = s_.chart.contains(p);
      } catch (const DomainError&) {
      }
      if (!inside) fail(SceneErrorKind::InvariantFailure, ptr, "point " + to_string(p) + " lies outside the domain");
      s_.points.push_back(std::move(p));
    }
  }

  void connection() {
    const auto metric = doc_.find("metric");
    const auto chris = doc_.find("christoffels");
    if (metric == doc_.end() && chris == doc_.end())
      fail(SceneErrorKind::Parse, "", "a scene needs \"metric\" or \"christoffels\"");

    if (metric != doc_.end()) {
      expect(metric->is_array() && metric->size() == n_, "/metric",
             "an " + std::to_string(n_) + "x" + std::to_string(n_) + " array");
      std::vector<std::vector<Expression>> rows;
      for (std::size_t i = 0; i < n_; ++i) {
        const std::string ptr = child("/metric", i);
        expect((*metric)[i].is_array(), ptr, "a row of expressions");
        rows.push_back(components((*metric)[i], ptr));
      }
      s_.metric.emplace(rows);
      for (std::size_t pi = 0; pi < s_.points.size(); ++pi) {
        const Point& p = s_.points[pi];
        for (std::size_t i = 0; i < n_; ++i)
          for (std::size_t j = i + 1; j < n_; ++j) {
            const double a = eval(rows[i][j], p, child(child("/metric", i), j));
            const double b = eval(rows[j][i], p, child(child("/metric", j), i));
            if (std::abs(a - b) > 1e-12 * (1.0 + std::abs(a)))
              fail(SceneErrorKind::InvariantFailure, child(child("/metric", j), i),
                   "metric is not symmetric at " + to_string(p));
          }
        try {
          s_.metric->check_positive_definite(p);
        } catch (const Error& e) {
          fail(SceneErrorKind::InvariantFailure, "/metric", e.what());
        }
      }
    }

    if (chris != doc_.end()) {
      expect(chris->is_object(), "/christoffels", "an object mapping \"k,i,j\" to expressions");
      std::vector<Connection::Entry> entries;
      for (const auto& [key, value] : chris->items()) {
        const std::string ptr = child("/christoffels", key);
        std::size_t idx[3];
        char tail;
        unsigned long a, b, c;
        if (std::sscanf(key.c_str(), "%lu,%lu,%lu%c", &a, &b, &c, &tail) != 3)
          fail(SceneErrorKind::Parse, ptr, "expected a key of the form \"k,i,j\"");
        idx[0] = a, idx[1] = b, idx[2] = c;
        for (std::size_t m = 0; m < 3; ++m)
          if (idx[m] < 1 || idx[m] > n_)
            fail(SceneErrorKind::DimensionMismatch, ptr, "index out of range 1.." + std::to_string(n_));
        entries.push_back({idx[0] - 1, idx[1] - 1, idx[2] - 1, expr(value, ptr)});
      }
      try {
        s_.connection = Connection::from_entries(n_, std::move(entries));
      } catch (const Error& e) {
        fail(SceneErrorKind::InvariantFailure, "/christoffels", e.what());
      }
    } else {
      s_.connection = levi_civita(*s_.metric);
      s_.connection_from_metric = true;
    }
  }

  double eval(const Expression& e, const Point& p, const std::string& ptr) {
    try {
      return e.eval(p.coords());
    } catch (const DomainError& err) {
      fail(SceneErrorKind::InvariantFailure, ptr, std::string(err.what()) + " at " + to_string(p));
    }
  }

  std::vector<std::string> names(const ordered_json& node, const std::string& ptr) {
    expect(node.is_array(), ptr, "an array of names");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < node.size(); ++i) {
      expect(node[i].is_string(), child(ptr, i), "a name");
      out.push_back(node[i].get<std::string>());
    }
    return out;
  }

  template <typename T>
  const T& lookup(const std::vector<Named<T>>& pool, const std::string& name, const std::string& ptr,
                  std::string_view what) {
    for (const auto& f : pool)
      if (f.name == name) return f.value;
    fail(SceneErrorKind::UnknownReference, ptr, std::string("undefined ") + std::string(what) + " '" + name + "'");
  }

  void distribution() {
    auto it = doc_.find("distribution");
    if (it == doc_.end()) return;
    expect(it->is_object(), "/distribution", "an object");
    for (const auto& [key, _] : it->items())
      if (key != "span" && key != "complement" && key != "annihilator")
        fail(SceneErrorKind::Parse, child("/distribution", key), "unknown key '" + key + "'");
    auto list = [&](std::string_view key) {
      auto k = it->find(key);
      return k == it->end() ? std::vector<std::string>{} : names(*k, child("/distribution", key));
    };
    const std::vector<std::string> span_names = list("span");
    const std::vector<std::string> complement_names = list("complement");
    const std::vector<std::string> annihilator_names = list("annihilator");
    if (span_names.empty()) fail(SceneErrorKind::InvariantFailure, "/distribution/span", "span is empty");

    std::vector<VectorField> span, complement;
    std::vector<OneForm> annihilator;
    for (std::size_t i = 0; i < span_names.size(); ++i)
      span.push_back(lookup(s_.fields, span_names[i], child("/distribution/span", i), "field"));
    for (std::size_t i = 0; i < complement_names.size(); ++i)
      complement.push_back(lookup(s_.fields, complement_names[i], child("/distribution/complement", i), "field"));
    for (std::size_t i = 0; i < annihilator_names.size(); ++i)
      annihilator.push_back(
          lookup(s_.one_forms, annihilator_names[i], child("/distribution/annihilator", i), "one-form"));
    if (span.size() + complement.size() != n_)
      fail(SceneErrorKind::DimensionMismatch, "/distribution",
           "span and complement have " + std::to_string(span.size() + complement.size()) +
               " fields on a " + std::to_string(n_) + "-dimensional chart");

    const DistributionTolerances tol;
    DistributionSpec spec{span_names, complement_names, annihilator_names,
                          Distribution(span, complement, annihilator, tol)};
    for (std::size_t a = 0; a < annihilator.size(); ++a)
      for (std::size_t b = 0; b < span.size(); ++b)
        for (const Point& p : s_.points) {
          const double v = annihilator[a].apply(p, span[b].at(p));
          if (std::abs(v) > tol.annihilation)
            fail(SceneErrorKind::InvariantFailure, child("/distribution/annihilator", a),
                 "'" + annihilator_names[a] + "' does not annihilate '" + span_names[b] + "' at " + to_string(p));
        }
    s_.distribution = std::move(spec);
  }

  void codim1() {
    auto it = doc_.find("codim1");
    if (it == doc_.end()) return;
    expect(it->is_object(), "/codim1", "an object");
    const auto th = it->find("theta");
    const auto nm = it->find("normal");
    expect(th != it->end() && th->is_string(), "/codim1/theta", "a one-form name");
    expect(nm != it->end() && nm->is_string(), "/codim1/normal", "a field name");
    Codim1Spec spec{th->get<std::string>(), nm->get<std::string>()};
    const OneForm& theta = lookup(s_.one_forms, spec.theta, "/codim1/theta", "one-form");
    const VectorField& normal = lookup(s_.fields, spec.normal, "/codim1/normal", "field");
    if (!s_.distribution)
      fail(SceneErrorKind::InvariantFailure, "/codim1", "a codimension-one setup needs a distribution");
    if (s_.distribution->span.size() + 1 != n_)
      fail(SceneErrorKind::DimensionMismatch, "/codim1", "the distribution is not of codimension one");
    const Codim1Tolerances tol;
    for (const Point& p : s_.points) {
      if (std::abs(theta.apply(p, normal.at(p)) - 1.0) > tol.normalization)
        fail(SceneErrorKind::InvariantFailure, "/codim1/normal", "theta(N) != 1 at " + to_string(p));
      for (const auto& name : s_.distribution->span)
        if (std::abs(theta.apply(p, s_.field(name).at(p))) > tol.annihilation)
          fail(SceneErrorKind::InvariantFailure, "/codim1/theta",
               "theta does not vanish on '" + name + "' at " + to_string(p));
    }
    s_.codim1 = std::move(spec);
  }

  void checks() {
    auto it = doc_.find("checks");
    std::vector<std::string> wanted;
    if (it != doc_.end()) wanted = names(*it, "/checks");
    for (std::size_t i = 0; i < wanted.size(); ++i)
      if (!is_catalog_check(wanted[i]))
        fail(SceneErrorKind::UnknownReference, child("/checks", i), "unknown check '" + wanted[i] + "'");
    for (const CatalogEntry& c : catalog()) {
      bool take = wanted.empty();
      for (const auto& w : wanted) take = take || w == c.name;
      if (take) s_.checks.emplace_back(c.name);
    }
  }

  void tolerances() {
    auto it = doc_.find("tolerances");
    if (it == doc_.end()) return;
    expect(it->is_object(), "/tolerances", "an object");
    for (const auto& [key, value] : it->items()) {
      const std::string ptr = child("/tolerances", key);
      expect(value.is_number() && value.get<double>() > 0.0, ptr, "a positive number");
      const double v = value.get<double>();
      Tolerances& t = s_.tolerances;
      if (key == "identity")
        t.identity = v;
      else if (key == "oracle")
        t.oracle = v;
      else if (key == "frobenius")
        t.frobenius = v;
      else if (key == "torsion")
        t.torsion = v;
      else if (key == "curvature")
        t.curvature = v;
      else
        fail(SceneErrorKind::UnknownReference, ptr, "unknown tolerance '" + key + "'");
    }
  }

  void oracle() {
    auto it = doc_.find("oracle");
    if (it == doc_.end()) return;
    expect(it->is_object(), "/oracle", "an object");
    for (const auto& [key, value] : it->items()) {
      const std::string ptr = child("/oracle", key);
      if (key == "h") {
        expect(value.is_number() && value.get<double>() > 0.0, ptr, "a positive step");
        s_.oracle.h = value.get<double>();
      } else if (key == "steps") {
        expect(value.is_number_unsigned() && value.get<int>() > 0, ptr, "a positive integer");
        s_.oracle.steps = value.get<int>();
      } else {
        fail(SceneErrorKind::Parse, ptr, "unknown key '" + key + "'");
      }
    }
  }

  const ordered_json& doc_;
  Scene& s_;
  std::vector<std::string> names_;
  std::size_t n_ = 0;
};

}  // namespace

Scene parse_scene(std::string_view text, std::string name) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SceneError(SceneErrorKind::Parse, "", "malformed JSON at byte " + std::to_string(e.byte));
  }
  Scene scene;
  scene.name = std::move(name);
  scene.digest = fnv1a_hex(text);
  Loader(doc, scene).run();
  return scene;
}

Scene load_scene(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SceneError(SceneErrorKind::Io, "", "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw SceneError(SceneErrorKind::Io, "", "cannot read " + path.string());
  return parse_scene(buf.str(), path.stem().string());
}

}  // namespace sffd::cli
