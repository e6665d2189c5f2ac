#include "skyrmion/config.hpp"

#include "skyrmion/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace skyrmion {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string &key, const std::string &what) {
  throw ConfigError(key + ": " + what);
}

std::string join(const std::string &prefix, const std::string &key) {
  return prefix.empty() ? key : prefix + "." + key;
}

// Wraps one JSON object; every getter records the key so that leftovers can
// be reported as unknown.
class Section {
public:
  Section(const json &j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) {
      fail(path_.empty() ? "<root>" : path_, "expected an object");
    }
  }

  bool has(const std::string &key) const { return j_.contains(key); }
  std::string key(const std::string &k) const { return join(path_, k); }
  const std::string &path() const { return path_; }

  const json &raw(const std::string &k) {
    seen_.insert(k);
    return j_.at(k);
  }

  void number(const std::string &k, double &out) {
    if (!has(k)) {
      return;
    }
    const json &v = raw(k);
    if (!v.is_number()) {
      fail(key(k), "expected a number");
    }
    out = v.get<double>();
    if (!std::isfinite(out)) {
      fail(key(k), "expected a finite number");
    }
  }

  template <class Int> void integer(const std::string &k, Int &out) {
    if (!has(k)) {
      return;
    }
    const json &v = raw(k);
    if (!v.is_number_integer()) {
      fail(key(k), "expected an integer");
    }
    out = v.get<Int>();
  }

  void boolean(const std::string &k, bool &out) {
    if (!has(k)) {
      return;
    }
    const json &v = raw(k);
    if (!v.is_boolean()) {
      fail(key(k), "expected true or false");
    }
    out = v.get<bool>();
  }

  void string(const std::string &k, std::string &out) {
    if (!has(k)) {
      return;
    }
    const json &v = raw(k);
    if (!v.is_string()) {
      fail(key(k), "expected a string");
    }
    out = v.get<std::string>();
  }

  /// number, or a fraction written "p/q"
  void spacing(const std::string &k, double &out) {
    if (!has(k)) {
      return;
    }
    const json &v = raw(k);
    if (v.is_number()) {
      out = v.get<double>();
      return;
    }
    if (!v.is_string()) {
      fail(key(k), "expected a number or a fraction like \"1/256\"");
    }
    const std::string s = v.get<std::string>();
    const auto slash = s.find('/');
    double num = 0.0;
    double den = 1.0;
    auto parse = [&](std::string_view part, double &x) {
      const auto r = std::from_chars(part.data(), part.data() + part.size(), x);
      return r.ec == std::errc() && r.ptr == part.data() + part.size();
    };
    const std::string_view sv(s);
    const bool ok = slash == std::string::npos
                        ? parse(sv, num)
                        : parse(sv.substr(0, slash), num) && parse(sv.substr(slash + 1), den);
    if (!ok || !(den != 0.0)) {
      fail(key(k), "cannot read \"" + s + "\" as a number or fraction");
    }
    out = num / den;
  }

  void point(const std::string &k, Vec2 &out) {
    if (has(k)) {
      out = to_point(raw(k), key(k));
    }
  }

  static Vec2 to_point(const json &v, const std::string &name) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      fail(name, "expected a point [x, y]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
  }

  void points(const std::string &k, std::vector<Vec2> &out) {
    if (!has(k)) {
      return;
    }
    const json &v = raw(k);
    if (!v.is_array()) {
      fail(key(k), "expected a list of points");
    }
    out.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(to_point(v[i], key(k) + "[" + std::to_string(i) + "]"));
    }
  }

  template <class T> void list(const std::string &k, std::vector<T> &out) {
    if (!has(k)) {
      return;
    }
    const json &v = raw(k);
    if (!v.is_array()) {
      fail(key(k), "expected a list");
    }
    out.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const bool ok = std::is_integral_v<T> ? v[i].is_number_integer() : v[i].is_number();
      if (!ok) {
        fail(key(k) + "[" + std::to_string(i) + "]", std::is_integral_v<T> ? "expected an integer" : "expected a number");
      }
      out.push_back(v[i].get<T>());
    }
  }

  Section child(const std::string &k) { return Section(raw(k), key(k)); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) {
        fail(key(it.key()), "unknown key");
      }
    }
  }

private:
  const json &j_;
  std::string path_;
  std::set<std::string> seen_;
};

json point_json(Vec2 p) { return json::array({p.x, p.y}); }

json solver_json(const SolverOptions &s) {
  json j;
  j["max_iterations"] = s.max_iterations;
  if (s.grad_tolerance) {
    j["grad_tolerance"] = *s.grad_tolerance;
  }
  j["step_rule"] = s.step_rule == StepRule::fixed ? "fixed" : "armijo";
  j["initial_step"] = s.initial_step;
  j["degree_check_every"] = s.degree_check_every;
  j["direction"] = s.direction == Direction::lbfgs ? "lbfgs" : "steepest";
  j["memory"] = s.memory;
  j["precondition"] = s.precondition;
  j["armijo_c"] = s.armijo_c;
  j["max_backtracks"] = s.max_backtracks;
  return j;
}

void read_solver(Section s, SolverOptions &o) {
  s.integer("max_iterations", o.max_iterations);
  if (s.has("grad_tolerance")) {
    double t = 0.0;
    s.number("grad_tolerance", t);
    o.grad_tolerance = t;
  }
  std::string rule = o.step_rule == StepRule::fixed ? "fixed" : "armijo";
  s.string("step_rule", rule);
  if (rule == "fixed") {
    o.step_rule = StepRule::fixed;
  } else if (rule == "armijo") {
    o.step_rule = StepRule::armijo_backtracking;
  } else {
    fail(s.key("step_rule"), "expected \"fixed\" or \"armijo\"");
  }
  s.number("initial_step", o.initial_step);
  s.integer("degree_check_every", o.degree_check_every);
  std::string dir = o.direction == Direction::lbfgs ? "lbfgs" : "steepest";
  s.string("direction", dir);
  if (dir == "lbfgs") {
    o.direction = Direction::lbfgs;
  } else if (dir == "steepest") {
    o.direction = Direction::steepest;
  } else {
    fail(s.key("direction"), "expected \"lbfgs\" or \"steepest\"");
  }
  s.integer("memory", o.memory);
  s.boolean("precondition", o.precondition);
  s.number("armijo_c", o.armijo_c);
  s.integer("max_backtracks", o.max_backtracks);
  s.finish();
  try {
    o.validate();
  } catch (const InvalidArgument &e) {
    fail(s.path(), e.what());
  }
}

} // namespace

std::string_view to_string(Mode mode) {
  switch (mode) {
  case Mode::minimize:
    return "minimize";
  case Mode::tail:
    return "tail";
  case Mode::predict:
    return "predict";
  case Mode::sweep:
    return "sweep";
  case Mode::validate:
    return "validate";
  case Mode::free_boundary:
    return "free-boundary";
  }
  return "?";
}

Mode mode_from_string(std::string_view name) {
  for (auto m : {Mode::minimize, Mode::tail, Mode::predict, Mode::sweep, Mode::validate, Mode::free_boundary}) {
    if (to_string(m) == name) {
      return m;
    }
  }
  throw ConfigError("mode: unknown mode '" + std::string(name) + "'");
}

json domain_to_json(const DomainSpec &d) {
  json j;
  j["kind"] = std::string(to_string(d.kind()));
  switch (d.kind()) {
  case DomainKind::disk:
    j["radius"] = d.radius();
    j["center"] = point_json(d.center());
    break;
  case DomainKind::strip:
    j["width"] = d.width();
    j["length"] = d.truncation_length();
    j["center"] = point_json(d.center());
    break;
  case DomainKind::rectangle:
    j["width"] = d.width();
    j["height"] = d.height();
    j["origin"] = point_json(d.center());
    break;
  case DomainKind::polygon: {
    json v = json::array();
    for (Vec2 p : d.vertices()) {
      v.push_back(point_json(p));
    }
    j["vertices"] = v;
    break;
  }
  case DomainKind::half_plane:
    j["half_width"] = d.half_width();
    j["depth"] = d.depth();
    j["boundary_y"] = d.boundary_y();
    j["center_x"] = d.center().x;
    break;
  }
  return j;
}

DomainSpec domain_from_json(const json &j, const std::string &key) {
  Section s(j, key);
  std::string kind;
  if (!s.has("kind")) {
    fail(s.key("kind"), "missing");
  }
  s.string("kind", kind);
  try {
    DomainSpec d = DomainSpec::disk(1.0);
    switch (domain_kind_from_string(kind)) {
    case DomainKind::disk: {
      double r = 1.0;
      Vec2 c;
      s.number("radius", r);
      s.point("center", c);
      d = DomainSpec::disk(r, c);
      break;
    }
    case DomainKind::strip: {
      double w = 1.0;
      double len = 8.0;
      Vec2 c;
      s.number("width", w);
      s.number("length", len);
      s.point("center", c);
      d = DomainSpec::strip(w, len, c);
      break;
    }
    case DomainKind::rectangle: {
      double w = 1.0;
      double h = 1.0;
      Vec2 o;
      s.number("width", w);
      s.number("height", h);
      s.point("origin", o);
      d = DomainSpec::rectangle(w, h, o);
      break;
    }
    case DomainKind::polygon: {
      std::vector<Vec2> v;
      if (!s.has("vertices")) {
        fail(s.key("vertices"), "missing");
      }
      s.points("vertices", v);
      d = DomainSpec::polygon(v);
      break;
    }
    case DomainKind::half_plane: {
      double hw = 8.0;
      double depth = 8.0;
      double by = 0.0;
      double cx = 0.0;
      s.number("half_width", hw);
      s.number("depth", depth);
      s.number("boundary_y", by);
      s.number("center_x", cx);
      d = DomainSpec::half_plane(hw, depth, by, cx);
      break;
    }
    }
    s.finish();
    return d;
  } catch (const InvalidArgument &e) {
    fail(key, e.what());
  }
}

void ExperimentConfig::validate() const {
  if (kappas.empty()) {
    fail("kappas", "must not be empty");
  }
  for (std::size_t i = 0; i < kappas.size(); ++i) {
    if (!(kappas[i] > 0.0)) {
      fail("kappas[" + std::to_string(i) + "]", "must be positive");
    }
  }
  if (mode == Mode::sweep) {
    for (std::size_t i = 1; i < kappas.size(); ++i) {
      if (!(kappas[i] < kappas[i - 1])) {
        fail("kappas", "a sweep needs strictly descending values");
      }
    }
  }
  if (!(lambda >= 0.0)) {
    fail("lambda", "must be nonnegative");
  }
  if (!(h > 0.0)) {
    fail("h", "must be positive");
  }
  const Box b = domain.bounding_box();
  for (double extent : {b.hi.x - b.lo.x, b.hi.y - b.lo.y}) {
    const double n = extent / h;
    if (std::abs(n - std::round(n)) > 1e-8 * std::max(1.0, n) || std::round(n) < 1.0) {
      fail("h", "does not divide the domain bounding box");
    }
  }
  if (tail_levels < 1) {
    fail("tail.levels", "must be at least 1");
  }
  if (!(tail_tolerance > 0.0)) {
    fail("tail.tolerance", "must be positive");
  }
  for (std::size_t i = 0; i < tail_centers.size(); ++i) {
    if (!domain.contains(tail_centers[i])) {
      fail("tail.centers[" + std::to_string(i) + "]", "lies outside the domain");
    }
  }
  if (!(argmin.coarse_step > 0.0) || !(argmin.refine_tolerance > 0.0) || !(argmin.h > 0.0)) {
    fail("argmin", "steps, tolerances and h must be positive");
  }
  if (workers < 1) {
    fail("workers", "must be at least 1");
  }
  for (int c : suite.criteria) {
    if (c < 1 || c > 9) {
      fail("validate.criteria", "criteria are numbered 1 to 9");
    }
  }
  if (suite.route_levels < 2) {
    fail("validate.route_levels", "must be at least 2");
  }
  if (suite.random_fields < 1) {
    fail("validate.random_fields", "must be at least 1");
  }
}

json ExperimentConfig::to_json() const {
  json j;
  j["mode"] = std::string(to_string(mode));
  j["domain"] = domain_to_json(domain);
  j["h"] = h;
  j["kappas"] = kappas;
  j["lambda"] = lambda;
  j["boundary"] = boundary == BoundaryMode::pinned ? "pinned" : "free";
  j["use_prediction"] = use_prediction;
  j["solver"] = solver_json(solver);
  json centers = json::array();
  for (Vec2 c : tail_centers) {
    centers.push_back(point_json(c));
  }
  j["tail"] = {{"centers", centers}, {"levels", tail_levels}, {"tolerance", tail_tolerance}};
  j["argmin"] = {{"coarse_step", argmin.coarse_step},
                 {"refine_tolerance", argmin.refine_tolerance},
                 {"h", argmin.h},
                 {"extrapolate_value", argmin.extrapolate_value}};
  j["validate"] = {{"disk_tail_h", suite.disk_tail_h},
                   {"strip_h", suite.strip_h},
                   {"strip_length", suite.strip_length},
                   {"route_h", suite.route_h},
                   {"route_levels", suite.route_levels},
                   {"sweep_h", suite.sweep_h},
                   {"sweep_kappas", suite.sweep_kappas},
                   {"anisotropy_h", suite.anisotropy_h},
                   {"anisotropy_kappa", suite.anisotropy_kappa},
                   {"free_boundary_h", suite.free_boundary_h},
                   {"free_boundary_kappa", suite.free_boundary_kappa},
                   {"property_h", suite.property_h},
                   {"random_fields", suite.random_fields},
                   {"criteria", suite.criteria}};
  j["outputs"] = {{"directory", outputs.directory.generic_string()},
                  {"fields", outputs.fields},
                  {"telemetry", outputs.telemetry},
                  {"tail_grids", outputs.tail_grids}};
  j["workers"] = workers;
  j["seed"] = seed;
  return j;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string ExperimentConfig::hash() const {
  // output location and worker count do not change any result
  json j = to_json();
  j.erase("outputs");
  j.erase("workers");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(j.dump())));
  return buf;
}

ExperimentConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error &e) {
    throw ConfigError(std::string("parse error: ") + e.what());
  }
  ExperimentConfig c;
  Section root(j, "");
  if (root.has("mode")) {
    std::string m;
    root.string("mode", m);
    c.mode = mode_from_string(m);
  }
  if (root.has("domain")) {
    c.domain = domain_from_json(root.raw("domain"), "domain");
  }
  root.spacing("h", c.h);
  root.list("kappas", c.kappas);
  root.number("lambda", c.lambda);
  if (root.has("boundary")) {
    std::string b;
    root.string("boundary", b);
    if (b == "pinned") {
      c.boundary = BoundaryMode::pinned;
    } else if (b == "free") {
      c.boundary = BoundaryMode::free;
    } else {
      fail("boundary", "expected \"pinned\" or \"free\"");
    }
  }
  root.boolean("use_prediction", c.use_prediction);
  if (root.has("solver")) {
    read_solver(root.child("solver"), c.solver);
  }
  if (root.has("tail")) {
    Section t = root.child("tail");
    t.points("centers", c.tail_centers);
    t.integer("levels", c.tail_levels);
    t.number("tolerance", c.tail_tolerance);
    t.finish();
  }
  if (root.has("argmin")) {
    Section a = root.child("argmin");
    a.number("coarse_step", c.argmin.coarse_step);
    a.number("refine_tolerance", c.argmin.refine_tolerance);
    a.spacing("h", c.argmin.h);
    a.boolean("extrapolate_value", c.argmin.extrapolate_value);
    a.finish();
  }
  if (root.has("validate")) {
    Section v = root.child("validate");
    SuiteOptions &s = c.suite;
    v.spacing("disk_tail_h", s.disk_tail_h);
    v.spacing("strip_h", s.strip_h);
    v.number("strip_length", s.strip_length);
    v.spacing("route_h", s.route_h);
    v.integer("route_levels", s.route_levels);
    v.spacing("sweep_h", s.sweep_h);
    v.list("sweep_kappas", s.sweep_kappas);
    v.spacing("anisotropy_h", s.anisotropy_h);
    v.number("anisotropy_kappa", s.anisotropy_kappa);
    v.spacing("free_boundary_h", s.free_boundary_h);
    v.number("free_boundary_kappa", s.free_boundary_kappa);
    v.spacing("property_h", s.property_h);
    v.integer("random_fields", s.random_fields);
    v.list("criteria", s.criteria);
    v.finish();
  }
  if (root.has("outputs")) {
    Section o = root.child("outputs");
    std::string dir = c.outputs.directory.generic_string();
    o.string("directory", dir);
    c.outputs.directory = dir;
    o.boolean("fields", c.outputs.fields);
    o.boolean("telemetry", c.outputs.telemetry);
    o.boolean("tail_grids", c.outputs.tail_grids);
    o.finish();
  }
  root.integer("workers", c.workers);
  root.integer("seed", c.seed);
  root.finish();
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

} // namespace skyrmion
