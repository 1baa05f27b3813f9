#include "ks/scenario.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "json.hpp"

#include "ks/error.hpp"

namespace ks::app {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw ValidationError(origin + ": " + what);
}

const json& need(const json& j, const char* key, const std::string& origin) {
  auto it = j.find(key);
  if (it == j.end()) fail(origin, std::string("missing field \"") + key + "\"");
  return *it;
}

double as_real(const json& j, const std::string& origin) {
  if (!j.is_number()) fail(origin, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& origin) {
  if (!j.is_number_integer()) fail(origin, "expected an integer");
  return j.get<int>();
}

std::string as_str(const json& j, const std::string& origin) {
  if (!j.is_string()) fail(origin, "expected a string");
  return j.get<std::string>();
}

Vec2 as_vec2(const json& j, const std::string& origin) {
  if (!j.is_array() || j.size() != 2) fail(origin, "expected [x, y]");
  return {as_real(j[0], origin), as_real(j[1], origin)};
}

std::vector<double> as_reals(const json& j, const std::string& origin) {
  if (!j.is_array()) fail(origin, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(as_real(v, origin));
  return out;
}

// Scalar values broadcast across all sources.
std::vector<double> as_reals_n(const json& j, std::size_t n, const std::string& origin) {
  if (j.is_number()) return std::vector<double>(n, j.get<double>());
  auto out = as_reals(j, origin);
  if (out.size() != n) {
    fail(origin, "expected " + std::to_string(n) + " entries, got " + std::to_string(out.size()));
  }
  return out;
}

Disk as_disk(const json& j, const std::string& origin) {
  Disk d;
  d.center = as_vec2(need(j, "center", origin), origin + ".center");
  d.radius = as_real(need(j, "radius", origin), origin + ".radius");
  if (!(d.radius > 0)) fail(origin, "radius must be positive");
  return d;
}

dom::PiecewiseLinear as_schedule_1d(const json& j, const std::string& origin) {
  dom::PiecewiseLinear s;
  s.times = as_reals(need(j, "times", origin), origin + ".times");
  s.values = as_reals(need(j, "values", origin), origin + ".values");
  return s;
}

dom::PiecewisePath as_schedule_2d(const json& j, const std::string& origin) {
  dom::PiecewisePath s;
  s.times = as_reals(need(j, "times", origin), origin + ".times");
  const json& pts = need(j, "points", origin);
  if (!pts.is_array()) fail(origin, "points must be an array of [x, y]");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    s.points.push_back(as_vec2(pts[i], origin + ".points[" + std::to_string(i) + "]"));
  }
  return s;
}

mag::DipoleConfig parse_dipoles(const json& j, const std::string& origin) {
  mag::DipoleConfig cfg;
  const std::string mode = as_str(need(j, "mode", origin), origin + ".mode");
  if (mode == "intensity-direction") {
    cfg.mode = mag::ControlMode::IntensityDirection;
  } else if (mode == "intensity-position") {
    cfg.mode = mag::ControlMode::IntensityPosition;
  } else {
    fail(origin + ".mode", "expected \"intensity-direction\" or \"intensity-position\"");
  }

  const json& jint = need(j, "intensity", origin);
  auto alpha0 = as_reals(need(jint, "initial", origin + ".intensity"), origin + ".intensity.initial");
  const std::size_t n = alpha0.size();
  if (n == 0) fail(origin, "at least one source required");

  const json& jpl = need(j, "placement", origin);
  auto place0 = as_reals_n(need(jpl, "initial", origin + ".placement"), n, origin + ".placement.initial");

  cfg.bounds.intensity_lo = as_reals_n(need(jint, "lower", origin + ".intensity"), n, origin + ".intensity.lower");
  cfg.bounds.intensity_hi = as_reals_n(need(jint, "upper", origin + ".intensity"), n, origin + ".intensity.upper");
  cfg.bounds.placement_lo = as_reals_n(need(jpl, "lower", origin + ".placement"), n, origin + ".placement.lower");
  cfg.bounds.placement_hi = as_reals_n(need(jpl, "upper", origin + ".placement"), n, origin + ".placement.upper");

  cfg.dipoles.resize(n);
  if (cfg.mode == mag::ControlMode::IntensityDirection) {
    const json& jpos = need(j, "positions", origin);
    if (!jpos.is_array() || jpos.size() != n) {
      fail(origin + ".positions", "expected " + std::to_string(n) + " positions");
    }
    for (std::size_t i = 0; i < n; ++i) {
      auto& d = cfg.dipoles[i];
      d.position = as_vec2(jpos[i], origin + ".positions[" + std::to_string(i) + "]");
      d.direction_angle = place0[i];
      d.intensity = alpha0[i];
    }
  } else {
    const json& jcur = need(j, "curves", origin);
    if (!jcur.is_array() || jcur.size() != n) {
      fail(origin + ".curves", "expected " + std::to_string(n) + " curves");
    }
    auto angles = as_reals_n(need(j, "directions", origin), n, origin + ".directions");
    for (std::size_t i = 0; i < n; ++i) {
      const std::string co = origin + ".curves[" + std::to_string(i) + "]";
      Disk circle = as_disk(jcur[i], co);
      auto& d = cfg.dipoles[i];
      d.trajectory = std::make_shared<mag::CircleCurve>(circle.center, circle.radius);
      d.curve_param = place0[i];
      d.position = d.trajectory->position(place0[i]);
      d.direction_angle = angles[i];
      d.intensity = alpha0[i];
    }
  }
  return cfg;
}

dom::MovingDomain parse_domain(const json& j, const std::string& origin) {
  dom::MovingDomain d;
  d.reference = as_disk(need(j, "reference", origin), origin + ".reference");
  d.translation = as_schedule_2d(need(j, "translation", origin), origin + ".translation");
  if (auto it = j.find("scale"); it != j.end()) {
    d.scale = as_schedule_1d(*it, origin + ".scale");
  } else {
    d.scale.times = {d.translation.times.front(), d.translation.times.back()};
    d.scale.values = {1.0, 1.0};
  }
  return d;
}

dom::TargetField parse_target(const json& j, const std::string& origin) {
  const std::string type = as_str(need(j, "type", origin), origin + ".type");
  if (type == "constant") {
    return dom::constant_target(as_vec2(need(j, "value", origin), origin + ".value"));
  }
  if (type == "piecewise") {
    auto times = as_reals(need(j, "switch_times", origin), origin + ".switch_times");
    const json& jv = need(j, "values", origin);
    if (!jv.is_array() || jv.size() != times.size() + 1) {
      fail(origin + ".values", "expected one more value than switch times");
    }
    std::vector<Vec2> values;
    for (std::size_t i = 0; i < jv.size(); ++i) {
      values.push_back(as_vec2(jv[i], origin + ".values[" + std::to_string(i) + "]"));
    }
    return dom::piecewise_constant_target(times, values);
  }
  fail(origin + ".type", "expected \"constant\" or \"piecewise\"");
}

fem::MeshSpec parse_mesh(const json& j, const std::string& origin) {
  const std::string type = as_str(need(j, "type", origin), origin + ".type");
  if (type == "rect") {
    fem::RectSpec r;
    r.width = as_real(need(j, "width", origin), origin + ".width");
    r.height = as_real(need(j, "height", origin), origin + ".height");
    r.center = as_vec2(need(j, "center", origin), origin + ".center");
    if (auto it = j.find("angle"); it != j.end()) r.angle = as_real(*it, origin + ".angle");
    return r;
  }
  if (type == "slot") {
    fem::SlotSpec s;
    s.outer_lo = as_vec2(need(j, "outer_lo", origin), origin + ".outer_lo");
    s.outer_hi = as_vec2(need(j, "outer_hi", origin), origin + ".outer_hi");
    s.slot_lo = as_vec2(need(j, "slot_lo", origin), origin + ".slot_lo");
    s.slot_hi = as_vec2(need(j, "slot_hi", origin), origin + ".slot_hi");
    return s;
  }
  if (type == "disk") {
    fem::DiskSpec d;
    const Disk b = as_disk(j, origin);
    d.center = b.center;
    d.radius = b.radius;
    return d;
  }
  fail(origin + ".type", "expected \"rect\", \"slot\", or \"disk\"");
}

PdeBlock parse_pde(const json& j, const std::string& origin, double t_end) {
  PdeBlock p;
  p.mesh_spec = parse_mesh(need(j, "mesh", origin), origin + ".mesh");
  p.target_h = as_real(need(j, "h", origin), origin + ".h");
  p.settings.eps = as_real(need(j, "eps", origin), origin + ".eps");
  p.settings.t_end = t_end;

  const json& jdt = need(j, "dt", origin);
  if (jdt.is_string() && jdt.get<std::string>() == "auto") {
    p.auto_dt = true;
    p.settings.dt = 0.0;
  } else {
    p.settings.dt = as_real(jdt, origin + ".dt");
  }

  const std::string bc = as_str(need(j, "bc", origin), origin + ".bc");
  if (bc == "neumann") {
    p.settings.bc = pde::BoundaryKind::NeumannZeroFlux;
  } else if (bc == "dirichlet") {
    p.settings.bc = pde::BoundaryKind::DirichletZero;
  } else {
    fail(origin + ".bc", "expected \"neumann\" or \"dirichlet\"");
  }

  const std::string scheme = as_str(need(j, "scheme", origin), origin + ".scheme");
  if (scheme == "eafe-implicit") {
    p.settings.scheme = pde::SteppingScheme::EafeImplicit;
  } else if (scheme == "explicit-lumped") {
    p.settings.scheme = pde::SteppingScheme::ExplicitLumped;
  } else {
    fail(origin + ".scheme", "expected \"eafe-implicit\" or \"explicit-lumped\"");
  }

  if (auto it = j.find("mass"); it != j.end()) {
    const std::string mass = as_str(*it, origin + ".mass");
    if (mass == "lumped") {
      p.settings.mass = pde::MassVariant::Lumped;
    } else if (mass == "consistent") {
      p.settings.mass = pde::MassVariant::Consistent;
    } else {
      fail(origin + ".mass", "expected \"lumped\" or \"consistent\"");
    }
  }
  if (auto it = j.find("solver"); it != j.end()) {
    const json& js = *it;
    if (auto f = js.find("rel_tol"); f != js.end()) {
      p.settings.solver.rel_tol = as_real(*f, origin + ".solver.rel_tol");
    }
    if (auto f = js.find("max_iters"); f != js.end()) {
      p.settings.solver.max_iters = as_int(*f, origin + ".solver.max_iters");
    }
  }
  if (auto it = j.find("stability_safety"); it != j.end()) {
    p.settings.stability_safety = as_real(*it, origin + ".stability_safety");
  }

  const json& ji = need(j, "initial", origin);
  p.initial_center = as_vec2(need(ji, "center", origin + ".initial"), origin + ".initial.center");
  p.initial_sigma2 = as_real(need(ji, "sigma2", origin + ".initial"), origin + ".initial.sigma2");
  if (auto it = j.find("snapshot_times"); it != j.end()) {
    p.snapshot_times = as_reals(*it, origin + ".snapshot_times");
  }
  return p;
}

}  // namespace

void Scenario::validate() const {
  dipoles.validate();
  domain.validate();
  weights.validate();
  optimizer.validate();
  horizon.validate();
  if (n_steps < 1) throw ValidationError("scenario: time.steps must be at least 1");
  if (quadrature_refinement < 1) throw ValidationError("scenario: quadrature_refinement must be at least 1");
  if (!(t_end() > 0)) throw ValidationError("scenario: domain schedule must end after t = 0");
  if (pde) {
    if (!pde->auto_dt && !(pde->settings.dt > 0)) {
      throw ValidationError("scenario: pde.dt must be positive or \"auto\"");
    }
    if (!(pde->target_h > 0)) throw ValidationError("scenario: pde.h must be positive");
    if (!(pde->initial_sigma2 > 0)) throw ValidationError("scenario: pde.initial.sigma2 must be positive");
    for (double t : pde->snapshot_times) {
      if (t < -1e-12 || t > t_end() * (1 + 1e-12)) {
        throw ValidationError("scenario: snapshot time outside [0, T]");
      }
    }
  }
}

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(origin + ": " + e.what());
  }
  if (!j.is_object()) fail(origin, "top level must be an object");

  Scenario s;
  s.name = as_str(need(j, "name", origin), origin + ".name");
  s.dipoles = parse_dipoles(need(j, "dipoles", origin), origin + ".dipoles");
  if (auto it = j.find("control_region"); it != j.end()) {
    s.dipoles.keep_out = as_disk(*it, origin + ".control_region");
  }
  s.domain = parse_domain(need(j, "domain", origin), origin + ".domain");
  s.target = parse_target(need(j, "target", origin), origin + ".target");

  if (auto it = j.find("objective"); it != j.end()) {
    const json& jo = *it;
    if (auto f = jo.find("lambda"); f != jo.end()) s.weights.lambda = as_real(*f, origin + ".objective.lambda");
    if (auto f = jo.find("eta"); f != jo.end()) s.weights.eta = as_real(*f, origin + ".objective.eta");
    if (auto f = jo.find("beta"); f != jo.end()) s.weights.beta = as_real(*f, origin + ".objective.beta");
  }
  if (auto it = j.find("optimizer"); it != j.end()) {
    const json& jo = *it;
    if (auto f = jo.find("grad_tol"); f != jo.end()) s.optimizer.grad_tol = as_real(*f, origin + ".optimizer.grad_tol");
    if (auto f = jo.find("max_iters"); f != jo.end()) s.optimizer.max_iters = as_int(*f, origin + ".optimizer.max_iters");
    if (auto f = jo.find("bfgs_memory"); f != jo.end()) s.optimizer.bfgs_memory = as_int(*f, origin + ".optimizer.bfgs_memory");
  }
  if (auto it = j.find("horizon"); it != j.end()) {
    const json& jh = *it;
    if (auto f = jh.find("tol"); f != jh.end()) s.horizon.tol = as_real(*f, origin + ".horizon.tol");
    if (auto f = jh.find("kappa_multiple"); f != jh.end()) {
      s.horizon.kappa_multiple = as_int(*f, origin + ".horizon.kappa_multiple");
    }
  }
  s.horizon.inner = s.optimizer;

  const json& jt = need(j, "time", origin);
  s.n_steps = as_int(need(jt, "steps", origin + ".time"), origin + ".time.steps");
  const double T = as_real(need(jt, "T", origin + ".time"), origin + ".time.T");
  if (std::abs(T - s.domain.t_end()) > 1e-9 * std::max(1.0, std::abs(T))) {
    fail(origin, "time.T must match the end of the domain schedule");
  }

  if (auto it = j.find("quadrature_refinement"); it != j.end()) {
    s.quadrature_refinement = as_int(*it, origin + ".quadrature_refinement");
  }
  if (auto it = j.find("pde"); it != j.end()) {
    s.pde = parse_pde(*it, origin + ".pde", s.domain.t_end());
  }
  if (auto it = j.find("output_dir"); it != j.end()) {
    s.output_dir = as_str(*it, origin + ".output_dir");
  }

  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

}  // namespace ks::app
