#include "corner_euler/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "corner_euler/biot_savart.hpp"
#include "corner_euler/estimates.hpp"
#include "corner_euler/io.hpp"
#include "corner_euler/parallel.hpp"
#include "corner_euler/report.hpp"
#include "corner_euler/simd/kernels.hpp"
#include "json.hpp"

namespace corner_euler::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

const std::map<std::string, Command>& command_table() {
  static const std::map<std::string, Command> table = {
      {"simulate", Command::simulate},       {"verify-kernel", Command::verify_kernel},
      {"verify-map", Command::verify_map},   {"verify-velocity", Command::verify_velocity},
      {"verify-k3", Command::verify_k3},     {"gronwall", Command::gronwall},
      {"boundary", Command::boundary},       {"w1p", Command::w1p},
      {"all-checks", Command::all_checks},
  };
  return table;
}

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(path + ": " + message);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void allow_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) fail(path.empty() ? "config" : path, "must be a JSON object");
  for (const auto& item : obj.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return item.key() == k; })) {
      fail(join(path, item.key()), "unknown field");
    }
  }
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "must be finite");
  return x;
}

double number(const json& obj, const std::string& path, const char* key, double fallback) {
  return obj.contains(key) ? as_number(obj.at(key), join(path, key)) : fallback;
}

std::size_t count(const json& obj, const std::string& path, const char* key, std::size_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) fail(join(path, key), "must be a nonnegative integer");
  return v.get<std::size_t>();
}

Vec2 as_vec2(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) fail(path, "must be an array of two numbers");
  return {as_number(v[0], at(path, 0)), as_number(v[1], at(path, 1))};
}

std::vector<double> number_list(const json& obj, const std::string& path, const char* key,
                                std::vector<double> fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  const std::string p = join(path, key);
  if (!v.is_array() || v.empty()) fail(p, "must be a nonempty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], at(p, i)));
  return out;
}

std::vector<Vec2> point_list(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) return {};
  const json& v = obj.at(key);
  const std::string p = join(path, key);
  if (!v.is_array()) fail(p, "must be an array of points");
  std::vector<Vec2> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_vec2(v[i], at(p, i)));
  return out;
}

ojson vec2_json(Vec2 v) { return ojson::array({v.x, v.y}); }

DomainSpec parse_domain(const json& j) {
  const std::string path = "domain";
  allow_keys(j, path, {"kind", "theta0", "delta"});
  if (!j.contains("kind") || !j.at("kind").is_string()) fail("domain.kind", "must be one of unit_disk, half_disk, sector");
  const DomainKind kind = domain_kind_from_string(j.at("kind").get<std::string>());
  const double delta = number(j, path, "delta", 0.0);
  if (j.contains("delta") && !(delta > 0.0)) fail("domain.delta", "must be positive");
  DomainSpec d;
  switch (kind) {
    case DomainKind::unit_disk:
      if (j.contains("theta0")) fail("domain.theta0", "only valid for kind sector");
      d = make_unit_disk();
      break;
    case DomainKind::half_disk:
      if (j.contains("theta0")) fail("domain.theta0", "only valid for kind sector");
      d = make_half_disk(delta);
      break;
    case DomainKind::sector:
      if (!j.contains("theta0")) fail("domain.theta0", "required for kind sector");
      d = make_sector(number(j, path, "theta0", 0.0), delta);
      break;
  }
  validate(d);
  return d;
}

VorticitySource parse_source(const json& j, const std::string& path, const DomainSpec& domain) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    fail(join(path, "type"), "must be \"patch\" or \"single_vortex\"");
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "single_vortex") {
    allow_keys(j, path, {"type", "position", "circulation"});
    if (!j.contains("position")) fail(join(path, "position"), "required");
    VortexSource v;
    v.position = as_vec2(j.at("position"), join(path, "position"));
    if (!(norm2(v.position) < 1.0)) fail(join(path, "position"), "must lie strictly inside the unit disk");
    v.circulation = number(j, path, "circulation", 1.0);
    return v;
  }
  if (type != "patch") fail(join(path, "type"), "must be \"patch\" or \"single_vortex\"");
  allow_keys(j, path, {"type", "shape", "center", "radius", "lo", "hi", "value", "resolution", "subdivisions"});
  PatchSource p;
  p.patch.value = number(j, path, "value", 1.0);
  p.resolution = number(j, path, "resolution", 32.0);
  if (!(p.resolution >= 8.0)) fail(join(path, "resolution"), "must be at least 8");
  p.subdivisions = static_cast<int>(count(j, path, "subdivisions", 4));
  if (p.subdivisions < 1) fail(join(path, "subdivisions"), "must be at least 1");
  const std::string shape = j.contains("shape") && j.at("shape").is_string() ? j.at("shape").get<std::string>() : "";
  if (shape == "circle") {
    if (!j.contains("center")) fail(join(path, "center"), "required for a circle");
    CirclePatch c;
    c.center = as_vec2(j.at("center"), join(path, "center"));
    c.radius = number(j, path, "radius", 0.0);
    if (!(c.radius > 0.0)) fail(join(path, "radius"), "must be positive");
    for (int k = 0; k < 512; ++k) {
      if (!contains(domain, c.center + polar(c.radius, 2.0 * std::numbers::pi * k / 512))) {
        fail(path, "circle patch is not contained in the domain");
      }
    }
    p.patch.shape = c;
  } else if (shape == "rectangle") {
    if (!j.contains("lo") || !j.contains("hi")) fail(path, "rectangle needs lo and hi");
    RectanglePatch r;
    r.lo = as_vec2(j.at("lo"), join(path, "lo"));
    r.hi = as_vec2(j.at("hi"), join(path, "hi"));
    if (!(r.hi.x > r.lo.x && r.hi.y > r.lo.y)) fail(join(path, "hi"), "must exceed lo in both coordinates");
    p.patch.shape = r;
  } else {
    fail(join(path, "shape"), "must be \"circle\" or \"rectangle\"");
  }
  return p;
}

ojson source_json(const VorticitySource& s) {
  ojson j;
  if (const auto* v = std::get_if<VortexSource>(&s)) {
    j["type"] = "single_vortex";
    j["position"] = vec2_json(v->position);
    j["circulation"] = v->circulation;
    return j;
  }
  const auto& p = std::get<PatchSource>(s);
  j["type"] = "patch";
  if (const auto* c = std::get_if<CirclePatch>(&p.patch.shape)) {
    j["shape"] = "circle";
    j["center"] = vec2_json(c->center);
    j["radius"] = c->radius;
  } else {
    const auto& r = std::get<RectanglePatch>(p.patch.shape);
    j["shape"] = "rectangle";
    j["lo"] = vec2_json(r.lo);
    j["hi"] = vec2_json(r.hi);
  }
  j["value"] = p.patch.value;
  j["resolution"] = p.resolution;
  j["subdivisions"] = p.subdivisions;
  return j;
}

ojson resolved(const RunConfig& c) {
  ojson j;
  j["command"] = to_string(c.command);
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  ojson d;
  d["kind"] = to_string(c.domain.kind);
  if (c.domain.kind == DomainKind::sector) d["theta0"] = c.domain.theta0;
  d["delta"] = c.domain.delta;
  j["domain"] = d;
  j["vorticity"] = ojson::array();
  for (const auto& s : c.vorticity) j["vorticity"].push_back(source_json(s));
  ojson tr;
  tr["disk"] = ojson::array();
  for (Vec2 p : c.disk_tracers) tr["disk"].push_back(vec2_json(p));
  tr["physical"] = ojson::array();
  for (Vec2 p : c.physical_tracers) tr["physical"].push_back(vec2_json(p));
  j["tracers"] = tr;
  ojson f;
  f["dt"] = c.flow.dt;
  f["t_end"] = c.flow.t_end;
  f["stepper"] = to_string(c.flow.stepper);
  f["tolerance"] = c.flow.tolerance;
  f["record_every"] = c.flow.record_every;
  f["record_particles"] = c.flow.record_particles;
  f["snapshots"] = c.snapshots;
  j["flow"] = f;
  const CheckParams& k = c.checks;
  ojson ch;
  ch["identity_samples"] = k.identity_samples;
  ch["kernel_samples"] = k.kernel_samples;
  ch["k3_pairs"] = k.k3_pairs;
  ch["k3_resolution"] = k.k3_resolution;
  ch["k3_stability"] = k.k3_stability;
  ch["velocity_samples"] = k.velocity_samples;
  ch["w1p_p"] = k.w1p_p;
  ch["w1p_grid"] = k.w1p_grid;
  ch["gronwall_d0"] = k.gronwall_d0;
  ch["boundary_margins"] = k.boundary_margins;
  ch["boundary_tracers_per_margin"] = k.boundary_tracers_per_margin;
  j["checks"] = ch;
  return j;
}

bool has_patch(const RunConfig& c) {
  return std::any_of(c.vorticity.begin(), c.vorticity.end(),
                     [](const VorticitySource& s) { return std::holds_alternative<PatchSource>(s); });
}

void check_command_needs(const RunConfig& c) {
  const bool corners = !c.domain.corners.empty();
  switch (c.command) {
    case Command::verify_map:
      if (!corners) fail("domain.kind", "verify-map needs a domain with corners");
      break;
    case Command::verify_velocity:
    case Command::w1p:
      if (!has_patch(c)) fail("vorticity", to_string(c.command) + " needs at least one patch source");
      break;
    case Command::gronwall:
      if (c.vorticity.empty()) fail("vorticity", "gronwall needs vorticity");
      if (c.flow.stepper != Stepper::rk4) fail("flow.stepper", "gronwall needs the rk4 stepper");
      break;
    default:
      break;
  }
}

}  // namespace

std::string to_string(Command c) {
  for (const auto& [name, cmd] : command_table()) {
    if (cmd == c) return name;
  }
  return "unknown";
}

Command command_from_string(const std::string& name) {
  const auto it = command_table().find(name);
  if (it == command_table().end()) {
    std::string known;
    for (const auto& [n, c] : command_table()) known += (known.empty() ? "" : ", ") + n;
    fail("command", "unknown command '" + name + "' (expected one of " + known + ")");
  }
  return it->second;
}

RunConfig parse_config(const std::string& json_text, const std::optional<std::string>& command) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: not valid JSON (") + e.what() + ")");
  }
  allow_keys(root, "", {"command", "seed", "output_dir", "domain", "vorticity", "tracers", "flow", "checks"});
  RunConfig c;
  try {
    if (command) {
      c.command = command_from_string(*command);
    } else {
      if (!root.contains("command") || !root.at("command").is_string()) fail("command", "required string");
      c.command = command_from_string(root.at("command").get<std::string>());
    }
    if (root.contains("seed")) {
      if (!root.at("seed").is_number_integer() || root.at("seed").get<long long>() < 0) {
        fail("seed", "must be a nonnegative integer");
      }
      c.seed = root.at("seed").get<std::uint64_t>();
    }
    if (root.contains("output_dir")) {
      if (!root.at("output_dir").is_string() || root.at("output_dir").get<std::string>().empty()) {
        fail("output_dir", "must be a nonempty string");
      }
      c.output_dir = root.at("output_dir").get<std::string>();
    }
    if (!root.contains("domain")) fail("domain", "required");
    c.domain = parse_domain(root.at("domain"));

    if (root.contains("vorticity")) {
      const json& v = root.at("vorticity");
      if (v.is_object()) {
        c.vorticity.push_back(parse_source(v, "vorticity", c.domain));
      } else if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) c.vorticity.push_back(parse_source(v[i], at("vorticity", i), c.domain));
      } else {
        fail("vorticity", "must be an object or an array of objects");
      }
    }

    if (root.contains("tracers")) {
      const json& t = root.at("tracers");
      allow_keys(t, "tracers", {"disk", "physical"});
      c.disk_tracers = point_list(t, "tracers", "disk");
      c.physical_tracers = point_list(t, "tracers", "physical");
      for (std::size_t i = 0; i < c.disk_tracers.size(); ++i) {
        if (!(norm2(c.disk_tracers[i]) < 1.0)) fail(at("tracers.disk", i), "must lie strictly inside the unit disk");
      }
      for (std::size_t i = 0; i < c.physical_tracers.size(); ++i) {
        if (!contains(c.domain, c.physical_tracers[i])) fail(at("tracers.physical", i), "must lie inside the domain");
      }
    }

    if (root.contains("flow")) {
      const json& f = root.at("flow");
      allow_keys(f, "flow", {"dt", "t_end", "stepper", "tolerance", "record_every", "record_particles", "snapshots"});
      c.flow.dt = number(f, "flow", "dt", c.flow.dt);
      c.flow.t_end = number(f, "flow", "t_end", c.flow.t_end);
      c.flow.tolerance = number(f, "flow", "tolerance", c.flow.tolerance);
      c.flow.record_every = count(f, "flow", "record_every", c.flow.record_every);
      if (f.contains("stepper")) {
        if (!f.at("stepper").is_string()) fail("flow.stepper", "must be \"rk4\" or \"adaptive\"");
        c.flow.stepper = stepper_from_string(f.at("stepper").get<std::string>());
      }
      for (const char* key : {"record_particles", "snapshots"}) {
        if (f.contains(key) && !f.at(key).is_boolean()) fail(join("flow", key), "must be true or false");
      }
      c.flow.record_particles = f.value("record_particles", c.flow.record_particles);
      c.snapshots = f.value("snapshots", false);
      if (c.snapshots) c.flow.record_particles = true;
    }
    validate(c.flow);

    if (root.contains("checks")) {
      const json& k = root.at("checks");
      allow_keys(k, "checks",
                 {"identity_samples", "kernel_samples", "k3_pairs", "k3_resolution", "k3_stability",
                  "velocity_samples", "w1p_p", "w1p_grid", "gronwall_d0", "boundary_margins",
                  "boundary_tracers_per_margin"});
      CheckParams& p = c.checks;
      p.identity_samples = count(k, "checks", "identity_samples", p.identity_samples);
      p.kernel_samples = count(k, "checks", "kernel_samples", p.kernel_samples);
      p.k3_pairs = count(k, "checks", "k3_pairs", p.k3_pairs);
      p.k3_resolution = count(k, "checks", "k3_resolution", p.k3_resolution);
      p.k3_stability = number(k, "checks", "k3_stability", p.k3_stability);
      p.velocity_samples = count(k, "checks", "velocity_samples", p.velocity_samples);
      p.w1p_p = number_list(k, "checks", "w1p_p", p.w1p_p);
      p.w1p_grid = count(k, "checks", "w1p_grid", p.w1p_grid);
      p.gronwall_d0 = number_list(k, "checks", "gronwall_d0", p.gronwall_d0);
      p.boundary_margins = number_list(k, "checks", "boundary_margins", p.boundary_margins);
      p.boundary_tracers_per_margin = count(k, "checks", "boundary_tracers_per_margin", p.boundary_tracers_per_margin);
    }
    const CheckParams& p = c.checks;
    if (p.identity_samples < 1) fail("checks.identity_samples", "must be at least 1");
    if (p.kernel_samples < 10000) fail("checks.kernel_samples", "must be at least 10000");
    if (p.k3_pairs < 2) fail("checks.k3_pairs", "must be at least 2");
    if (p.k3_resolution < 256) fail("checks.k3_resolution", "must be at least 256");
    if (!(p.k3_stability > 0.0)) fail("checks.k3_stability", "must be positive");
    if (p.velocity_samples < 16) fail("checks.velocity_samples", "must be at least 16");
    for (std::size_t i = 0; i < p.w1p_p.size(); ++i) {
      if (!(p.w1p_p[i] >= 2.0 && p.w1p_p[i] <= 16.0)) fail(at("checks.w1p_p", i), "must lie in [2, 16]");
    }
    if (p.w1p_grid < 8) fail("checks.w1p_grid", "must be at least 8");
    for (std::size_t i = 0; i < p.gronwall_d0.size(); ++i) {
      if (!(p.gronwall_d0[i] > 0.0 && p.gronwall_d0[i] <= 1e-2)) fail(at("checks.gronwall_d0", i), "must lie in (0, 1e-2]");
    }
    for (std::size_t i = 0; i < p.boundary_margins.size(); ++i) {
      if (!(p.boundary_margins[i] > 0.0 && p.boundary_margins[i] <= 0.5)) {
        fail(at("checks.boundary_margins", i), "must lie in (0, 0.5]");
      }
    }
    if (p.boundary_tracers_per_margin < 1) fail("checks.boundary_tracers_per_margin", "must be at least 1");
    check_command_needs(c);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    // Library validators already prefix their messages with the field path.
    throw ConfigError(e.what());
  }
  c.resolved_json = resolved(c).dump(2);
  return c;
}

namespace {

// Files produced by a command, written only once the command has finished.
class Outputs {
 public:
  void add(const std::string& relative, std::string content) { files_.emplace_back(relative, std::move(content)); }

  void add_report(const FitReport& r) { add("reports/" + r.name + ".json", to_json(r) + "\n"); }

  void commit(const fs::path& root) {
    std::vector<fs::path> written;
    std::vector<fs::path> made_dirs;
    try {
      for (const auto& [rel, content] : files_) {
        const fs::path target = root / rel;
        for (fs::path dir = target.parent_path(); !dir.empty() && !fs::exists(dir); dir = dir.parent_path()) {
          made_dirs.push_back(dir);
        }
        fs::create_directories(target.parent_path());
        std::ofstream out(target, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open '" + target.string() + "' for writing");
        written.push_back(target);
        out << content;
        out.close();
        if (!out) throw std::runtime_error("failed writing '" + target.string() + "'");
      }
    } catch (...) {
      std::error_code ec;
      for (const auto& f : written) fs::remove(f, ec);
      std::sort(made_dirs.begin(), made_dirs.end(),
                [](const fs::path& a, const fs::path& b) { return a.string().size() > b.string().size(); });
      for (const auto& d : made_dirs) fs::remove(d, ec);
      throw;
    }
  }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

struct Context {
  const RunConfig& cfg;
  ConformalMap map;
  std::ostream& log;
  Outputs out;
  bool all_pass = true;

  void record(const FitReport& r) {
    log << summary(r) << "\n";
    all_pass = all_pass && r.pass;
    out.add_report(r);
  }
};

DiskVorticity build_vorticity(const RunConfig& cfg, const ConformalMap& map) {
  DiskVorticity total;
  bool first = true;
  for (const auto& s : cfg.vorticity) {
    DiskVorticity part;
    if (const auto* v = std::get_if<VortexSource>(&s)) {
      part = single_vortex(v->position, v->circulation);
    } else {
      const auto& p = std::get<PatchSource>(s);
      part = from_physical_patch(map, p.patch, p.resolution, p.subdivisions);
    }
    total = first ? part : merge(total, part);
    first = false;
  }
  if (first) total.meta.source = "none";
  return total;
}

std::vector<Vec2> all_tracers(const RunConfig& cfg, const ConformalMap& map) {
  std::vector<Vec2> t = cfg.disk_tracers;
  for (Vec2 x : cfg.physical_tracers) t.push_back(Vec2(map.forward(x).value));
  return t;
}

void cmd_simulate(Context& ctx) {
  const DiskVorticity vort = build_vorticity(ctx.cfg, ctx.map);
  const std::vector<Vec2> tracers = all_tracers(ctx.cfg, ctx.map);
  const AdvectResult res = advect(ctx.map, vort, tracers, ctx.cfg.flow);

  std::ostringstream tcsv;
  write_trajectory_csv(tcsv, res.tracers);
  ctx.out.add("trajectories/tracers.csv", tcsv.str());
  if (ctx.cfg.flow.record_particles) {
    std::ostringstream pcsv;
    write_trajectory_csv(pcsv, res.particles);
    ctx.out.add("trajectories/particles.csv", pcsv.str());
  }
  std::ostringstream v0, v1;
  write_vorticity_csv(v0, vort);
  write_vorticity_csv(v1, res.final_vorticity);
  ctx.out.add("vorticity/initial.csv", v0.str());
  ctx.out.add("vorticity/final.csv", v1.str());
  if (ctx.cfg.snapshots && !res.particles.empty()) {
    const std::size_t records = res.particles.front().times.size();
    for (std::size_t j = 0; j < records; ++j) {
      std::vector<Vec2> pos;
      for (const auto& tr : res.particles) pos.push_back(tr.disk_positions[j]);
      char name[64];
      std::snprintf(name, sizeof name, "snapshots/snapshot_%06zu.json", j);
      ctx.out.add(name, snapshot_json(res.particles.front().times[j], pos, vort.w) + "\n");
    }
  }

  double margin = 1.0;
  for (const auto& tr : res.tracers) margin = std::min(margin, boundary_margin(tr));
  for (const auto& tr : res.particles) margin = std::min(margin, boundary_margin(tr));
  for (std::size_t i = 0; i < res.final_vorticity.size(); ++i) {
    margin = std::min(margin, 1.0 - norm(res.final_vorticity.position(i)));
  }
  const double drift = std::abs(total_circulation(res.final_vorticity) - total_circulation(vort));
  FitReport r;
  r.name = "simulate";
  r.n_samples = vort.size() + tracers.size();
  r.max_ratio = drift;
  r.threshold = 0.0;
  r.pass = drift == 0.0 && margin > 0.0;
  r.details = {{"particles", static_cast<double>(vort.size())},
               {"tracers", static_cast<double>(tracers.size())},
               {"accepted_steps", static_cast<double>(res.accepted_steps)},
               {"rejected_steps", static_cast<double>(res.rejected_steps)},
               {"circulation", total_circulation(vort)},
               {"circulation_drift", drift},
               {"min_boundary_margin", margin}};
  ctx.record(r);
}

void cmd_identities(Context& ctx) {
  const std::size_t n = ctx.cfg.checks.identity_samples;
  ctx.record(check_tangency(n, ctx.cfg.seed));
  ctx.record(check_algebraic_identity(n, ctx.cfg.seed));
  ctx.record(check_image_inequality(n, ctx.cfg.seed));
}

void cmd_verify_kernel(Context& ctx) {
  for (const auto& r : check_kernel_bounds(ctx.cfg.checks.kernel_samples, ctx.cfg.seed)) ctx.record(r);
}

void cmd_verify_map(Context& ctx) {
  for (std::size_t k = 0; k < ctx.map.domain().corners.size(); ++k) {
    for (const auto& r : check_map_exponents(ctx.map, k)) ctx.record(r);
  }
}

void cmd_verify_velocity(Context& ctx) {
  const DiskVorticity vort = build_vorticity(ctx.cfg, ctx.map);
  for (const auto& r : check_velocity_bounds(ctx.map, vort, ctx.cfg.checks.velocity_samples, ctx.cfg.seed)) {
    ctx.record(r);
  }
}

void cmd_verify_k3(Context& ctx) {
  const CheckParams& p = ctx.cfg.checks;
  auto coarse = check_k3_integrals(p.k3_pairs, p.k3_resolution, ctx.cfg.seed);
  auto fine = check_k3_integrals(p.k3_pairs, 2 * p.k3_resolution, ctx.cfg.seed);
  for (std::size_t s = 0; s < 2; ++s) {
    FitReport refined = fine[s];
    refined.name += "_refined";
    ctx.record(coarse[s]);
    ctx.record(refined);
    ctx.record(compare_constants(coarse[s].name + "_stability", coarse[s], fine[s], p.k3_stability));
  }
}

void cmd_w1p(Context& ctx) {
  const DiskVorticity vort = build_vorticity(ctx.cfg, ctx.map);
  ctx.record(check_w1p_growth(ctx.map, vort, ctx.cfg.checks.w1p_p, ctx.cfg.checks.w1p_grid));
}

void cmd_gronwall(Context& ctx) {
  const DiskVorticity vort = build_vorticity(ctx.cfg, ctx.map);
  const GronwallResult g = gronwall_experiment(ctx.map, vort, ctx.cfg.checks.gronwall_d0, ctx.cfg.flow, ctx.cfg.seed);
  std::ostringstream csv;
  csv << "t,d0,f\n";
  for (std::size_t k = 0; k < g.d0.size(); ++k) {
    for (std::size_t j = 0; j < g.times.size(); ++j) {
      csv << format_double(g.times[j]) << ',' << format_double(g.d0[k]) << ',' << format_double(g.f[k][j]) << '\n';
    }
  }
  ctx.out.add("trajectories/gronwall.csv", csv.str());
  ctx.record(g.report);
}

void cmd_boundary(Context& ctx) {
  const DiskVorticity vort = build_vorticity(ctx.cfg, ctx.map);
  const BoundaryResult b = boundary_attainment_experiment(ctx.map, vort, ctx.cfg.checks.boundary_margins,
                                                          ctx.cfg.flow, ctx.cfg.checks.boundary_tracers_per_margin);
  std::ostringstream csv;
  write_trajectory_csv(csv, b.tracers);
  ctx.out.add("trajectories/boundary_tracers.csv", csv.str());
  ctx.record(b.report);
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& log) {
  Context ctx{cfg, ConformalMap(cfg.domain), log, {}, true};
  switch (cfg.command) {
    case Command::simulate: cmd_simulate(ctx); break;
    case Command::verify_kernel: cmd_verify_kernel(ctx); break;
    case Command::verify_map: cmd_verify_map(ctx); break;
    case Command::verify_velocity: cmd_verify_velocity(ctx); break;
    case Command::verify_k3: cmd_verify_k3(ctx); break;
    case Command::gronwall: cmd_gronwall(ctx); break;
    case Command::boundary: cmd_boundary(ctx); break;
    case Command::w1p: cmd_w1p(ctx); break;
    case Command::all_checks:
      cmd_identities(ctx);
      cmd_verify_kernel(ctx);
      if (!cfg.domain.corners.empty()) cmd_verify_map(ctx);
      if (has_patch(cfg)) cmd_verify_velocity(ctx);
      cmd_verify_k3(ctx);
      break;
  }
  ojson manifest;
  manifest["program"] = "corner-euler";
  manifest["version"] = CORNER_EULER_VERSION;
  manifest["command"] = to_string(cfg.command);
  manifest["workers"] = worker_count();
  manifest["simd_backend"] = std::string(simd::to_string(simd::active_backend()));
  manifest["all_pass"] = ctx.all_pass;
  manifest["config"] = ojson::parse(cfg.resolved_json);
  ctx.out.add("manifest.json", manifest.dump(2) + "\n");
  ctx.out.commit(cfg.output_dir);
  return ctx.all_pass ? 0 : 1;
}

int main(int argc, char** argv) {
  CLI::App app{"Euler flow in corner domains through the Riemann map to the unit disk"};
  app.set_version_flag("--version", std::string(CORNER_EULER_VERSION));
  std::string config_path;
  std::string command;
  std::size_t workers = 1;
  app.add_option("config", config_path, "JSON run configuration")->required();
  app.add_option("--command", command, "Override the config's command");
  app.add_option("--workers", workers, "Worker threads for data-parallel loops")->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read config file '" << config_path << "'\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  RunConfig cfg;
  try {
    cfg = parse_config(buf.str(), command.empty() ? std::nullopt : std::optional<std::string>(command));
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  try {
    set_worker_count(workers);
    const int code = run(cfg, std::cout);
    std::cout << (code == 0 ? "all checks passed" : "one or more checks failed") << " -> " << cfg.output_dir << "\n";
    return code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace corner_euler::cli
