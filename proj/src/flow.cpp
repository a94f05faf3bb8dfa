#include "corner_euler/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "corner_euler/biot_savart.hpp"

namespace corner_euler {

namespace {

constexpr double kMinStep = 1e-12;

// Particles first, then tracers.
struct State {
  std::vector<double> x;
  std::vector<double> y;
};

struct OutsidePoint {
  bool any = false;
  std::size_t index = 0;
};

OutsidePoint first_outside(const State& s) {
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    if (!(s.x[i] * s.x[i] + s.y[i] * s.y[i] < 1.0)) return {true, i};
  }
  return {};
}

class Integrator {
 public:
  Integrator(const ConformalMap& map, const DiskVorticity& vort, std::size_t n_particles)
      : map_(map), weights_(vort.w), sigma_(vort.meta.sigma), np_(n_particles) {}

  void velocity(const State& s, State& u) const {
    const std::size_t n = s.x.size();
    u.x.resize(n);
    u.y.resize(n);
    const simd::Sources src{std::span<const double>(s.x).first(np_),
                            std::span<const double>(s.y).first(np_), weights_};
    velocity_disk(map_, src, sigma_, s.x, s.y, u.x, u.y);
  }

  // One classical RK4 step. Returns the first point whose stage or final
  // position leaves the open disk, if any.
  OutsidePoint rk4(const State& s, double h, State& out) {
    const std::size_t n = s.x.size();
    velocity(s, k1_);
    stage(s, k1_, 0.5 * h, tmp_);
    if (auto o = first_outside(tmp_); o.any) return o;
    velocity(tmp_, k2_);
    stage(s, k2_, 0.5 * h, tmp_);
    if (auto o = first_outside(tmp_); o.any) return o;
    velocity(tmp_, k3_);
    stage(s, k3_, h, tmp_);
    if (auto o = first_outside(tmp_); o.any) return o;
    velocity(tmp_, k4_);
    out.x.resize(n);
    out.y.resize(n);
    const double c = h / 6.0;
    for (std::size_t i = 0; i < n; ++i) {
      out.x[i] = s.x[i] + c * (k1_.x[i] + 2.0 * k2_.x[i] + 2.0 * k3_.x[i] + k4_.x[i]);
      out.y[i] = s.y[i] + c * (k1_.y[i] + 2.0 * k2_.y[i] + 2.0 * k3_.y[i] + k4_.y[i]);
    }
    return first_outside(out);
  }

  std::size_t particle_count() const { return np_; }

 private:
  static void stage(const State& s, const State& k, double h, State& out) {
    const std::size_t n = s.x.size();
    out.x.resize(n);
    out.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      out.x[i] = s.x[i] + h * k.x[i];
      out.y[i] = s.y[i] + h * k.y[i];
    }
  }

  const ConformalMap& map_;
  std::span<const double> weights_;
  double sigma_;
  std::size_t np_;
  State k1_, k2_, k3_, k4_, tmp_;
};

[[noreturn]] void underflow(const Integrator& in, OutsidePoint o, double t, double h) {
  const bool particle = o.index < in.particle_count();
  const std::size_t idx = particle ? o.index : o.index - in.particle_count();
  std::ostringstream msg;
  msg << "advect: step-size underflow (dt=" << h << " < " << kMinStep << ") at t=" << t << ", "
      << (particle ? "particle " : "tracer ") << idx << " keeps leaving the disk";
  throw StepUnderflow(msg.str(), particle ? PointKind::particle : PointKind::tracer, idx);
}

// Advances `s` by h with RK4, splitting into halves whenever a point would
// leave the disk.
void advance_fixed(Integrator& in, State& s, double t, double h, std::size_t& rejected) {
  State next;
  const OutsidePoint o = in.rk4(s, h, next);
  if (!o.any) {
    s = std::move(next);
    return;
  }
  ++rejected;
  const double half = 0.5 * h;
  if (half < kMinStep) underflow(in, o, t, half);
  advance_fixed(in, s, t, half, rejected);
  advance_fixed(in, s, t + half, half, rejected);
}

double max_abs_diff(const State& a, const State& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.x.size(); ++i) {
    m = std::max(m, std::max(std::abs(a.x[i] - b.x[i]), std::abs(a.y[i] - b.y[i])));
  }
  return m;
}

class Recorder {
 public:
  Recorder(const ConformalMap& map, std::size_t np, std::size_t nt, bool particles)
      : map_(map), np_(np), record_particles_(particles) {
    tracers_.resize(nt);
    for (std::size_t j = 0; j < nt; ++j) tracers_[j] = {j, PointKind::tracer, {}, {}, {}};
    if (record_particles_) {
      particles_.resize(np);
      for (std::size_t i = 0; i < np; ++i) particles_[i] = {i, PointKind::particle, {}, {}, {}};
    }
  }

  void record(double t, const State& s) {
    for (std::size_t j = 0; j < tracers_.size(); ++j) push(tracers_[j], t, {s.x[np_ + j], s.y[np_ + j]});
    if (!record_particles_) return;
    for (std::size_t i = 0; i < np_; ++i) push(particles_[i], t, {s.x[i], s.y[i]});
  }

  std::vector<Trajectory> take_tracers() { return std::move(tracers_); }
  std::vector<Trajectory> take_particles() { return std::move(particles_); }

 private:
  void push(Trajectory& tr, double t, Vec2 y) {
    tr.times.push_back(t);
    tr.disk_positions.push_back(y);
    tr.physical_positions.push_back(map_.inverse(y));
  }

  const ConformalMap& map_;
  std::size_t np_;
  bool record_particles_;
  std::vector<Trajectory> tracers_;
  std::vector<Trajectory> particles_;
};

}  // namespace

std::string to_string(Stepper s) { return s == Stepper::rk4 ? "rk4" : "adaptive"; }

Stepper stepper_from_string(const std::string& name) {
  if (name == "rk4") return Stepper::rk4;
  if (name == "adaptive") return Stepper::adaptive;
  throw std::invalid_argument("flow.stepper: unknown stepper '" + name + "'");
}

void validate(const FlowConfig& cfg) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw std::invalid_argument("flow.dt: must be positive");
  if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end)) {
    throw std::invalid_argument("flow.t_end: must be positive");
  }
  if (!(cfg.tolerance > 0.0)) throw std::invalid_argument("flow.tolerance: must be positive");
  if (cfg.record_every < 1) throw std::invalid_argument("flow.record_every: must be at least 1");
}

AdvectResult advect(const ConformalMap& map, const DiskVorticity& vort,
                    std::span<const Vec2> tracers, const FlowConfig& cfg) {
  validate(cfg);
  const std::size_t np = vort.size();
  const std::size_t nt = tracers.size();

  State s;
  s.x.reserve(np + nt);
  s.y.reserve(np + nt);
  s.x.assign(vort.x.begin(), vort.x.end());
  s.y.assign(vort.y.begin(), vort.y.end());
  for (const Vec2& p : tracers) {
    s.x.push_back(p.x);
    s.y.push_back(p.y);
  }
  if (const auto o = first_outside(s); o.any) {
    throw std::invalid_argument(std::string("advect: initial ") +
                                (o.index < np ? "particle " : "tracer ") +
                                std::to_string(o.index < np ? o.index : o.index - np) +
                                " is not strictly inside the disk");
  }

  Integrator in(map, vort, np);
  Recorder rec(map, np, nt, cfg.record_particles);
  AdvectResult result;
  rec.record(0.0, s);

  if (cfg.stepper == Stepper::rk4) {
    // Base grid t_k = k dt; the last step is shortened to land on t_end.
    const auto steps = static_cast<std::size_t>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
    for (std::size_t k = 1; k <= steps; ++k) {
      const double t0 = static_cast<double>(k - 1) * cfg.dt;
      const double t1 = (k == steps) ? cfg.t_end : static_cast<double>(k) * cfg.dt;
      advance_fixed(in, s, t0, t1 - t0, result.rejected_steps);
      ++result.accepted_steps;
      if (k % cfg.record_every == 0 || k == steps) rec.record(t1, s);
    }
  } else {
    double t = 0.0;
    double h = std::min(cfg.dt, cfg.t_end);
    std::size_t accepted = 0;
    State full, half, two_half;
    while (t < cfg.t_end) {
      h = std::min(h, cfg.t_end - t);
      OutsidePoint o = in.rk4(s, h, full);
      if (!o.any) o = in.rk4(s, 0.5 * h, half);
      if (!o.any) o = in.rk4(half, 0.5 * h, two_half);
      if (o.any) {
        ++result.rejected_steps;
        h *= 0.5;
        if (h < kMinStep) underflow(in, o, t, h);
        continue;
      }
      const double err = max_abs_diff(full, two_half);
      const double factor =
          err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(cfg.tolerance / err, 0.2), 0.2, 5.0);
      if (err > cfg.tolerance) {
        ++result.rejected_steps;
        h *= factor;
        if (h < kMinStep) underflow(in, {true, 0}, t, h);
        continue;
      }
      s = std::move(two_half);
      t = (cfg.t_end - t - h <= 1e-14 * cfg.t_end) ? cfg.t_end : t + h;
      ++accepted;
      if (accepted % cfg.record_every == 0 || t >= cfg.t_end) rec.record(t, s);
      h *= factor;
    }
    result.accepted_steps = accepted;
  }

  result.tracers = rec.take_tracers();
  result.particles = rec.take_particles();
  result.final_vorticity = vort;
  std::copy(s.x.begin(), s.x.begin() + static_cast<std::ptrdiff_t>(np), result.final_vorticity.x.begin());
  std::copy(s.y.begin(), s.y.begin() + static_cast<std::ptrdiff_t>(np), result.final_vorticity.y.begin());
  result.final_tracers.resize(nt);
  for (std::size_t j = 0; j < nt; ++j) result.final_tracers[j] = {s.x[np + j], s.y[np + j]};
  return result;
}

double boundary_margin(const Trajectory& traj) {
  if (traj.disk_positions.empty()) throw std::invalid_argument("boundary_margin: empty trajectory");
  double m = 1.0;
  for (const Vec2& y : traj.disk_positions) m = std::min(m, 1.0 - norm(y));
  return m;
}

double loglip_modulus(double r) {
  if (r < 0.0) throw std::invalid_argument("loglip_modulus: r must be nonnegative");
  if (r == 0.0) return 0.0;
  return r * (1.0 + std::abs(std::log(r)));
}

DiskRegion disk_region_circle(Vec2 centre, double radius, std::size_t points) {
  DiskRegion r;
  r.rings.emplace_back();
  auto& ring = r.rings.back();
  ring.reserve(points);
  for (std::size_t k = 0; k < points; ++k) {
    ring.push_back(centre + polar(radius, 2.0 * std::numbers::pi * static_cast<double>(k) /
                                              static_cast<double>(points)));
  }
  return r;
}

DiskRegion disk_region_annulus(Vec2 centre, double inner, double outer, std::size_t points) {
  DiskRegion r = disk_region_circle(centre, outer, points);
  r.rings.push_back(disk_region_circle(centre, inner, points).rings.front());
  return r;
}

bool region_contains(const DiskRegion& region, Vec2 z) {
  bool inside = false;
  for (const auto& ring : region.rings) {
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Vec2 a = ring[i];
      const Vec2 b = ring[j];
      if ((a.y > z.y) != (b.y > z.y)) {
        const double xc = a.x + (z.y - a.y) * (b.x - a.x) / (b.y - a.y);
        if (z.x < xc) inside = !inside;
      }
    }
  }
  return inside;
}

MeasureCheck measure_check(const ConformalMap& map, const DiskVorticity& vort,
                           const DiskRegion& region, std::size_t n_mc, const FlowConfig& cfg,
                           std::uint64_t seed) {
  if (n_mc < 1000) throw std::invalid_argument("measure_check: n_mc must be at least 1000");
  std::vector<Vec2> boundary;
  std::vector<std::size_t> ring_sizes;
  for (const auto& ring : region.rings) {
    ring_sizes.push_back(ring.size());
    boundary.insert(boundary.end(), ring.begin(), ring.end());
  }
  for (const Vec2& p : boundary) {
    if (!(norm2(p) < 1.0)) throw std::invalid_argument("measure_check: region leaves the disk");
  }

  FlowConfig run = cfg;
  run.record_particles = false;
  run.record_every = std::numeric_limits<std::size_t>::max() / 2;
  const AdvectResult res = advect(map, vort, boundary, run);

  DiskRegion moved;
  std::size_t offset = 0;
  for (std::size_t len : ring_sizes) {
    moved.rings.emplace_back(res.final_tracers.begin() + static_cast<std::ptrdiff_t>(offset),
                             res.final_tracers.begin() + static_cast<std::ptrdiff_t>(offset + len));
    offset += len;
  }

  const auto samples = sample_interior(map.domain(), n_mc, seed);
  std::size_t before = 0, after = 0;
  for (const Vec2& x : samples) {
    const Vec2 z(map.forward(x).value);
    if (region_contains(region, z)) ++before;
    if (region_contains(moved, z)) ++after;
  }
  const double cell = area(map.domain()) / static_cast<double>(n_mc);
  MeasureCheck out;
  out.n_mc = n_mc;
  out.area_initial = cell * static_cast<double>(before);
  out.area_final = cell * static_cast<double>(after);
  out.relative_drift = before == 0 ? 0.0
                                   : std::abs(static_cast<double>(after) - static_cast<double>(before)) /
                                         static_cast<double>(before);
  return out;
}

}  // namespace corner_euler
