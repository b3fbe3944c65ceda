#include "fanetkm/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fanetkm/errors.hpp"

namespace fanetkm::mobility {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

// Mirrors one coordinate back into [0, len]. Returns true if an odd number of
// reflections happened, i.e. the heading along this axis must flip.
bool reflect(double& c, double len) {
  bool flipped = false;
  for (int guard = 0; guard < 64 && (c < 0.0 || c > len); ++guard) {
    c = c < 0.0 ? -c : 2.0 * len - c;
    flipped = !flipped;
  }
  c = std::clamp(c, 0.0, len);
  return flipped;
}

}  // namespace

bool BoundingBox::contains(Vec3 p) const {
  return p.x >= 0.0 && p.x <= x_len && p.y >= 0.0 && p.y <= y_len && p.z >= 0.0 &&
         p.z <= z_len;
}

void BoundingBox::validate() const {
  require(std::isfinite(x_len) && x_len > 0.0, "box.x_len: must be > 0");
  require(std::isfinite(y_len) && y_len > 0.0, "box.y_len: must be > 0");
  require(std::isfinite(z_len) && z_len >= 0.0, "box.z_len: must be >= 0");
}

void MobilityConfig::validate() const {
  require(std::isfinite(v_min) && v_min >= 0.0, "mobility.v_min: must be >= 0");
  require(std::isfinite(v_max) && v_min <= v_max,
          "mobility.v_min: must be <= mobility.v_max (got " + std::to_string(v_min) + " > " +
              std::to_string(v_max) + ")");
  require(std::isfinite(pause_s) && pause_s >= 0.0, "mobility.pause_s: must be >= 0");
  require(gm_alpha >= 0.0 && gm_alpha <= 1.0, "mobility.gm_alpha: must lie in [0, 1]");
  require(std::isfinite(gm_pitch_max) && gm_pitch_max >= 0.0,
          "mobility.gm_pitch_max: must be >= 0");
  require(std::isfinite(step_dt) && step_dt > 0.0, "mobility.step_dt: must be > 0");
  if (gm_mean_speed) {
    require(std::isfinite(*gm_mean_speed) && *gm_mean_speed >= 0.0,
            "mobility.gm_mean_speed: must be >= 0");
  }
}

Vec3 uniform_point(const BoundingBox& box, RandomStream& rng) {
  Vec3 p;
  p.x = rng.uniform(0.0, box.x_len);
  p.y = rng.uniform(0.0, box.y_len);
  p.z = box.is_2d() ? 0.0 : rng.uniform(0.0, box.z_len);
  return p;
}

MobilityState init_state(const BoundingBox& box, const MobilityConfig& cfg, RandomStream& rng) {
  MobilityState s;
  s.pos = uniform_point(box, rng);
  if (cfg.model == MobilityModel::RandomWaypoint) {
    s.waypoint = uniform_point(box, rng);
    s.leg_speed = rng.uniform(cfg.v_min, cfg.v_max);
  } else {
    s.gm_speed = std::clamp(cfg.mean_speed(), cfg.v_min, cfg.v_max);
    s.gm_direction = rng.uniform(0.0, 2.0 * std::numbers::pi);
    s.gm_mean_direction = s.gm_direction;
    s.gm_pitch = box.is_2d() ? 0.0 : rng.uniform(0.0, cfg.gm_pitch_max);
  }
  return s;
}

std::vector<MobilityState> init_positions(std::size_t n, const BoundingBox& box,
                                          const MobilityConfig& cfg, RandomStream& rng) {
  if (n == 0) throw EmptyScenarioError("nodes: scenario must contain at least one node");
  std::vector<MobilityState> states;
  states.reserve(n);
  for (std::size_t i = 0; i < n; ++i) states.push_back(init_state(box, cfg, rng));
  return states;
}

MobilityState rwp_step(const MobilityState& state, const MobilityConfig& cfg,
                       const BoundingBox& box, RandomStream& rng) {
  MobilityState next = state;
  if (next.pause_remaining > 0.0) {
    next.pause_remaining = std::max(0.0, next.pause_remaining - cfg.step_dt);
    return next;
  }
  if (!next.waypoint) {
    next.waypoint = uniform_point(box, rng);
    next.leg_speed = rng.uniform(cfg.v_min, cfg.v_max);
  }
  const Vec3 to = *next.waypoint - next.pos;
  const double remaining = to.norm();
  const double travel = next.leg_speed * cfg.step_dt;
  if (travel >= remaining) {
    next.pos = *next.waypoint;
    next.pause_remaining = cfg.pause_s;
    next.waypoint = uniform_point(box, rng);
    next.leg_speed = rng.uniform(cfg.v_min, cfg.v_max);
  } else {
    next.pos = next.pos + to * (travel / remaining);
  }
  return next;
}

MobilityState gm_step(const MobilityState& state, const MobilityConfig& cfg,
                      const BoundingBox& box, const GaussMarkovNoise& noise) {
  const double a = cfg.gm_alpha;
  const double b = std::sqrt(std::max(0.0, 1.0 - a * a));
  MobilityState next = state;

  next.gm_speed = a * state.gm_speed + (1.0 - a) * cfg.mean_speed() + b * noise.speed;
  next.gm_speed = std::clamp(next.gm_speed, cfg.v_min, cfg.v_max);
  next.gm_direction =
      a * state.gm_direction + (1.0 - a) * state.gm_mean_direction + b * noise.direction;

  if (box.is_2d()) {
    next.gm_pitch = 0.0;
  } else {
    const double mean_pitch = state.gm_pitch_sign * 0.5 * cfg.gm_pitch_max;
    double p = a * state.gm_pitch + (1.0 - a) * mean_pitch + b * noise.pitch;
    next.gm_pitch = state.gm_pitch_sign > 0.0 ? std::clamp(p, 0.0, cfg.gm_pitch_max)
                                              : std::clamp(p, -cfg.gm_pitch_max, 0.0);
  }

  const double s = next.gm_speed * cfg.step_dt;
  const double cp = std::cos(next.gm_pitch);
  next.pos.x += s * std::cos(next.gm_direction) * cp;
  next.pos.y += s * std::sin(next.gm_direction) * cp;
  next.pos.z += s * std::sin(next.gm_pitch);

  if (reflect(next.pos.x, box.x_len)) {
    next.gm_direction = std::numbers::pi - next.gm_direction;
    next.gm_mean_direction = std::numbers::pi - next.gm_mean_direction;
  }
  if (reflect(next.pos.y, box.y_len)) {
    next.gm_direction = -next.gm_direction;
    next.gm_mean_direction = -next.gm_mean_direction;
  }
  if (box.is_2d()) {
    next.pos.z = 0.0;
  } else if (reflect(next.pos.z, box.z_len)) {
    next.gm_pitch = -next.gm_pitch;
    next.gm_pitch_sign = -next.gm_pitch_sign;
  }
  return next;
}

MobilityState gm_step(const MobilityState& state, const MobilityConfig& cfg,
                      const BoundingBox& box, RandomStream& rng) {
  GaussMarkovNoise noise;
  noise.speed = rng.normal();
  noise.direction = rng.normal();
  noise.pitch = rng.normal();
  return gm_step(state, cfg, box, noise);
}

MobilityState step(const MobilityState& state, const MobilityConfig& cfg, const BoundingBox& box,
                   RandomStream& rng) {
  return cfg.model == MobilityModel::RandomWaypoint ? rwp_step(state, cfg, box, rng)
                                                    : gm_step(state, cfg, box, rng);
}

}  // namespace fanetkm::mobility
