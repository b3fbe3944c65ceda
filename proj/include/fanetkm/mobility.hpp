#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "fanetkm/random.hpp"
#include "fanetkm/vec3.hpp"

namespace fanetkm::mobility {

/// Axis-aligned simulation volume anchored at the origin. z_len == 0 selects
/// planar (MANET/VANET) operation.
struct BoundingBox {
  double x_len = 1000.0;
  double y_len = 1000.0;
  double z_len = 100.0;

  bool is_2d() const { return z_len == 0.0; }
  bool contains(Vec3 p) const;
  void validate() const;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

enum class MobilityModel { RandomWaypoint, GaussMarkov };

struct MobilityConfig {
  MobilityModel model = MobilityModel::GaussMarkov;
  double v_min = 0.0;
  double v_max = 50.0;
  double pause_s = 0.0;
  double gm_alpha = 0.85;
  /// Unset means the midpoint of [v_min, v_max].
  std::optional<double> gm_mean_speed;
  double gm_pitch_max = 0.05;
  double step_dt = 1.0;

  double mean_speed() const { return gm_mean_speed.value_or(0.5 * (v_min + v_max)); }
  void validate() const;

  friend bool operator==(const MobilityConfig&, const MobilityConfig&) = default;
};

struct MobilityState {
  Vec3 pos;

  // random waypoint
  std::optional<Vec3> waypoint;
  double leg_speed = 0.0;
  double pause_remaining = 0.0;

  // Gauss-Markov
  double gm_speed = 0.0;
  double gm_direction = 0.0;
  double gm_pitch = 0.0;
  double gm_mean_direction = 0.0;
  /// +1 while the node climbs toward the ceiling, -1 after a vertical
  /// reflection. Pitch is confined to sign * [0, gm_pitch_max].
  double gm_pitch_sign = 1.0;

  friend bool operator==(const MobilityState&, const MobilityState&) = default;
};

/// Standard normal innovations for one Gauss-Markov step.
struct GaussMarkovNoise {
  double speed = 0.0;
  double direction = 0.0;
  double pitch = 0.0;
};

Vec3 uniform_point(const BoundingBox& box, RandomStream& rng);

/// One node's initial state: uniform position plus model-specific memory.
MobilityState init_state(const BoundingBox& box, const MobilityConfig& cfg, RandomStream& rng);

/// n initial states drawn from a single stream. Throws EmptyScenarioError for n == 0.
std::vector<MobilityState> init_positions(std::size_t n, const BoundingBox& box,
                                          const MobilityConfig& cfg, RandomStream& rng);

MobilityState rwp_step(const MobilityState& state, const MobilityConfig& cfg,
                       const BoundingBox& box, RandomStream& rng);

MobilityState gm_step(const MobilityState& state, const MobilityConfig& cfg,
                      const BoundingBox& box, RandomStream& rng);

/// Deterministic core of gm_step with the innovations supplied by the caller.
MobilityState gm_step(const MobilityState& state, const MobilityConfig& cfg,
                      const BoundingBox& box, const GaussMarkovNoise& noise);

/// Dispatches on cfg.model.
MobilityState step(const MobilityState& state, const MobilityConfig& cfg, const BoundingBox& box,
                   RandomStream& rng);

}  // namespace fanetkm::mobility
