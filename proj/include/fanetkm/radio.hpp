#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fanetkm/types.hpp"
#include "fanetkm/vec3.hpp"

namespace fanetkm::radio {

inline constexpr double kSpeedOfLight = 299'792'458.0;

enum class PropagationModel { FreeSpace, TwoRay };

struct RadioConfig {
  double tx_power_dbm = 7.5;
  double tx_gain_db = 0.0;
  double rx_gain_db = 0.0;
  double freq_hz = 2.4e9;
  /// Calibrated so 7.5 dBm at 2.4 GHz reaches ~100 m in free space.
  double rx_threshold_dbm = -72.55;
  double ant_height_tx_m = 1.5;
  double ant_height_rx_m = 1.5;
  PropagationModel model = PropagationModel::FreeSpace;
  /// Overrides the propagation model when set.
  std::optional<double> explicit_range_m;

  double wavelength() const { return kSpeedOfLight / freq_hz; }
  void validate() const;

  friend bool operator==(const RadioConfig&, const RadioConfig&) = default;
};

/// Two-ray crossover distance 4*pi*ht*hr / lambda. Below it free space applies.
double crossover_distance(const RadioConfig& cfg);

/// Received power in dBm at distance d > 0. Throws DomainError otherwise.
double received_power(const RadioConfig& cfg, double d);

/// Communication range r: explicit override, or the closed-form inverse of
/// received_power at the receiver threshold.
double comm_range(const RadioConfig& cfg);

/// All pairs {i, j}, i < j, with Euclidean distance <= r, ascending.
std::vector<NodePair> contact_pairs(std::span<const Vec3> positions, double r);

}  // namespace fanetkm::radio
