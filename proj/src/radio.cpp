#include "fanetkm/radio.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "fanetkm/errors.hpp"
#include "fanetkm/simd/kernels.hpp"

namespace fanetkm::radio {

namespace {

double total_gain_db(const RadioConfig& cfg) { return cfg.tx_gain_db + cfg.rx_gain_db; }

double free_space_dbm(const RadioConfig& cfg, double d) {
  const double lambda = cfg.wavelength();
  return cfg.tx_power_dbm + total_gain_db(cfg) +
         20.0 * std::log10(lambda / (4.0 * std::numbers::pi * d));
}

double two_ray_far_dbm(const RadioConfig& cfg, double d) {
  return cfg.tx_power_dbm + total_gain_db(cfg) +
         20.0 * std::log10(cfg.ant_height_tx_m * cfg.ant_height_rx_m) - 40.0 * std::log10(d);
}

}  // namespace

void RadioConfig::validate() const {
  if (!(std::isfinite(freq_hz) && freq_hz > 0.0)) throw ConfigError("radio.freq_hz: must be > 0");
  if (!std::isfinite(tx_power_dbm)) throw ConfigError("radio.tx_power_dbm: must be finite");
  if (!std::isfinite(tx_gain_db) || !std::isfinite(rx_gain_db)) {
    throw ConfigError("radio.tx_gain_db/rx_gain_db: must be finite");
  }
  if (model == PropagationModel::TwoRay) {
    if (!(ant_height_tx_m > 0.0)) throw ConfigError("radio.ant_height_tx_m: must be > 0");
    if (!(ant_height_rx_m > 0.0)) throw ConfigError("radio.ant_height_rx_m: must be > 0");
  }
  if (explicit_range_m && !(std::isfinite(*explicit_range_m) && *explicit_range_m > 0.0)) {
    throw ConfigError("radio.explicit_range_m: must be > 0");
  }
}

double crossover_distance(const RadioConfig& cfg) {
  return 4.0 * std::numbers::pi * cfg.ant_height_tx_m * cfg.ant_height_rx_m / cfg.wavelength();
}

double received_power(const RadioConfig& cfg, double d) {
  if (!(d > 0.0)) throw DomainError("received_power: distance must be > 0");
  if (cfg.model == PropagationModel::TwoRay && d >= crossover_distance(cfg)) {
    return two_ray_far_dbm(cfg, d);
  }
  return free_space_dbm(cfg, d);
}

double comm_range(const RadioConfig& cfg) {
  if (cfg.explicit_range_m) return *cfg.explicit_range_m;

  const double budget_db = cfg.tx_power_dbm + total_gain_db(cfg) - cfg.rx_threshold_dbm;
  if (!std::isfinite(budget_db)) {
    throw NoCoverageError("comm_range: receiver threshold yields no finite coverage");
  }
  const double free_space =
      cfg.wavelength() / (4.0 * std::numbers::pi) * std::pow(10.0, budget_db / 20.0);
  double r = free_space;
  if (cfg.model == PropagationModel::TwoRay && free_space >= crossover_distance(cfg)) {
    r = std::sqrt(cfg.ant_height_tx_m * cfg.ant_height_rx_m) * std::pow(10.0, budget_db / 40.0);
  }
  if (!(std::isfinite(r) && r > 0.0)) {
    throw NoCoverageError("comm_range: receiver threshold is unreachable");
  }
  return r;
}

std::vector<NodePair> contact_pairs(std::span<const Vec3> positions, double r) {
  const std::size_t n = positions.size();
  std::vector<double> xs(n), ys(n), zs(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = positions[i].x;
    ys[i] = positions[i].y;
    zs[i] = positions[i].z;
  }
  const auto& k = simd::active_kernels();
  const double r2 = r * r;
  std::vector<std::uint64_t> row((n + 63) / 64);
  std::vector<NodePair> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    k.threshold_row(xs.data(), ys.data(), zs.data(), n, xs[i], ys[i], zs[i], r2, row.data());
    for (std::size_t w = (i + 1) / 64; w < row.size(); ++w) {
      std::uint64_t bits = row[w];
      while (bits) {
        const std::size_t j = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
        bits &= bits - 1;
        if (j > i) pairs.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
      }
    }
  }
  return pairs;
}

}  // namespace fanetkm::radio
