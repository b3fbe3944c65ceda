#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fanetkm/ecc.hpp"
#include "fanetkm/keying.hpp"
#include "fanetkm/metrics.hpp"
#include "fanetkm/mobility.hpp"
#include "fanetkm/radio.hpp"

namespace fanetkm::engine {

enum class NetworkKind { Fanet, Manet };

std::string_view to_string(NetworkKind kind);
std::string_view to_string(mobility::MobilityModel model);
std::string_view to_string(keying::StrategyKind kind);

/// Slab height used for the 3D density of planar scenarios, so both density
/// axes can be reported for every run.
inline constexpr double kReferenceElevationM = 100.0;

struct ScenarioConfig {
  NetworkKind network_kind = NetworkKind::Fanet;
  std::size_t n = 100;
  mobility::BoundingBox box;
  mobility::MobilityConfig mobility;
  radio::RadioConfig radio;
  Seconds key_ttl = kNever;
  keying::Strategy strategy = keying::Strategy::freshest();
  /// nullopt means unlimited storage.
  std::optional<std::size_t> capacity;
  Seconds duration = 1000.0;
  Seconds snapshot_dt = 1.0;
  std::size_t metrics_stride = 1;
  std::vector<std::uint64_t> seeds;
  ecc::CurveParams curve = ecc::CurveParams::demo();

  /// Throws ConfigError naming the offending field.
  void validate() const;
  std::size_t snapshot_count() const;
  /// Stable hash of every simulation-relevant field except the seeds.
  std::uint64_t fingerprint() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Defaults for one network kind: 100 nodes, 1000 s at 1 s snapshots, 20
/// seeds, unlimited storage and non-expiring keys. FANET: 1000x1000x100 m,
/// free space, speeds [0, 50] m/s. MANET: 1000x1000 m plane, two-ray,
/// speeds [0, 20] m/s.
ScenarioConfig default_scenario(NetworkKind kind);

/// Storage-limited defaults: capacity 10, hybrid split 5/5, 100 s key TTL.
ScenarioConfig with_limited_storage(ScenarioConfig cfg, keying::StrategyKind kind);

/// Area lengths 500, 600, ..., 1500 m.
std::vector<double> default_area_lengths();

struct SweepSpec {
  ScenarioConfig base;
  std::vector<double> area_lengths;
  NetworkKind network_kind = NetworkKind::Fanet;

  void validate() const;
  /// base with an L x L footprint.
  ScenarioConfig scenario_for(double area_length) const;
};

struct RunOptions {
  /// Keep per-snapshot neighbor counts in the result (they are always
  /// folded into the density moments).
  bool keep_neighbor_counts = true;
};

struct RunResult {
  std::uint64_t seed = 0;
  std::uint64_t config_fingerprint = 0;
  double comm_range_m = 0.0;
  double comm_density_2d = 0.0;
  double comm_density_3d = 0.0;
  std::optional<Seconds> ttfc;
  double visit_all_fraction = 0.0;
  std::optional<Seconds> avg_time_to_visit_all;
  /// Snapshots at the metrics stride.
  std::vector<metrics::SnapshotMetrics> snapshots;
  /// Connectivity at every snapshot, independent of the stride.
  std::vector<metrics::ConnectivitySample> connectivity;
  metrics::MomentAccumulator neighbor_moments;
  std::optional<metrics::DensityMoments> density;
  std::size_t inequality_violations = 0;
  std::size_t signature_verifications = 0;
};

/// Deterministic in (cfg, seed). Throws ConfigError before simulating if cfg
/// is invalid.
RunResult run(const ScenarioConfig& cfg, std::uint64_t seed, const RunOptions& options = {});

/// Names of the per-run summary metrics, in output order.
const std::vector<std::string>& summary_metric_names();

/// One value per summary_metric_names() entry; nullopt where undefined.
std::vector<std::optional<double>> summarize(const RunResult& result);

struct SweepRow {
  double area_length = 0.0;
  std::uint64_t seed = 0;
  RunResult result;
};

struct SweepAggregate {
  double area_length = 0.0;
  double comm_density_2d = 0.0;
  double comm_density_3d = 0.0;
  std::size_t runs = 0;
  /// Mean over seeds where defined, aligned with summary_metric_names().
  std::vector<std::optional<double>> means;
  metrics::MomentAccumulator neighbor_moments;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<SweepAggregate> aggregates;
};

struct SweepOptions {
  /// 0 means FANETKM_THREADS or the hardware concurrency.
  std::size_t threads = 0;
  RunOptions run;
};

/// Default worker count: FANETKM_THREADS if set, else hardware concurrency.
std::size_t default_parallelism();

/// One run per (area length, seed). Rows are ordered by area length index,
/// then seed index, regardless of thread count.
SweepResult sweep(const SweepSpec& spec, const SweepOptions& options = {});

}  // namespace fanetkm::engine
