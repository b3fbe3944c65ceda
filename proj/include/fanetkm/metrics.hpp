#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fanetkm/graph.hpp"
#include "fanetkm/mobility.hpp"
#include "fanetkm/types.hpp"

namespace fanetkm::metrics {

/// Expected node count inside one node's communication disk (z_len == 0,
/// n*pi*r^2 / XY) or sphere (n*(4/3)*pi*r^3 / XYZ).
double comm_density(const mobility::BoundingBox& box, double r, std::size_t n);

double comm_density_2d(double x_len, double y_len, double r, std::size_t n);
double comm_density_3d(double x_len, double y_len, double z_len, double r, std::size_t n);

struct KeypathStats {
  double keypath_prob = 0.0;
  /// Averages over reachable unordered pairs; absent when none are reachable.
  std::optional<double> avg_de_steps;
  std::optional<double> avg_keypath_hops;
  /// Average over pairs whose every key hop expands to a physical path.
  std::optional<double> avg_overall_len;
  /// Key-path hops averaged over the same pairs as avg_overall_len.
  std::optional<double> avg_expanded_keypath_hops;
  std::size_t total_pairs = 0;
  std::size_t reachable_pairs = 0;
  std::size_t expanded_pairs = 0;
  /// Pairs whose overall length fell below the key-path hop count.
  std::size_t inequality_violations = 0;
};

/// All-pairs key-path statistics. Paths follow shortest_path's tie-break.
/// Throws DomainError for fewer than two nodes or mismatched graphs.
KeypathStats keypath_stats(const graph::Graph& key_g, const graph::Graph& phys_g);

struct SnapshotMetrics {
  Seconds t = 0.0;
  double keypath_prob = 0.0;
  std::optional<double> avg_de_steps;
  std::optional<double> avg_keypath_hops;
  std::optional<double> avg_overall_len;
  std::optional<double> avg_expanded_keypath_hops;
  bool fully_key_connected = false;
  std::vector<std::uint16_t> neighbor_counts;
  std::size_t inequality_violations = 0;
};

class VisitTracker {
 public:
  explicit VisitTracker(std::size_t n);

  /// Records every contact at time t. Times must be non-decreasing.
  void update(std::span<const NodePair> contacts, Seconds t);

  std::size_t node_count() const { return n_; }
  bool has_met(NodeId a, NodeId b) const;
  std::size_t met_count(NodeId v) const { return met_count_[v]; }
  std::optional<Seconds> completion(NodeId v) const { return completion_[v]; }

 private:
  std::size_t n_;
  std::size_t words_;
  std::vector<std::uint64_t> met_;
  std::vector<std::size_t> met_count_;
  std::vector<std::optional<Seconds>> completion_;
  Seconds last_t_ = -kNever;
};

struct VisitMetrics {
  double visit_all_fraction = 0.0;
  std::optional<Seconds> avg_time_to_visit_all;
};

/// Fraction of nodes that met everyone by `horizon`, and their mean time.
VisitMetrics visit_metrics(const VisitTracker& tracker, Seconds horizon);

struct ConnectivitySample {
  Seconds t = 0.0;
  bool connected = false;
};

/// Earliest connected timestamp. Throws DomainError unless timestamps
/// strictly increase.
std::optional<Seconds> ttfc(std::span<const ConnectivitySample> series);

struct DensityMoments {
  double mean = 0.0;
  /// Unbiased sample variance.
  double variance = 0.0;
  /// Absent when the variance is zero.
  std::optional<double> skewness;
  std::optional<double> excess_kurtosis;
  std::size_t count = 0;
};

/// Streaming central moments up to fourth order; merge is associative, so
/// per-run accumulators can be pooled across seeds.
class MomentAccumulator {
 public:
  void add(double x);
  void merge(const MomentAccumulator& other);
  std::size_t count() const { return n_; }
  /// Throws DomainError for fewer than two samples.
  DensityMoments finish() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double m3_ = 0.0;
  double m4_ = 0.0;
};

/// Throws DomainError for fewer than two samples.
DensityMoments density_moments(std::span<const double> samples);

}  // namespace fanetkm::metrics
