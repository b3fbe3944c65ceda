#include "fanetkm/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "fanetkm/errors.hpp"

namespace fanetkm::metrics {

double comm_density_2d(double x_len, double y_len, double r, std::size_t n) {
  if (!(x_len > 0.0 && y_len > 0.0)) throw DomainError("comm_density: area must be > 0");
  return static_cast<double>(n) * std::numbers::pi * r * r / (x_len * y_len);
}

double comm_density_3d(double x_len, double y_len, double z_len, double r, std::size_t n) {
  const double volume = x_len * y_len * z_len;
  if (!(volume > 0.0)) throw DomainError("comm_density: 3D volume must be > 0");
  return static_cast<double>(n) * (4.0 / 3.0) * std::numbers::pi * r * r * r / volume;
}

double comm_density(const mobility::BoundingBox& box, double r, std::size_t n) {
  if (r < 0.0) throw DomainError("comm_density: range must be >= 0");
  if (n == 0) throw DomainError("comm_density: node count must be >= 1");
  if (box.is_2d()) return comm_density_2d(box.x_len, box.y_len, r, n);
  return comm_density_3d(box.x_len, box.y_len, box.z_len, r, n);
}

KeypathStats keypath_stats(const graph::Graph& key_g, const graph::Graph& phys_g) {
  const std::size_t n = key_g.node_count();
  if (n < 2) throw DomainError("keypath_stats: at least two nodes are required");
  if (phys_g.node_count() != n) throw DomainError("keypath_stats: graphs differ in node count");

  const graph::HopMatrix key_hops = graph::all_pairs_hops(key_g);
  const graph::HopMatrix phys_hops = graph::all_pairs_hops(phys_g);
  const std::size_t words = key_g.words_per_row();

  KeypathStats out;
  out.total_pairs = n * (n - 1) / 2;
  double hop_sum = 0.0, de_sum = 0.0, overall_sum = 0.0, expanded_hop_sum = 0.0;

  constexpr std::int64_t kAbsent = -1;
  std::vector<std::int64_t> overall(n);
  std::vector<std::vector<std::uint64_t>> levels;

  for (NodeId d = 0; d < n; ++d) {
    // Nodes bucketed by key-hop distance to d.
    std::size_t max_level = 0;
    for (std::size_t v = 0; v < n; ++v) {
      const auto h = key_hops.at(v, d);
      if (h != graph::kUnreachable) max_level = std::max<std::size_t>(max_level, h);
    }
    levels.assign(max_level + 1, std::vector<std::uint64_t>(words, 0));
    for (std::size_t v = 0; v < n; ++v) {
      const auto h = key_hops.at(v, d);
      if (h != graph::kUnreachable) levels[h][v / 64] |= std::uint64_t{1} << (v % 64);
    }

    // Overall length of the tie-broken key path v -> d, built outward from d.
    std::fill(overall.begin(), overall.end(), kAbsent);
    overall[d] = 0;
    for (std::size_t level = 1; level <= max_level; ++level) {
      for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t bits = levels[level][w];
        while (bits) {
          const std::size_t v = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
          bits &= bits - 1;
          const auto row = key_g.row(static_cast<NodeId>(v));
          std::size_t next = n;
          for (std::size_t x = 0; x < words; ++x) {
            const std::uint64_t cand = row[x] & levels[level - 1][x];
            if (cand) {
              next = x * 64 + static_cast<std::size_t>(std::countr_zero(cand));
              break;
            }
          }
          const auto phys = phys_hops.at(v, next);
          if (phys != graph::kUnreachable && overall[next] != kAbsent) {
            overall[v] = overall[next] + phys;
          }
        }
      }
    }

    for (std::size_t s = 0; s < d; ++s) {
      const auto h = key_hops.at(s, d);
      if (h == graph::kUnreachable) continue;
      ++out.reachable_pairs;
      hop_sum += h;
      de_sum += h >= 1 ? h - 1 : 0;
      if (overall[s] != kAbsent) {
        ++out.expanded_pairs;
        overall_sum += static_cast<double>(overall[s]);
        expanded_hop_sum += h;
        if (overall[s] < static_cast<std::int64_t>(h)) ++out.inequality_violations;
      }
    }
  }

  out.keypath_prob =
      static_cast<double>(out.reachable_pairs) / static_cast<double>(out.total_pairs);
  if (out.reachable_pairs > 0) {
    out.avg_keypath_hops = hop_sum / static_cast<double>(out.reachable_pairs);
    out.avg_de_steps = de_sum / static_cast<double>(out.reachable_pairs);
  }
  if (out.expanded_pairs > 0) {
    out.avg_overall_len = overall_sum / static_cast<double>(out.expanded_pairs);
    out.avg_expanded_keypath_hops = expanded_hop_sum / static_cast<double>(out.expanded_pairs);
  }
  return out;
}

VisitTracker::VisitTracker(std::size_t n)
    : n_(n), words_((n + 63) / 64), met_(n * words_, 0), met_count_(n, 0), completion_(n) {}

bool VisitTracker::has_met(NodeId a, NodeId b) const {
  return (met_[a * words_ + b / 64] >> (b % 64)) & 1;
}

void VisitTracker::update(std::span<const NodePair> contacts, Seconds t) {
  if (t < last_t_) throw DomainError("VisitTracker: time must be non-decreasing");
  last_t_ = t;
  const auto mark = [&](NodeId a, NodeId b) {
    std::uint64_t& word = met_[a * words_ + b / 64];
    const std::uint64_t bit = std::uint64_t{1} << (b % 64);
    if (word & bit) return;
    word |= bit;
    if (++met_count_[a] == n_ - 1) completion_[a] = t;
  };
  for (const NodePair& p : contacts) {
    if (p.lo == p.hi || p.lo >= n_ || p.hi >= n_) continue;
    mark(p.lo, p.hi);
    mark(p.hi, p.lo);
  }
}

VisitMetrics visit_metrics(const VisitTracker& tracker, Seconds horizon) {
  VisitMetrics out;
  const std::size_t n = tracker.node_count();
  if (n == 0) return out;
  std::size_t done = 0;
  double sum = 0.0;
  for (NodeId v = 0; v < n; ++v) {
    const auto c = tracker.completion(v);
    if (c && *c <= horizon) {
      ++done;
      sum += *c;
    }
  }
  out.visit_all_fraction = static_cast<double>(done) / static_cast<double>(n);
  if (done > 0) out.avg_time_to_visit_all = sum / static_cast<double>(done);
  return out;
}

std::optional<Seconds> ttfc(std::span<const ConnectivitySample> series) {
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (!(series[i].t > series[i - 1].t)) {
      throw DomainError("ttfc: timestamps must be strictly increasing");
    }
  }
  for (const auto& s : series) {
    if (s.connected) return s.t;
  }
  return std::nullopt;
}

void MomentAccumulator::add(double x) {
  const double n1 = static_cast<double>(n_);
  ++n_;
  const double n = static_cast<double>(n_);
  const double delta = x - mean_;
  const double delta_n = delta / n;
  const double delta_n2 = delta_n * delta_n;
  const double term1 = delta * delta_n * n1;
  mean_ += delta_n;
  m4_ += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * m2_ - 4.0 * delta_n * m3_;
  m3_ += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * m2_;
  m2_ += term1;
}

void MomentAccumulator::merge(const MomentAccumulator& o) {
  if (o.n_ == 0) return;
  if (n_ == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(o.n_);
  const double n = na + nb;
  const double d = o.mean_ - mean_;
  const double d2 = d * d;
  const double d3 = d2 * d;
  const double d4 = d2 * d2;

  const double m2 = m2_ + o.m2_ + d2 * na * nb / n;
  const double m3 = m3_ + o.m3_ + d3 * na * nb * (na - nb) / (n * n) +
                    3.0 * d * (na * o.m2_ - nb * m2_) / n;
  const double m4 = m4_ + o.m4_ + d4 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n) +
                    6.0 * d2 * (na * na * o.m2_ + nb * nb * m2_) / (n * n) +
                    4.0 * d * (na * o.m3_ - nb * m3_) / n;
  mean_ += d * nb / n;
  m2_ = m2;
  m3_ = m3;
  m4_ = m4;
  n_ += o.n_;
}

DensityMoments MomentAccumulator::finish() const {
  if (n_ < 2) throw DomainError("density_moments: at least two samples are required");
  DensityMoments out;
  const double n = static_cast<double>(n_);
  out.count = n_;
  out.mean = mean_;
  out.variance = std::max(0.0, m2_ / (n - 1.0));
  if (m2_ > 0.0) {
    out.skewness = std::sqrt(n) * m3_ / std::pow(m2_, 1.5);
    out.excess_kurtosis = n * m4_ / (m2_ * m2_) - 3.0;
  }
  return out;
}

DensityMoments density_moments(std::span<const double> samples) {
  MomentAccumulator acc;
  for (double x : samples) acc.add(x);
  return acc.finish();
}

}  // namespace fanetkm::metrics
