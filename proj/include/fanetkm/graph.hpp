#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fanetkm/keying.hpp"
#include "fanetkm/types.hpp"
#include "fanetkm/vec3.hpp"

namespace fanetkm::graph {

/// Undirected simple graph over nodes 0..n-1, stored as bitset rows.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t node_count);

  static Graph from_pairs(std::size_t node_count, std::span<const NodePair> pairs);

  std::size_t node_count() const { return n_; }
  std::size_t words_per_row() const { return words_; }

  /// Throws DomainError for self-loops or out-of-range indices.
  void add_edge(NodeId a, NodeId b);
  bool has_edge(NodeId a, NodeId b) const;
  std::size_t degree(NodeId v) const;
  std::size_t edge_count() const;
  std::vector<NodeId> neighbors(NodeId v) const;
  /// Ascending pair list.
  std::vector<NodePair> edges() const;

  std::span<const std::uint64_t> row(NodeId v) const {
    return {bits_.data() + static_cast<std::size_t>(v) * words_, words_};
  }
  std::span<std::uint64_t> mutable_row(NodeId v) {
    return {bits_.data() + static_cast<std::size_t>(v) * words_, words_};
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

struct PathResult {
  std::vector<NodeId> nodes;

  std::size_t hops() const { return nodes.empty() ? 0 : nodes.size() - 1; }
};

inline constexpr std::uint16_t kUnreachable = 0xffff;

/// Row-major n x n hop-count matrix; kUnreachable marks disconnected pairs.
class HopMatrix {
 public:
  explicit HopMatrix(std::size_t n) : n_(n), d_(n * n, kUnreachable) {}
  std::size_t node_count() const { return n_; }
  std::uint16_t at(std::size_t from, std::size_t to) const { return d_[from * n_ + to]; }
  std::uint16_t& at(std::size_t from, std::size_t to) { return d_[from * n_ + to]; }

 private:
  std::size_t n_;
  std::vector<std::uint16_t> d_;
};

/// Edge {i,j} iff distance <= r.
Graph build_phys_graph(std::span<const Vec3> positions, double r);

/// Edge {i,j} iff each node holds a valid record of the other that matches
/// the other's current record (same key and expiry) at `now`.
Graph build_key_graph(std::span<const keying::KeyTable> tables,
                      std::span<const keying::PublicKeyRecord> current, Seconds now);

/// Minimum-hop path. Ties resolve to the lexicographically smallest node
/// sequence: from each node, step to the lowest-index neighbor that is one
/// hop closer to d.
std::optional<PathResult> shortest_path(const Graph& g, NodeId s, NodeId d);

/// Intermediate decrypt/re-encrypt steps: hops - 1, or 0 for hops <= 1.
std::size_t de_steps(const PathResult& path);

/// Sum of physical shortest-path hop counts over consecutive key-path hops;
/// nullopt if any hop is physically unreachable.
std::optional<std::size_t> overall_path_len(const PathResult& key_path, const Graph& phys);

bool is_connected(const Graph& g);

/// Hop counts from one source (kUnreachable where disconnected).
std::vector<std::uint16_t> bfs_hops(const Graph& g, NodeId source);

HopMatrix all_pairs_hops(const Graph& g);

}  // namespace fanetkm::graph
