#include "fanetkm/graph.hpp"

#include <bit>
#include <string>

#include "fanetkm/errors.hpp"
#include "fanetkm/simd/kernels.hpp"

namespace fanetkm::graph {

namespace {

template <typename F>
void for_each_bit(std::span<const std::uint64_t> words, F&& f) {
  for (std::size_t w = 0; w < words.size(); ++w) {
    std::uint64_t bits = words[w];
    while (bits) {
      f(static_cast<NodeId>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits))));
      bits &= bits - 1;
    }
  }
}

bool same_key(const keying::PublicKeyRecord& held, const keying::PublicKeyRecord& current) {
  return held.key == current.key && held.expires_at == current.expires_at;
}

}  // namespace

Graph::Graph(std::size_t node_count)
    : n_(node_count), words_((node_count + 63) / 64), bits_(n_ * words_, 0) {}

Graph Graph::from_pairs(std::size_t node_count, std::span<const NodePair> pairs) {
  Graph g(node_count);
  for (const NodePair& p : pairs) g.add_edge(p.lo, p.hi);
  return g;
}

void Graph::add_edge(NodeId a, NodeId b) {
  if (a >= n_ || b >= n_) throw DomainError("graph: node index out of range");
  if (a == b) throw DomainError("graph: self-loop on node " + std::to_string(a));
  bits_[a * words_ + b / 64] |= std::uint64_t{1} << (b % 64);
  bits_[b * words_ + a / 64] |= std::uint64_t{1} << (a % 64);
}

bool Graph::has_edge(NodeId a, NodeId b) const {
  if (a >= n_ || b >= n_) return false;
  return (bits_[a * words_ + b / 64] >> (b % 64)) & 1;
}

std::size_t Graph::degree(NodeId v) const {
  std::size_t d = 0;
  for (std::uint64_t w : row(v)) d += static_cast<std::size_t>(std::popcount(w));
  return d;
}

std::size_t Graph::edge_count() const {
  std::size_t total = 0;
  for (std::uint64_t w : bits_) total += static_cast<std::size_t>(std::popcount(w));
  return total / 2;
}

std::vector<NodeId> Graph::neighbors(NodeId v) const {
  std::vector<NodeId> out;
  for_each_bit(row(v), [&](NodeId u) { out.push_back(u); });
  return out;
}

std::vector<NodePair> Graph::edges() const {
  std::vector<NodePair> out;
  for (NodeId v = 0; v < n_; ++v) {
    for_each_bit(row(v), [&](NodeId u) {
      if (u > v) out.push_back({v, u});
    });
  }
  return out;
}

Graph build_phys_graph(std::span<const Vec3> positions, double r) {
  const std::size_t n = positions.size();
  Graph g(n);
  std::vector<double> xs(n), ys(n), zs(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = positions[i].x;
    ys[i] = positions[i].y;
    zs[i] = positions[i].z;
  }
  const auto& k = simd::active_kernels();
  const double r2 = r * r;
  for (std::size_t i = 0; i < n; ++i) {
    auto row = g.mutable_row(static_cast<NodeId>(i));
    k.threshold_row(xs.data(), ys.data(), zs.data(), n, xs[i], ys[i], zs[i], r2, row.data());
    row[i / 64] &= ~(std::uint64_t{1} << (i % 64));
  }
  return g;
}

Graph build_key_graph(std::span<const keying::KeyTable> tables,
                      std::span<const keying::PublicKeyRecord> current, Seconds now) {
  const std::size_t n = tables.size();
  if (current.size() != n) throw DomainError("build_key_graph: one current record per node");
  Graph g(n);
  for (NodeId i = 0; i < n; ++i) {
    for (const keying::TableEntry& e : tables[i].entries()) {
      const NodeId j = e.record.owner;
      if (j <= i || j >= n) continue;
      if (!e.record.valid_at(now) || !same_key(e.record, current[j])) continue;
      const keying::PublicKeyRecord* back = tables[j].find(i);
      if (back && back->valid_at(now) && same_key(*back, current[i])) g.add_edge(i, j);
    }
  }
  return g;
}

std::vector<std::uint16_t> bfs_hops(const Graph& g, NodeId source) {
  const std::size_t n = g.node_count();
  const std::size_t words = g.words_per_row();
  std::vector<std::uint16_t> dist(n, kUnreachable);
  if (source >= n) throw DomainError("bfs: source index out of range");
  const auto& k = simd::active_kernels();

  std::vector<std::uint64_t> visited(words, 0), frontier(words, 0), next(words, 0);
  visited[source / 64] = frontier[source / 64] = std::uint64_t{1} << (source % 64);
  dist[source] = 0;
  std::uint16_t level = 0;
  bool any = true;
  while (any) {
    std::fill(next.begin(), next.end(), 0);
    for_each_bit(frontier, [&](NodeId v) { k.or_accumulate(next.data(), g.row(v).data(), words); });
    ++level;
    any = false;
    for (std::size_t w = 0; w < words; ++w) {
      next[w] &= ~visited[w];
      visited[w] |= next[w];
      any = any || next[w] != 0;
    }
    for_each_bit(next, [&](NodeId v) { dist[v] = level; });
    frontier.swap(next);
  }
  return dist;
}

HopMatrix all_pairs_hops(const Graph& g) {
  const std::size_t n = g.node_count();
  HopMatrix m(n);
  for (NodeId s = 0; s < n; ++s) {
    const auto d = bfs_hops(g, s);
    for (std::size_t t = 0; t < n; ++t) m.at(s, t) = d[t];
  }
  return m;
}

std::optional<PathResult> shortest_path(const Graph& g, NodeId s, NodeId d) {
  if (s >= g.node_count() || d >= g.node_count()) {
    throw DomainError("shortest_path: node index out of range");
  }
  const auto to_d = bfs_hops(g, d);
  if (to_d[s] == kUnreachable) return std::nullopt;
  PathResult path;
  path.nodes.push_back(s);
  NodeId at = s;
  while (at != d) {
    const std::uint16_t want = static_cast<std::uint16_t>(to_d[at] - 1);
    NodeId step = at;
    for (NodeId u : g.neighbors(at)) {
      if (to_d[u] == want) {
        step = u;
        break;
      }
    }
    path.nodes.push_back(step);
    at = step;
  }
  return path;
}

std::size_t de_steps(const PathResult& path) { return path.hops() >= 1 ? path.hops() - 1 : 0; }

std::optional<std::size_t> overall_path_len(const PathResult& key_path, const Graph& phys) {
  std::size_t total = 0;
  for (std::size_t i = 0; i + 1 < key_path.nodes.size(); ++i) {
    const auto hops = bfs_hops(phys, key_path.nodes[i]);
    const std::uint16_t h = hops.at(key_path.nodes[i + 1]);
    if (h == kUnreachable) return std::nullopt;
    total += h;
  }
  return total;
}

bool is_connected(const Graph& g) {
  if (g.node_count() <= 1) return true;
  const auto d = bfs_hops(g, 0);
  for (std::uint16_t h : d) {
    if (h == kUnreachable) return false;
  }
  return true;
}

}  // namespace fanetkm::graph
