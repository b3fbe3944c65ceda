#pragma once

#include <compare>
#include <cstdint>
#include <limits>

namespace fanetkm {

using NodeId = std::uint32_t;

/// Simulation time in seconds.
using Seconds = double;

inline constexpr Seconds kNever = std::numeric_limits<double>::infinity();

/// Unordered node pair stored as (lo, hi) with lo < hi.
struct NodePair {
  NodeId lo = 0;
  NodeId hi = 0;

  friend constexpr auto operator<=>(const NodePair&, const NodePair&) = default;
};

}  // namespace fanetkm
