#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fanetkm/ecc.hpp"

namespace fanetkm::selftest {

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Point count of the curve by exhaustive enumeration, identity included.
/// O(p) time and memory.
std::uint64_t count_points(const ecc::CurveParams& curve);

/// Toy-curve group checks, signature round trip and tamper fuzzing, plus
/// (optionally, ~1 s) enumeration of the demo curve's order.
std::vector<Check> ecc_selftest(std::size_t tamper_cases = 1000, std::uint64_t seed = 1,
                                bool include_demo = true);

}  // namespace fanetkm::selftest
