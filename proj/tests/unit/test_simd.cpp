#include <doctest.h>

#include <vector>

#include "fanetkm/random.hpp"
#include "fanetkm/simd/kernels.hpp"

using namespace fanetkm;
using namespace fanetkm::simd;

namespace {

std::vector<std::uint64_t> row(const KernelTable& k, const std::vector<double>& xs,
                               const std::vector<double>& ys, const std::vector<double>& zs,
                               double cx, double cy, double cz, double r2) {
  std::vector<std::uint64_t> out((xs.size() + 63) / 64 + 1, ~std::uint64_t{0});
  k.threshold_row(xs.data(), ys.data(), zs.data(), xs.size(), cx, cy, cz, r2, out.data());
  out.pop_back();
  return out;
}

}  // namespace

TEST_CASE("scalar threshold row sets exactly the in-range bits") {
  std::vector<double> xs{0, 3, 10, 3}, ys{0, 4, 0, 4}, zs{0, 0, 0, 0.001};
  const auto bits = row(scalar_kernels(), xs, ys, zs, 0, 0, 0, 25.0);
  REQUIRE(bits.size() == 1);
  CHECK(bits[0] == 0b0011);
}

TEST_CASE("vector kernels match the scalar reference") {
  const KernelTable* avx = avx2_kernels();
  if (!avx) {
    MESSAGE("AVX2 unavailable; only the scalar kernels are exercised");
    return;
  }
  CHECK(avx->isa == Isa::Avx2);
  RandomStream rng(6);
  for (int trial = 0; trial < 500; ++trial) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(0, 300));
    std::vector<double> xs(n), ys(n), zs(n);
    for (std::size_t i = 0; i < n; ++i) {
      // Coarse grid so many distances land exactly on the threshold.
      xs[i] = std::floor(rng.uniform(0, 20)) * 5;
      ys[i] = std::floor(rng.uniform(0, 20)) * 5;
      zs[i] = trial % 2 ? 0.0 : rng.uniform(0, 100);
    }
    const double cx = xs.empty() ? 0 : xs[0], cy = ys.empty() ? 0 : ys[0];
    const double r = std::floor(rng.uniform(0, 10)) * 5;
    REQUIRE(row(scalar_kernels(), xs, ys, zs, cx, cy, 0, r * r) ==
            row(*avx, xs, ys, zs, cx, cy, 0, r * r));

    const auto words = static_cast<std::size_t>(rng.uniform_int(0, 9));
    std::vector<std::uint64_t> src(words), a(words), b(words);
    for (std::size_t w = 0; w < words; ++w) {
      src[w] = rng.engine()();
      a[w] = b[w] = rng.engine()();
    }
    scalar_kernels().or_accumulate(a.data(), src.data(), words);
    avx->or_accumulate(b.data(), src.data(), words);
    REQUIRE(a == b);
  }
}

TEST_CASE("active kernels name an ISA") {
  const auto& k = active_kernels();
  CHECK_FALSE(isa_name(k.isa).empty());
}
