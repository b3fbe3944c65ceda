#include "fanetkm/simd/kernels.hpp"

namespace fanetkm::simd::detail {

void threshold_row_scalar(const double* xs, const double* ys, const double* zs,
                          std::size_t count, double cx, double cy, double cz, double r2,
                          std::uint64_t* out_words) {
  const std::size_t words = (count + 63) / 64;
  for (std::size_t w = 0; w < words; ++w) out_words[w] = 0;
  for (std::size_t j = 0; j < count; ++j) {
    const double dx = xs[j] - cx;
    const double dy = ys[j] - cy;
    const double dz = zs[j] - cz;
    const double xy = dx * dx + dy * dy;
    const double d2 = xy + dz * dz;
    if (d2 <= r2) out_words[j >> 6] |= std::uint64_t{1} << (j & 63);
  }
}

void or_accumulate_scalar(std::uint64_t* dst, const std::uint64_t* src, std::size_t words) {
  for (std::size_t w = 0; w < words; ++w) dst[w] |= src[w];
}

}  // namespace fanetkm::simd::detail
