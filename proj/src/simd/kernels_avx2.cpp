#include <immintrin.h>

#include "fanetkm/simd/kernels.hpp"

namespace fanetkm::simd::detail {

void threshold_row_avx2(const double* xs, const double* ys, const double* zs, std::size_t count,
                        double cx, double cy, double cz, double r2, std::uint64_t* out_words) {
  const std::size_t words = (count + 63) / 64;
  for (std::size_t w = 0; w < words; ++w) out_words[w] = 0;

  const __m256d vcx = _mm256_set1_pd(cx);
  const __m256d vcy = _mm256_set1_pd(cy);
  const __m256d vcz = _mm256_set1_pd(cz);
  const __m256d vr2 = _mm256_set1_pd(r2);

  std::size_t j = 0;
  for (; j + 4 <= count; j += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + j), vcx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + j), vcy);
    const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(zs + j), vcz);
    const __m256d xy = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    const __m256d d2 = _mm256_add_pd(xy, _mm256_mul_pd(dz, dz));
    const auto bits =
        static_cast<std::uint64_t>(_mm256_movemask_pd(_mm256_cmp_pd(d2, vr2, _CMP_LE_OQ)));
    // j is a multiple of 4, so the nibble never straddles a word.
    out_words[j >> 6] |= bits << (j & 63);
  }
  for (; j < count; ++j) {
    const double dx = xs[j] - cx;
    const double dy = ys[j] - cy;
    const double dz = zs[j] - cz;
    const double xy = dx * dx + dy * dy;
    const double d2 = xy + dz * dz;
    if (d2 <= r2) out_words[j >> 6] |= std::uint64_t{1} << (j & 63);
  }
}

void or_accumulate_avx2(std::uint64_t* dst, const std::uint64_t* src, std::size_t words) {
  std::size_t w = 0;
  for (; w + 4 <= words; w += 4) {
    auto* d = reinterpret_cast<__m256i*>(dst + w);
    const auto* s = reinterpret_cast<const __m256i*>(src + w);
    _mm256_storeu_si256(d, _mm256_or_si256(_mm256_loadu_si256(d), _mm256_loadu_si256(s)));
  }
  for (; w < words; ++w) dst[w] |= src[w];
}

}  // namespace fanetkm::simd::detail
