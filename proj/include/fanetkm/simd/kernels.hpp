#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference and optional
// vector variants; all variants must produce bit-identical output.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace fanetkm::simd {

/// Sets bit j of out_words (j < count) iff the squared distance from
/// (cx, cy, cz) to (xs[j], ys[j], zs[j]) is <= r2. The squared distance is
/// accumulated as (dx*dx + dy*dy) + dz*dz in every variant. Bits >= count are
/// cleared; out_words must hold (count + 63) / 64 words.
using ThresholdRowFn = void (*)(const double* xs, const double* ys, const double* zs,
                                std::size_t count, double cx, double cy, double cz, double r2,
                                std::uint64_t* out_words);

/// dst[w] |= src[w] for w < words.
using OrAccumulateFn = void (*)(std::uint64_t* dst, const std::uint64_t* src, std::size_t words);

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  Isa isa;
  ThresholdRowFn threshold_row;
  OrAccumulateFn or_accumulate;
};

const KernelTable& scalar_kernels();

/// nullptr unless the build includes AVX2 code and the CPU supports it.
const KernelTable* avx2_kernels();

/// Best available table, chosen once. FANETKM_SIMD=scalar forces the
/// reference kernels.
const KernelTable& active_kernels();

std::string_view isa_name(Isa isa);

namespace detail {
void threshold_row_scalar(const double* xs, const double* ys, const double* zs,
                          std::size_t count, double cx, double cy, double cz, double r2,
                          std::uint64_t* out_words);
void or_accumulate_scalar(std::uint64_t* dst, const std::uint64_t* src, std::size_t words);
#if defined(FANETKM_HAVE_AVX2)
void threshold_row_avx2(const double* xs, const double* ys, const double* zs, std::size_t count,
                        double cx, double cy, double cz, double r2, std::uint64_t* out_words);
void or_accumulate_avx2(std::uint64_t* dst, const std::uint64_t* src, std::size_t words);
#endif
}  // namespace detail

}  // namespace fanetkm::simd
