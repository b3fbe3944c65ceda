#include <cstdlib>
#include <string>

#include "fanetkm/simd/kernels.hpp"

namespace fanetkm::simd {

namespace {

constexpr KernelTable kScalar{Isa::Scalar, &detail::threshold_row_scalar,
                              &detail::or_accumulate_scalar};

#if defined(FANETKM_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::Avx2, &detail::threshold_row_avx2, &detail::or_accumulate_avx2};
#endif

const KernelTable& choose() {
  if (const char* env = std::getenv("FANETKM_SIMD"); env && std::string(env) == "scalar") {
    return kScalar;
  }
  if (const KernelTable* avx2 = avx2_kernels()) return *avx2;
  return kScalar;
}

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

const KernelTable* avx2_kernels() {
#if defined(FANETKM_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() {
  static const KernelTable& table = choose();
  return table;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Avx2:
      return "avx2";
    case Isa::Scalar:
      break;
  }
  return "scalar";
}

}  // namespace fanetkm::simd
