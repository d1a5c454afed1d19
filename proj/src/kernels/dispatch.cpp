#include "cliquefactor/kernels.hpp"

#include <atomic>

namespace cliquefactor::kernels {

namespace {

std::atomic<bool> g_force_scalar{false};

bool detect_avx2() {
#if CLIQUEFACTOR_HAVE_AVX2_KERNELS && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const bool g_has_avx2 = detect_avx2();

inline bool use_avx2() {
  return g_has_avx2 && !g_force_scalar.load(std::memory_order_relaxed);
}

}  // namespace

bool avx2_available() { return g_has_avx2; }

void force_scalar(bool on) { g_force_scalar.store(on, std::memory_order_relaxed); }

Isa active_isa() { return use_avx2() ? Isa::Avx2 : Isa::Scalar; }

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Avx2:
      return "avx2";
    case Isa::Scalar:
      break;
  }
  return "scalar";
}

// Short inputs (the common case at desk scale: one or two words per class)
// stay on the scalar path; the vector loop only pays off from four words up.
constexpr std::size_t kVectorMinWords = 4;

std::size_t popcount(std::span<const Word> a) {
#if CLIQUEFACTOR_HAVE_AVX2_KERNELS
  if (a.size() >= kVectorMinWords && use_avx2()) return avx2::popcount(a);
#endif
  return scalar::popcount(a);
}

std::size_t and_popcount(std::span<const Word> a, std::span<const Word> b) {
#if CLIQUEFACTOR_HAVE_AVX2_KERNELS
  if (a.size() >= kVectorMinWords && use_avx2()) return avx2::and_popcount(a, b);
#endif
  return scalar::and_popcount(a, b);
}

void and_into(std::span<Word> dst, std::span<const Word> src) {
#if CLIQUEFACTOR_HAVE_AVX2_KERNELS
  if (dst.size() >= kVectorMinWords && use_avx2()) {
    avx2::and_into(dst, src);
    return;
  }
#endif
  scalar::and_into(dst, src);
}

bool intersects(std::span<const Word> a, std::span<const Word> b) {
#if CLIQUEFACTOR_HAVE_AVX2_KERNELS
  if (a.size() >= kVectorMinWords && use_avx2()) return avx2::intersects(a, b);
#endif
  return scalar::intersects(a, b);
}

}  // namespace cliquefactor::kernels
