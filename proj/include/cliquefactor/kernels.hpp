#pragma once

// Bitset kernels over packed 64-bit words.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant. The public entry points dispatch at runtime on the detected ISA;
// the per-ISA namespaces are exposed so tests can check them against each
// other directly.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace cliquefactor::kernels {

using Word = std::uint64_t;

enum class Isa { Scalar, Avx2 };

/// ISA picked by the dispatcher (honours force_scalar).
Isa active_isa();
std::string_view isa_name(Isa isa);
bool avx2_available();

/// Pin dispatch to the scalar kernels (used by equivalence tests and for
/// debugging). Thread-safe.
void force_scalar(bool on);

std::size_t popcount(std::span<const Word> a);
std::size_t and_popcount(std::span<const Word> a, std::span<const Word> b);
void and_into(std::span<Word> dst, std::span<const Word> src);
bool intersects(std::span<const Word> a, std::span<const Word> b);

namespace scalar {
std::size_t popcount(std::span<const Word> a);
std::size_t and_popcount(std::span<const Word> a, std::span<const Word> b);
void and_into(std::span<Word> dst, std::span<const Word> src);
bool intersects(std::span<const Word> a, std::span<const Word> b);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define CLIQUEFACTOR_HAVE_AVX2_KERNELS 1
namespace avx2 {
std::size_t popcount(std::span<const Word> a);
std::size_t and_popcount(std::span<const Word> a, std::span<const Word> b);
void and_into(std::span<Word> dst, std::span<const Word> src);
bool intersects(std::span<const Word> a, std::span<const Word> b);
}  // namespace avx2
#else
#define CLIQUEFACTOR_HAVE_AVX2_KERNELS 0
#endif

}  // namespace cliquefactor::kernels
