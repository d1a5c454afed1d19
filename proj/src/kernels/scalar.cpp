#include "cliquefactor/kernels.hpp"

#include <bit>

namespace cliquefactor::kernels::scalar {

std::size_t popcount(std::span<const Word> a) {
  std::size_t total = 0;
  for (Word w : a) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::size_t and_popcount(std::span<const Word> a, std::span<const Word> b) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    total += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
  }
  return total;
}

void and_into(std::span<Word> dst, std::span<const Word> src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] &= src[i];
}

bool intersects(std::span<const Word> a, std::span<const Word> b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((a[i] & b[i]) != 0) return true;
  }
  return false;
}

}  // namespace cliquefactor::kernels::scalar
