#include "cliquefactor/bitset.hpp"

namespace cliquefactor {

std::size_t Bitset::find_next(std::size_t from) const {
  if (from >= bits_) return bits_;
  std::size_t w = from >> 6;
  Word bits = words_[w] & (~Word{0} << (from & 63));
  while (true) {
    if (bits != 0) return w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits));
    if (++w == words_.size()) return bits_;
    bits = words_[w];
  }
}

}  // namespace cliquefactor
