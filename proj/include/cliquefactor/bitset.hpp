#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cliquefactor/kernels.hpp"

namespace cliquefactor {

/// Fixed-length bitset whose bulk operations go through the SIMD kernels.
class Bitset {
 public:
  using Word = kernels::Word;

  Bitset() = default;
  explicit Bitset(std::size_t bits, bool value = false)
      : bits_(bits), words_(word_count(bits), value ? ~Word{0} : Word{0}) {
    trim();
  }

  static constexpr std::size_t word_count(std::size_t bits) { return (bits + 63) / 64; }

  std::size_t size() const { return bits_; }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i) { words_[i >> 6] |= Word{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(Word{1} << (i & 63)); }

  std::size_t count() const { return kernels::popcount(words_); }
  bool any() const {
    for (Word w : words_) {
      if (w != 0) return true;
    }
    return false;
  }

  Bitset& operator&=(const Bitset& other) {
    kernels::and_into(words_, other.words_);
    return *this;
  }
  std::size_t and_count(const Bitset& other) const {
    return kernels::and_popcount(words_, other.words_);
  }
  bool intersects(const Bitset& other) const { return kernels::intersects(words_, other.words_); }

  /// Index of the first set bit at or after `from`, or size() if none.
  std::size_t find_next(std::size_t from) const;
  std::size_t find_first() const { return find_next(0); }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      Word bits = words_[w];
      while (bits != 0) {
        const int b = __builtin_ctzll(bits);
        fn(w * 64 + static_cast<std::size_t>(b));
        bits &= bits - 1;
      }
    }
  }

  std::span<const Word> words() const { return words_; }
  std::span<Word> words() { return words_; }

  bool operator==(const Bitset&) const = default;

 private:
  void trim() {
    if (bits_ % 64 != 0 && !words_.empty()) words_.back() &= (Word{1} << (bits_ % 64)) - 1;
  }

  std::size_t bits_ = 0;
  std::vector<Word> words_;
};

}  // namespace cliquefactor
