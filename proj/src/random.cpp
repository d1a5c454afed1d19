#include "cliquefactor/random.hpp"

#include <algorithm>
#include <numeric>


namespace cliquefactor {

std::vector<std::uint32_t> Rng::sample_sorted(std::uint32_t population, std::uint32_t count) {
  // Partial Fisher-Yates over the index range.
  std::vector<std::uint32_t> pool(population);
  std::iota(pool.begin(), pool.end(), 0U);
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::uint32_t>(below(population - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace cliquefactor
