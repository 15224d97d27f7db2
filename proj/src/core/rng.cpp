#include "varattack/core/rng.hpp"

#include <limits>

#include "varattack/core/hash.hpp"

namespace varattack {

std::size_t Rng::uniform_index(std::size_t n) {
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  // Reject the top partial bucket so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = next();
  while (x >= limit) x = next();
  return static_cast<std::size_t>(x % bound);
}

Rng seeded_rng(std::uint64_t seed, std::string_view item_id) {
  return Rng(combine_seed(seed, item_id));
}

}  // namespace varattack
