#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace varattack {

/// Deterministic random stream. The engine is std::mt19937_64; the mapping
/// to indices and unit reals is done here rather than through <random>
/// distributions, whose output differs between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t state) : engine_(state) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t uniform_index(std::size_t n);

  /// Uniform real in [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// Stream that depends only on (seed, item_id).
Rng seeded_rng(std::uint64_t seed, std::string_view item_id);

}  // namespace varattack
