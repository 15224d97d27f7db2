#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace varattack {

/// Attack hyper-parameters. Defaults are the published experimental settings.
struct AttackConfig {
  int top_j = 60;               // MLM candidates requested per occurrence
  int top_k = 30;               // substitutes retained per variable
  int child_size = 64;          // children per GA generation
  double crossover_rate = 0.7;  // P(crossover); mutation otherwise
  int max_iter_per_variable = 5;
  int min_max_iter = 10;
  std::string mask_token = "<unk>";
  std::uint64_t rng_seed = 0;
  std::optional<long> query_budget;  // classify queries per item
  bool include_parameters = false;

  /// GA generation limit: max(5 * num_variables, 10) with the defaults.
  int max_iter(std::size_t num_variables) const;

  /// Throws ConfigError when an invariant does not hold.
  void validate() const;

  /// Sets one field from its textual form; keys are the field names above.
  /// Throws ConfigError for unknown keys or unparsable values.
  void set(std::string_view key, std::string_view value);
};

}  // namespace varattack
