#include "varattack/core/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>

#include "varattack/core/errors.hpp"

namespace varattack {
namespace {

template <typename Int>
Int parse_int(std::string_view key, std::string_view value) {
  Int out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError("invalid integer for '" + std::string(key) + "': '" + std::string(value) + "'");
  }
  return out;
}

double parse_real(std::string_view key, std::string_view value) {
  std::string buf(value);
  char* end = nullptr;
  double out = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size()) {
    throw ConfigError("invalid number for '" + std::string(key) + "': '" + buf + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("invalid boolean for '" + std::string(key) + "': '" + std::string(value) + "'");
}

}  // namespace

int AttackConfig::max_iter(std::size_t num_variables) const {
  return std::max(max_iter_per_variable * static_cast<int>(num_variables), min_max_iter);
}

void AttackConfig::validate() const {
  if (top_j < 0 || top_k < 0) throw ConfigError("top_j and top_k must be non-negative");
  if (top_k > top_j) throw ConfigError("top_k must not exceed top_j");
  if (child_size < 1) throw ConfigError("child_size must be at least 1");
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) {
    throw ConfigError("crossover_rate must lie in [0, 1]");
  }
  if (max_iter_per_variable < 0 || min_max_iter < 0) {
    throw ConfigError("generation limits must be non-negative");
  }
  if (mask_token.empty()) throw ConfigError("mask_token must not be empty");
  if (query_budget && *query_budget < 0) throw ConfigError("query_budget must be non-negative");
}

void AttackConfig::set(std::string_view key, std::string_view value) {
  if (key == "top_j") {
    top_j = parse_int<int>(key, value);
  } else if (key == "top_k") {
    top_k = parse_int<int>(key, value);
  } else if (key == "child_size") {
    child_size = parse_int<int>(key, value);
  } else if (key == "crossover_rate" || key == "r") {
    crossover_rate = parse_real(key, value);
  } else if (key == "max_iter_per_variable") {
    max_iter_per_variable = parse_int<int>(key, value);
  } else if (key == "min_max_iter") {
    min_max_iter = parse_int<int>(key, value);
  } else if (key == "mask_token") {
    mask_token = std::string(value);
  } else if (key == "rng_seed" || key == "seed") {
    rng_seed = parse_int<std::uint64_t>(key, value);
  } else if (key == "query_budget" || key == "budget") {
    if (value == "none" || value.empty()) {
      query_budget.reset();
    } else {
      query_budget = parse_int<long>(key, value);
    }
  } else if (key == "include_parameters") {
    include_parameters = parse_bool(key, value);
  } else {
    throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  }
}

}  // namespace varattack
