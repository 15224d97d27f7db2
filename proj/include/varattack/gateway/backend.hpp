#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "varattack/core/types.hpp"

namespace varattack::gateway {

struct SubstitutesRequest {
  std::string code;
  int top_j = 0;
  int top_k = 0;
  std::vector<Identifier> variables;

  friend bool operator==(const SubstitutesRequest&, const SubstitutesRequest&) = default;
};

/// Raw, unfiltered candidates keyed by variable name.
using RawSubstitutes = std::map<std::string, std::vector<SubstituteCandidate>>;

struct HealthInfo {
  std::string status;
  std::string model;
};

/// A victim classifier plus substitute provider. Implementations may be
/// remote (HttpBackend) or in-process (surrogate); attack code only ever sees
/// this interface through a Gateway.
class Backend {
 public:
  virtual ~Backend() = default;

  virtual Prediction classify(const std::string& code, const std::optional<std::string>& code_pair) = 0;
  virtual RawSubstitutes substitutes(const SubstitutesRequest& request) = 0;
  virtual HealthInfo health() = 0;

  /// True when responses depend only on the request, so calls may be issued
  /// concurrently without changing results.
  virtual bool stateless() const { return false; }
};

}  // namespace varattack::gateway
