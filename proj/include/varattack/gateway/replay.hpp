#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "varattack/gateway/backend.hpp"

namespace varattack::gateway {

/// Recorded substitutes traffic. On disk: a JSON array of
/// {"request": <substitutes request>, "response": <substitutes response>}
/// objects using the wire schemas, sorted by the request's encoding.
class SubstitutesCache {
 public:
  SubstitutesCache() = default;
  SubstitutesCache(SubstitutesCache&& other) noexcept : entries_(std::move(other.entries_)) {}
  SubstitutesCache& operator=(SubstitutesCache&& other) noexcept {
    if (this != &other) {
      std::scoped_lock lock(mu_, other.mu_);
      entries_ = std::move(other.entries_);
    }
    return *this;
  }

  static SubstitutesCache load(const std::string& path);
  void save(const std::string& path) const;

  std::optional<RawSubstitutes> lookup(const SubstitutesRequest& request) const;
  void insert(const SubstitutesRequest& request, const RawSubstitutes& response);
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::string> entries_;  // encoded request -> encoded response
};

/// Classifies through `inner`; substitutes come from the cache. In record
/// mode misses are forwarded to `inner` and stored, in replay mode a miss is
/// a ProtocolError.
class ReplayBackend : public Backend {
 public:
  enum class Mode { Replay, Record };

  ReplayBackend(Backend& inner, SubstitutesCache& cache, Mode mode)
      : inner_(inner), cache_(cache), mode_(mode) {}

  Prediction classify(const std::string& code, const std::optional<std::string>& code_pair) override {
    return inner_.classify(code, code_pair);
  }
  RawSubstitutes substitutes(const SubstitutesRequest& request) override;
  HealthInfo health() override { return inner_.health(); }
  bool stateless() const override { return inner_.stateless(); }

 private:
  Backend& inner_;
  SubstitutesCache& cache_;
  Mode mode_;
};

}  // namespace varattack::gateway
