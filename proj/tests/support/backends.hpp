#pragma once

#include <atomic>
#include <functional>
#include <mutex>
#include <string>
#include <vector>

#include "varattack/gateway/backend.hpp"

namespace varattack::fixtures {

/// Forwards to `inner` and counts what actually reached it.
class CountingBackend : public gateway::Backend {
 public:
  explicit CountingBackend(gateway::Backend& inner) : inner_(inner) {}

  Prediction classify(const std::string& code, const std::optional<std::string>& pair) override {
    ++classify_calls;
    return inner_.classify(code, pair);
  }
  gateway::RawSubstitutes substitutes(const gateway::SubstitutesRequest& req) override {
    ++substitutes_calls;
    return inner_.substitutes(req);
  }
  gateway::HealthInfo health() override { return inner_.health(); }
  bool stateless() const override { return inner_.stateless(); }

  std::atomic<long> classify_calls{0};
  std::atomic<long> substitutes_calls{0};

 private:
  gateway::Backend& inner_;
};

/// Backend driven by callables; records every request it sees.
class ScriptedBackend : public gateway::Backend {
 public:
  using ClassifyFn = std::function<Prediction(const std::string&)>;
  using SubstitutesFn = std::function<gateway::RawSubstitutes(const gateway::SubstitutesRequest&)>;

  ScriptedBackend(ClassifyFn c, SubstitutesFn s = {}) : classify_(std::move(c)), subs_(std::move(s)) {}

  Prediction classify(const std::string& code, const std::optional<std::string>&) override {
    std::lock_guard lock(mu_);
    classified.push_back(code);
    return classify_(code);
  }
  gateway::RawSubstitutes substitutes(const gateway::SubstitutesRequest& req) override {
    std::lock_guard lock(mu_);
    requests.push_back(req);
    return subs_ ? subs_(req) : gateway::RawSubstitutes{};
  }
  gateway::HealthInfo health() override { return {"ok", "scripted"}; }

  std::vector<std::string> classified;
  std::vector<gateway::SubstitutesRequest> requests;

 private:
  std::mutex mu_;
  ClassifyFn classify_;
  SubstitutesFn subs_;
};

inline Prediction binary(double p0) {
  return Prediction{p0 >= 1.0 - p0 ? 0 : 1, {p0, 1.0 - p0}};
}

}  // namespace varattack::fixtures
