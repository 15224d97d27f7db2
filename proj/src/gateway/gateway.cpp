#include "varattack/gateway/gateway.hpp"

#include <cmath>

#include "varattack/core/errors.hpp"

namespace varattack::gateway {

void QueryLedger::charge_classify() {
  long current = classify_.load();
  do {
    if (budget_ && current >= *budget_) {
      throw BudgetExhausted("classify budget of " + std::to_string(*budget_) + " queries exhausted");
    }
  } while (!classify_.compare_exchange_weak(current, current + 1));
}

Gateway::Gateway(Backend& backend, GatewayOptions options)
    : backend_(backend), options_(options), ledger_(options.budget) {}

template <typename Fn>
auto Gateway::with_retries(Fn&& fn) -> decltype(fn()) {
  for (int attempt = 0;; ++attempt) {
    try {
      return fn();
    } catch (const TransportError&) {
      if (attempt >= options_.transport_retries) throw;
    }
  }
}

Prediction Gateway::classify(const SourceUnit& src, const SourceUnit* pair) {
  ledger_.charge_classify();
  std::optional<std::string> pair_text;
  if (pair) pair_text = pair->text;
  Prediction p = with_retries([&] { return backend_.classify(src.text, pair_text); });
  if (auto why = prediction_violation(p)) throw ProtocolError("invalid prediction: " + *why);
  std::size_t expected = 0;
  if (!width_.compare_exchange_strong(expected, p.confidences.size()) &&
      expected != p.confidences.size()) {
    throw ProtocolError("prediction width changed from " + std::to_string(expected) + " to " +
                        std::to_string(p.confidences.size()));
  }
  return p;
}

RawSubstitutes Gateway::mlm_substitutes(const SourceUnit& src, std::span<const Identifier> vars,
                                        int top_j, int top_k) {
  RawSubstitutes out;
  for (const auto& v : vars) out[v.name];
  if (top_k <= 0 || vars.empty()) return out;

  SubstitutesRequest req{src.text, top_j, top_k, {vars.begin(), vars.end()}};
  ledger_.charge_mlm();
  RawSubstitutes raw = with_retries([&] { return backend_.substitutes(req); });
  for (auto& [name, list] : raw) {
    auto slot = out.find(name);
    if (slot == out.end()) throw ProtocolError("substitutes for unrequested variable '" + name + "'");
    if (list.size() > static_cast<std::size_t>(top_k)) {
      throw ProtocolError("more than top_k substitutes for '" + name + "'");
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i].name.empty() || !std::isfinite(list[i].similarity)) {
        throw ProtocolError("malformed substitute for '" + name + "'");
      }
      if (i > 0 && list[i].similarity > list[i - 1].similarity) {
        throw ProtocolError("substitutes for '" + name + "' are not in descending order");
      }
    }
    slot->second = std::move(list);
  }
  return out;
}

}  // namespace varattack::gateway
