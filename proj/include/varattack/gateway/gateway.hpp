#pragma once

#include <atomic>
#include <cstddef>
#include <optional>
#include <span>

#include "varattack/core/types.hpp"
#include "varattack/gateway/backend.hpp"

namespace varattack::gateway {

/// Victim and MLM query counters. Only classify calls count toward the
/// budget; never caches, so every call is one query.
class QueryLedger {
 public:
  explicit QueryLedger(std::optional<long> budget = std::nullopt) : budget_(budget) {}

  long classify_count() const { return classify_.load(); }
  long mlm_count() const { return mlm_.load(); }
  std::optional<long> budget() const { return budget_; }

  /// Reserves one classify query; throws BudgetExhausted when the budget is
  /// already spent.
  void charge_classify();
  void charge_mlm() { mlm_.fetch_add(1); }

 private:
  std::atomic<long> classify_{0};
  std::atomic<long> mlm_{0};
  std::optional<long> budget_;
};

struct GatewayOptions {
  std::optional<long> budget;
  /// Extra attempts after a TransportError. Retries do not touch the ledger.
  int transport_retries = 0;
};

class Gateway {
 public:
  explicit Gateway(Backend& backend, GatewayOptions options = {});

  /// One victim query. `pair` is the unperturbed second snippet of a
  /// clone-detection input. Throws BudgetExhausted, TransportError, or
  /// ProtocolError (malformed or non-normalized prediction).
  Prediction classify(const SourceUnit& src, const SourceUnit* pair = nullptr);

  /// One MLM query covering `vars`; returns raw candidates per variable,
  /// at most top_k each in descending score order.
  RawSubstitutes mlm_substitutes(const SourceUnit& src, std::span<const Identifier> vars, int top_j,
                                 int top_k);

  const QueryLedger& ledger() const { return ledger_; }
  long classify_count() const { return ledger_.classify_count(); }
  long mlm_count() const { return ledger_.mlm_count(); }
  Backend& backend() { return backend_; }

 private:
  template <typename Fn>
  auto with_retries(Fn&& fn) -> decltype(fn());

  Backend& backend_;
  GatewayOptions options_;
  QueryLedger ledger_;
  std::atomic<std::size_t> width_{0};
};

}  // namespace varattack::gateway
