#pragma once

#include <functional>
#include <string>
#include <vector>

#include "varattack/campaign/dataset.hpp"
#include "varattack/core/config.hpp"
#include "varattack/gateway/backend.hpp"

namespace varattack::campaign {

struct CampaignOptions {
  int jobs = 1;
  int transport_retries = 0;
  /// Called after each item completes, from the worker that ran it.
  std::function<void(const OutcomeRecord&)> on_item;
};

/// Full pipeline for one record against a fresh per-item query ledger:
/// extract, baseline, substitutes, ranking, greedy, then GA if greedy failed.
/// Backend errors end the item as Failure with `error` set.
AttackOutcome attack_item(const DatasetRecord& record, const AttackConfig& cfg,
                          gateway::Backend& backend, int transport_retries = 0);

/// Outcomes in dataset order whatever the number of workers.
std::vector<OutcomeRecord> run_campaign(const std::vector<DatasetRecord>& records,
                                        const AttackConfig& cfg, gateway::Backend& backend,
                                        const CampaignOptions& options = {});

/// `key = value` lines, '#' starts a comment. Keys as in AttackConfig::set.
void apply_config_file(const std::string& path, AttackConfig& cfg);
void apply_config_text(std::string_view text, AttackConfig& cfg);

}  // namespace varattack::campaign
