#pragma once

#include <string>
#include <vector>

#include "varattack/campaign/dataset.hpp"

namespace varattack::campaign {

struct ItemChangeRate {
  std::string id;
  std::size_t m = 0;  // local variables
  std::size_t n = 0;  // variables renamed in the adversarial example

  friend bool operator==(const ItemChangeRate&, const ItemChangeRate&) = default;
};

struct MetricsReport {
  double asr = 0.0;
  double vcr = 0.0;
  long noq_total = 0;
  double noq_mean = 0.0;
  std::size_t attacked = 0;
  std::size_t succeeded = 0;
  std::size_t skipped = 0;
  std::vector<ItemChangeRate> items;  // succeeded items

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// asr = succeeded / attacked; vcr = sum n / sum m over succeeded items;
/// NoQ over attacked (non-skipped) items. Empty denominators give 0.
MetricsReport compute_metrics(const std::vector<OutcomeRecord>& outcomes);

std::string encode_report(const MetricsReport& r);
MetricsReport decode_report(std::string_view json);

}  // namespace varattack::campaign
