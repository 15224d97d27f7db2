#include "varattack/campaign/metrics.hpp"

#include <json.hpp>

#include "varattack/core/errors.hpp"

namespace varattack::campaign {

MetricsReport compute_metrics(const std::vector<OutcomeRecord>& outcomes) {
  MetricsReport r;
  std::size_t sum_m = 0;
  std::size_t sum_n = 0;
  for (const auto& rec : outcomes) {
    const AttackOutcome& o = rec.outcome;
    if (o.verdict == Verdict::Skipped) {
      ++r.skipped;
      continue;
    }
    ++r.attacked;
    r.noq_total += o.classify_queries;
    if (o.verdict != Verdict::Success) continue;
    ++r.succeeded;
    ItemChangeRate item{rec.id, o.num_variables, o.chromosome ? o.chromosome->changed_count() : 0};
    sum_m += item.m;
    sum_n += item.n;
    r.items.push_back(std::move(item));
  }
  if (r.attacked > 0) {
    r.asr = static_cast<double>(r.succeeded) / static_cast<double>(r.attacked);
    r.noq_mean = static_cast<double>(r.noq_total) / static_cast<double>(r.attacked);
  }
  if (sum_m > 0) r.vcr = static_cast<double>(sum_n) / static_cast<double>(sum_m);
  return r;
}

std::string encode_report(const MetricsReport& r) {
  nlohmann::ordered_json j;
  j["asr"] = r.asr;
  j["vcr"] = r.vcr;
  j["noq_total"] = r.noq_total;
  j["noq_mean"] = r.noq_mean;
  j["counts"] = {{"attacked", r.attacked}, {"succeeded", r.succeeded}, {"skipped", r.skipped}};
  auto items = nlohmann::ordered_json::array();
  for (const auto& i : r.items) items.push_back({{"id", i.id}, {"m", i.m}, {"n", i.n}});
  j["items"] = std::move(items);
  return j.dump(2);
}

MetricsReport decode_report(std::string_view text) {
  try {
    auto j = nlohmann::json::parse(text);
    MetricsReport r;
    r.asr = j.at("asr").get<double>();
    r.vcr = j.at("vcr").get<double>();
    r.noq_total = j.at("noq_total").get<long>();
    r.noq_mean = j.at("noq_mean").get<double>();
    r.attacked = j.at("counts").at("attacked").get<std::size_t>();
    r.succeeded = j.at("counts").at("succeeded").get<std::size_t>();
    r.skipped = j.at("counts").at("skipped").get<std::size_t>();
    for (const auto& i : j.at("items")) {
      r.items.push_back({i.at("id").get<std::string>(), i.at("m").get<std::size_t>(),
                         i.at("n").get<std::size_t>()});
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DatasetError(std::string("report: ") + e.what());
  }
}

}  // namespace varattack::campaign
