#include "varattack/campaign/campaign.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "varattack/core/errors.hpp"
#include "varattack/core/rng.hpp"
#include "varattack/ga/ga.hpp"
#include "varattack/gateway/gateway.hpp"
#include "varattack/greedy/greedy.hpp"
#include "varattack/lang/rename.hpp"
#include "varattack/subgen/subgen.hpp"

namespace varattack::campaign {

AttackOutcome attack_item(const DatasetRecord& record, const AttackConfig& cfg,
                          gateway::Backend& backend, int transport_retries) {
  AttackOutcome out;
  SourceUnit src{record.language, record.code, record.id};
  std::optional<SourceUnit> pair;
  if (record.code_pair) pair = SourceUnit{record.language, *record.code_pair, record.id};
  const SourceUnit* pair_ptr = pair ? &*pair : nullptr;

  std::optional<lang::Renamer> renamer;
  try {
    renamer.emplace(lang::Renamer::for_source(src, cfg));
  } catch (const ParseError& e) {
    out.error = e.what();
    return out;
  }
  out.num_variables = renamer->variables().size();
  if (renamer->variables().empty()) return out;

  gateway::Gateway gw(backend, {cfg.query_budget, transport_retries});
  auto settle = [&](AttackOutcome o) {
    o.classify_queries = gw.classify_count();
    o.mlm_queries = gw.mlm_count();
    o.num_variables = renamer->variables().size();
    return o;
  };

  try {
    Prediction base = gw.classify(src, pair_ptr);
    if (base.label != record.label) {
      out.verdict = Verdict::Skipped;
      return settle(std::move(out));
    }
    if (static_cast<std::size_t>(record.label) >= base.confidences.size()) {
      throw DatasetError("label " + std::to_string(record.label) + " outside the victim's classes");
    }
    out.verdict = Verdict::Failure;
    SubstituteSet subs = subgen::generate_substitutes(*renamer, cfg, gw);
    auto ranking = greedy::rank_variables(src, renamer->variables(), record.label, base,
                                          cfg.mask_token, gw, pair_ptr);
    auto g = greedy::greedy_attack(*renamer, record.label, subs, ranking, cfg, gw, pair_ptr);
    if (g.outcome.verdict == Verdict::Success || g.budget_exhausted) return settle(std::move(g.outcome));

    Rng rng = seeded_rng(cfg.rng_seed, record.id);
    auto ga_res = ga::ga_attack(*renamer, record.label, subs, g, base.confidence(record.label), cfg,
                                gw, rng, pair_ptr);
    return settle(std::move(ga_res.outcome));
  } catch (const BudgetExhausted& e) {
    out.verdict = Verdict::Failure;
    return settle(std::move(out));
  } catch (const Error& e) {
    out.verdict = Verdict::Failure;
    out.error = e.what();
    return settle(std::move(out));
  }
}

std::vector<OutcomeRecord> run_campaign(const std::vector<DatasetRecord>& records,
                                        const AttackConfig& cfg, gateway::Backend& backend,
                                        const CampaignOptions& options) {
  cfg.validate();
  std::vector<OutcomeRecord> results(records.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < records.size();) {
      results[i] = {records[i].id, attack_item(records[i], cfg, backend, options.transport_retries)};
      if (options.on_item) options.on_item(results[i]);
    }
  };
  const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(records.size())));
  if (jobs == 1) {
    worker();
    return results;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return results;
}

void apply_config_text(std::string_view text, AttackConfig& cfg) {
  std::istringstream in{std::string(text)};
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const char* ws = " \t\r";
      auto b = s.find_first_not_of(ws);
      if (b == std::string::npos) return std::string();
      return s.substr(b, s.find_last_not_of(ws) - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void apply_config_file(const std::string& path, AttackConfig& cfg) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  apply_config_text(ss.str(), cfg);
}

}  // namespace varattack::campaign
