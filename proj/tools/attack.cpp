// attack: run a renaming-attack campaign over a JSONL dataset.
//
//   attack --dataset items.jsonl --backend surrogate --out results/
//   attack --dataset items.jsonl --backend http://127.0.0.1:8080 --budget 2000
//
// Exit status: 0 ok, 1 usage or config error, 2 dataset error, 3 backend
// unreachable.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "varattack/campaign/campaign.hpp"
#include "varattack/campaign/metrics.hpp"
#include "varattack/core/errors.hpp"
#include "varattack/gateway/http.hpp"
#include "varattack/gateway/replay.hpp"
#include "varattack/surrogate/surrogate.hpp"

namespace fs = std::filesystem;
using namespace varattack;

namespace {

constexpr int kUsage = 1;
constexpr int kDataset = 2;
constexpr int kBackend = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variable-renaming adversarial attack against code classifiers"};
  std::string dataset_path;
  std::string backend_spec = "surrogate";
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::optional<long> budget;
  std::string export_path;
  std::string vocab_path = VARATTACK_DEFAULT_VOCAB;
  std::string cache_path;
  std::string record_path;
  int jobs = 1;
  int retries = 0;
  bool include_parameters = false;
  bool quiet = false;

  app.add_option("--dataset", dataset_path, "JSONL dataset")->required();
  app.add_option("--backend", backend_spec, "'surrogate' or http://host:port")->capture_default_str();
  app.add_option("--config", config_path, "key = value file of attack settings");
  app.add_option("--seed", seed, "global RNG seed");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--budget", budget, "classify queries per item");
  app.add_option("--export-adv", export_path, "write the adversarial training set here");
  app.add_option("--vocab", vocab_path, "surrogate vocabulary")->capture_default_str();
  auto* replay = app.add_option("--substitutes-cache", cache_path, "replay recorded substitutes");
  app.add_option("--record-substitutes", record_path, "record substitutes traffic to this file")
      ->excludes(replay);
  app.add_option("--jobs", jobs, "parallel items")->check(CLI::PositiveNumber);
  app.add_option("--retries", retries, "transport retries per query")->check(CLI::NonNegativeNumber);
  app.add_flag("--include-parameters", include_parameters, "treat formal parameters as variables");
  app.add_flag("-q,--quiet", quiet, "no progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kUsage;
  }

  AttackConfig cfg;
  try {
    if (!config_path.empty()) campaign::apply_config_file(config_path, cfg);
    if (seed) cfg.rng_seed = *seed;
    if (budget) cfg.query_budget = *budget;
    if (include_parameters) cfg.include_parameters = true;
    cfg.validate();
  } catch (const ConfigError& e) {
    std::cerr << "attack: " << e.what() << "\n";
    return kUsage;
  }

  std::vector<campaign::DatasetRecord> records;
  try {
    records = campaign::load_dataset(dataset_path);
  } catch (const DatasetError& e) {
    std::cerr << "attack: " << e.what() << "\n";
    return kDataset;
  }

  std::unique_ptr<gateway::Backend> inner;
  try {
    if (backend_spec == "surrogate" && !cache_path.empty()) {
      inner = std::make_unique<surrogate::SurrogateBackend>();  // substitutes come from the cache
    } else if (backend_spec == "surrogate") {
      inner = std::make_unique<surrogate::SurrogateBackend>(surrogate::Vocabulary::load(vocab_path));
    } else {
      inner = std::make_unique<gateway::HttpBackend>(backend_spec);
    }
    auto h = inner->health();
    if (h.status != "ok") throw TransportError("backend reports status '" + h.status + "'");
    if (!quiet) std::cerr << "backend: " << h.model << "\n";
  } catch (const MissingVocabulary& e) {
    std::cerr << "attack: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "attack: backend unreachable: " << e.what() << "\n";
    return kBackend;
  }

  gateway::SubstitutesCache cache;
  std::unique_ptr<gateway::ReplayBackend> replaying;
  gateway::Backend* backend = inner.get();
  try {
    if (!cache_path.empty()) {
      cache = gateway::SubstitutesCache::load(cache_path);
      replaying = std::make_unique<gateway::ReplayBackend>(*inner, cache, gateway::ReplayBackend::Mode::Replay);
    } else if (!record_path.empty()) {
      replaying = std::make_unique<gateway::ReplayBackend>(*inner, cache, gateway::ReplayBackend::Mode::Record);
    }
  } catch (const Error& e) {
    std::cerr << "attack: " << e.what() << "\n";
    return kUsage;
  }
  if (replaying) backend = replaying.get();

  campaign::CampaignOptions opts;
  opts.jobs = jobs;
  opts.transport_retries = retries;
  std::atomic<std::size_t> done{0};
  if (!quiet) {
    opts.on_item = [&](const campaign::OutcomeRecord& r) {
      std::cerr << "[" << ++done << "/" << records.size() << "] " << r.id << " "
                << to_string(r.outcome.verdict) << "\n";
    };
  }
  auto outcomes = campaign::run_campaign(records, cfg, *backend, opts);
  auto report = campaign::compute_metrics(outcomes);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  {
    std::ofstream out(fs::path(out_dir) / "outcomes.jsonl", std::ios::binary | std::ios::trunc);
    campaign::write_outcomes(out, outcomes);
    std::ofstream rep(fs::path(out_dir) / "report.json", std::ios::binary | std::ios::trunc);
    rep << campaign::encode_report(report) << "\n";
    if (!out || !rep) {
      std::cerr << "attack: cannot write to " << out_dir << "\n";
      return kUsage;
    }
  }
  try {
    if (!export_path.empty()) campaign::export_adv_training_set(records, outcomes, export_path);
    if (!record_path.empty()) cache.save(record_path);
  } catch (const Error& e) {
    std::cerr << "attack: " << e.what() << "\n";
    return kUsage;
  }

  std::cout << "attacked " << report.attacked << ", succeeded " << report.succeeded << ", skipped "
            << report.skipped << "\nasr " << report.asr << "  vcr " << report.vcr << "  noq_mean "
            << report.noq_mean << "\n";
  return 0;
}
