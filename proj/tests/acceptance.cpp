// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// The oracles below re-derive surrogate scores, masking and renaming from the
// raw text and never call the engine's own scoring or rewriting code.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support/backends.hpp"
#include "support/corpus.hpp"
#include "varattack/campaign/campaign.hpp"
#include "varattack/campaign/dataset.hpp"
#include "varattack/campaign/metrics.hpp"
#include "varattack/core/config.hpp"
#include "varattack/core/rng.hpp"
#include "varattack/ga/ga.hpp"
#include "varattack/gateway/gateway.hpp"
#include "varattack/gateway/replay.hpp"
#include "varattack/greedy/greedy.hpp"
#include "varattack/lang/parse_tree.hpp"
#include "varattack/lang/rename.hpp"
#include "varattack/subgen/subgen.hpp"
#include "varattack/surrogate/surrogate.hpp"

using namespace varattack;
using fixtures::binary;
using fixtures::CountingBackend;
using fixtures::ScriptedBackend;

namespace {

// ---- oracle -----------------------------------------------------------------

double oracle_weight(const std::string& tok) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : tok) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return (static_cast<int>(h % 2001) - 1000) / 1000.0;
}

double oracle_score(const std::string& text) {
  double s = 0.0;
  std::string tok;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    char c = i < text.size() ? text[i] : ' ';
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      tok += c;
    } else if (!tok.empty()) {
      s += oracle_weight(tok);
      tok.clear();
    }
  }
  return s;
}

double oracle_confidence(const std::string& text, int y) {
  double s = oracle_score(text);
  return y == 0 ? 1.0 / (1.0 + std::exp(-2.0 * s)) : 1.0 / (1.0 + std::exp(2.0 * s));
}

int oracle_label(const std::string& text) {
  return oracle_confidence(text, 1) > oracle_confidence(text, 0) ? 1 : 0;
}

std::string oracle_rename(const std::string& text, const std::vector<Identifier>& vars,
                          const std::map<std::string, std::string>& to) {
  std::vector<std::pair<OccurrenceSpan, std::string>> edits;
  for (const auto& v : vars) {
    auto it = to.find(v.name);
    if (it == to.end() || it->second == v.name) continue;
    for (const auto& o : v.occurrences) edits.emplace_back(o, it->second);
  }
  std::sort(edits.begin(), edits.end(), [](auto& a, auto& b) { return a.first.byte_start > b.first.byte_start; });
  std::string out = text;
  for (const auto& [span, name] : edits) out.replace(span.byte_start, span.size(), name);
  return out;
}

// ---- fixtures ---------------------------------------------------------------

std::vector<std::string> vocabulary_file() {
  std::ifstream in(VARATTACK_DATA_DIR "/vocab.txt");
  std::vector<std::string> words;
  for (std::string w; std::getline(in, w);) {
    if (!w.empty()) words.push_back(w);
  }
  return words;
}

struct Fixture {
  std::string id;
  SourceUnit src;
  int y = 0;
  std::unique_ptr<surrogate::SurrogateBackend> backend;
};

// 50 snippets from the template corpus, each with its own sixteen-word
// vocabulary, attacked with top_k = top_j = 5.
std::vector<Fixture> surrogate_fixtures() {
  auto all = fixtures::corpus();
  auto words = vocabulary_file();
  std::mt19937_64 gen(20240611);
  std::vector<Fixture> out;
  for (int i = 0; i < 50; ++i) {
    const auto& snip = all[gen() % all.size()];
    std::vector<std::string> vocab;
    std::sample(words.begin(), words.end(), std::back_inserter(vocab), 16, gen);
    Fixture f;
    f.id = "fx" + std::to_string(i) + "-" + snip.source.origin_id;
    f.src = snip.source;
    f.src.origin_id = f.id;
    f.y = oracle_label(f.src.text);
    f.backend = std::make_unique<surrogate::SurrogateBackend>(surrogate::Vocabulary(vocab));
    out.push_back(std::move(f));
  }
  return out;
}

AttackConfig small_config() {
  AttackConfig cfg;
  cfg.top_k = 5;
  cfg.top_j = 5;
  return cfg;
}

// Label 0 everywhere with confidence in (0.55, 0.95), substitutes from `inner`.
std::unique_ptr<ScriptedBackend> never_flip(gateway::Backend& inner) {
  return std::make_unique<ScriptedBackend>(
      [](const std::string& code) { return binary(0.75 + 0.2 * std::tanh(oracle_score(code))); },
      [&inner](const gateway::SubstitutesRequest& r) { return inner.substitutes(r); });
}

// ---- reporting --------------------------------------------------------------

int failures = 0;

void report(const char* name, bool ok, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---- criteria ---------------------------------------------------------------

void oracle_soundness(const std::vector<Fixture>& fx) {
  auto t0 = std::chrono::steady_clock::now();
  const AttackConfig cfg = small_config();
  int violations = 0, flippable = 0, found = 0, oversize = 0;
  for (const auto& f : fx) {
    auto renamer = lang::Renamer::for_source(f.src, cfg);
    const auto& vars = renamer.variables();
    if (vars.size() > 3) ++oversize;

    gateway::Gateway gw(*f.backend);
    SubstituteSet subs = subgen::generate_substitutes(renamer, cfg, gw);

    // Every assignment of (original name or candidate) to each variable.
    std::vector<std::vector<std::string>> choices;
    for (const auto& v : vars) {
      std::vector<std::string> c = {v.name};
      for (const auto& s : subs.candidates(v.name)) c.push_back(s.name);
      if (c.size() > 6) ++oversize;
      choices.push_back(std::move(c));
    }
    bool exists = false;
    std::vector<std::size_t> idx(vars.size(), 0);
    for (;;) {
      std::map<std::string, std::string> to;
      std::set<std::string> final_names;
      for (std::size_t i = 0; i < vars.size(); ++i) {
        to[vars[i].name] = choices[i][idx[i]];
        final_names.insert(choices[i][idx[i]]);
      }
      if (final_names.size() == vars.size() && oracle_label(oracle_rename(f.src.text, vars, to)) != f.y) {
        exists = true;
        break;
      }
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == choices[k].size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }

    auto o = campaign::attack_item({f.id, f.src.language, f.src.text, std::nullopt, f.y}, cfg, *f.backend);
    if (o.verdict == Verdict::Success) {
      bool ok = exists && o.adversarial && o.chromosome;
      if (ok) {
        std::map<std::string, std::string> to;
        for (const auto& g : o.chromosome->genes()) to[g.variable] = g.substitute;
        ok = oracle_rename(f.src.text, vars, to) == o.adversarial->text &&
             oracle_label(o.adversarial->text) != f.y;
      }
      if (!ok) ++violations;
    }
    if (exists) {
      ++flippable;
      if (o.verdict == Verdict::Success) ++found;
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double rate = flippable ? static_cast<double>(found) / flippable : 1.0;
  report("oracle_soundness",
         violations == 0 && oversize == 0 && rate >= 0.90 && secs < 60.0 && flippable > 0,
         fmt("%zu fixtures, %d violations, flip found in %d/%d flippable (%.1f%%, need >= 90%%), "
             "%d oversize, %.2fs (limit 60s)",
             fx.size(), violations, found, flippable, 100.0 * rate, oversize, secs));
}

void ois_correctness(const std::vector<Fixture>& fx) {
  const AttackConfig cfg = small_config();
  double worst = 0.0;
  int bad_counts = 0, bad_order = 0;
  std::size_t values = 0;
  for (const auto& f : fx) {
    auto renamer = lang::Renamer::for_source(f.src, cfg);
    const auto& vars = renamer.variables();
    CountingBackend counting(*f.backend);
    gateway::Gateway gw(counting);
    auto ranking = greedy::rank_variables(f.src, vars, f.y, cfg.mask_token, gw);

    long occurrences = 0;
    const double base = oracle_confidence(f.src.text, f.y);
    std::vector<std::pair<double, std::size_t>> expected_order;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      const auto& got = ranking.scores[i];
      double ois = 0.0;
      for (std::size_t j = 0; j < vars[i].occurrences.size(); ++j) {
        const auto& o = vars[i].occurrences[j];
        std::string masked = f.src.text;
        masked.replace(o.byte_start, o.size(), cfg.mask_token);
        double is = base - oracle_confidence(masked, f.y);
        ois += is;
        worst = std::max(worst, j < got.importance.size() ? std::abs(got.importance[j] - is) : INFINITY);
        ++values;
        ++occurrences;
      }
      worst = std::max(worst, std::abs(got.ois - ois));
      if (got.importance.size() != vars[i].occurrences.size() || got.variable != vars[i].name) worst = INFINITY;
      ++values;
      expected_order.emplace_back(ois, i);
    }
    std::stable_sort(expected_order.begin(), expected_order.end(), [&](auto& a, auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return vars[a.second].first_offset() < vars[b.second].first_offset();
    });
    for (std::size_t r = 0; r < expected_order.size(); ++r) {
      if (ranking.order.size() != expected_order.size() || ranking.order[r] != expected_order[r].second) {
        ++bad_order;
        break;
      }
    }
    if (counting.classify_calls != 1 + occurrences || gw.classify_count() != 1 + occurrences) ++bad_counts;
  }
  report("ois_correctness", worst <= 1e-12 && bad_counts == 0 && bad_order == 0,
         fmt("%zu values, max |delta| %.3g (limit 1e-12), %d query-count mismatches, %d order mismatches",
             values, worst, bad_counts, bad_order));
}

void query_bounds(const std::vector<Fixture>& fx) {
  int runs = 0, greedy_over = 0, ga_over = 0, ledger_mismatch = 0, ga_runs = 0;
  long greedy_max_slack = -1, ga_max_slack = -1;
  auto one_run = [&](gateway::Backend& backend, const SourceUnit& src, int y, const AttackConfig& cfg,
                     std::uint64_t seed) {
    CountingBackend counting(backend);
    gateway::Gateway gw(counting);
    auto renamer = lang::Renamer::for_source(src, cfg);
    const auto& vars = renamer.variables();
    ++runs;
    Prediction base = gw.classify(src);
    if (base.label == y && !vars.empty()) {
      auto subs = subgen::generate_substitutes(renamer, cfg, gw);
      auto ranking = greedy::rank_variables(src, vars, y, base, cfg.mask_token, gw);
      long c0 = gw.classify_count();
      auto g = greedy::greedy_attack(renamer, y, subs, ranking, cfg, gw);
      long greedy_delta = gw.classify_count() - c0;
      long verify = g.outcome.verdict == Verdict::Success ? 1 : 0;
      long bound = static_cast<long>(vars.size()) * cfg.top_k;
      if (greedy_delta - verify > bound || greedy_delta - verify != g.phase_queries) ++greedy_over;
      greedy_max_slack = std::max(greedy_max_slack, greedy_delta - verify);
      if (g.outcome.verdict != Verdict::Success) {
        ++ga_runs;
        Rng rng = seeded_rng(seed, src.origin_id);
        long c1 = gw.classify_count();
        auto r = ga::ga_attack(renamer, y, subs, g, base.confidence(y), cfg, gw, rng);
        long ga_delta = gw.classify_count() - c1;
        long v2 = r.outcome.verdict == Verdict::Success ? 1 : 0;
        long ga_bound = static_cast<long>(cfg.max_iter(vars.size())) * cfg.child_size;
        if (ga_delta - v2 > ga_bound || ga_delta - v2 != r.phase_queries) ++ga_over;
        ga_max_slack = std::max(ga_max_slack, ga_delta - v2);
      }
    }
    if (counting.classify_calls != gw.classify_count() || counting.substitutes_calls != gw.mlm_count()) {
      ++ledger_mismatch;
    }
  };

  std::uint64_t seed = 1;
  for (const auto& f : fx) {
    for (int top_k : {5, 2}) {
      AttackConfig cfg = small_config();
      cfg.top_k = top_k;
      cfg.child_size = 16;
      one_run(*f.backend, f.src, f.y, cfg, seed++);
      auto nf = never_flip(*f.backend);
      one_run(*nf, f.src, 0, cfg, seed++);
    }
  }
  // Whole-pipeline ledger against the mock, default settings, full vocabulary.
  surrogate::SurrogateBackend full{surrogate::Vocabulary(vocabulary_file())};
  int item_mismatch = 0;
  for (const auto& snip : fixtures::corpus()) {
    CountingBackend counting(full);
    auto o = campaign::attack_item({snip.source.origin_id, snip.source.language, snip.source.text, std::nullopt,
                                    oracle_label(snip.source.text)},
                                   AttackConfig{}, counting);
    if (o.classify_queries != counting.classify_calls || o.mlm_queries != counting.substitutes_calls) {
      ++item_mismatch;
    }
  }
  report("query_bounds", greedy_over == 0 && ga_over == 0 && ledger_mismatch == 0 && item_mismatch == 0,
         fmt("%d phase runs (%d with GA): %d greedy over vars*top_k, %d GA over generations*child_size, "
             "%d ledger mismatches; %d/150 pipeline ledger mismatches",
             runs, ga_runs, greedy_over, ga_over, ledger_mismatch, item_mismatch));
}

void semantics_preservation() {
  surrogate::SurrogateBackend backend{surrogate::Vocabulary(vocabulary_file())};
  int emitted = 0, adversarial = 0, broken = 0;
  auto corpus = fixtures::corpus();
  for (const auto& snip : corpus) {
    const auto& src = snip.source;
    auto o = campaign::attack_item({src.origin_id, src.language, src.text, std::nullopt, oracle_label(src.text)},
                                   AttackConfig{}, backend);
    auto original = lang::ParseTree::parse(src);
    std::vector<const SourceUnit*> outputs;
    if (o.adversarial) {
      outputs.push_back(&*o.adversarial);
      ++adversarial;
    }
    if (o.min_confidence_variant) outputs.push_back(&o.min_confidence_variant->code);
    for (const auto* out : outputs) {
      ++emitted;
      bool same = out->text != src.text;
      try {
        same = same && lang::parse_equivalent(original, lang::ParseTree::parse(*out));
      } catch (const std::exception&) {
        same = false;
      }
      if (!same) ++broken;
    }
  }
  report("semantics_preservation", broken == 0 && adversarial > 0,
         fmt("%zu snippets, %d emitted examples (%d adversarial), %d not parse-equivalent",
             corpus.size(), emitted, adversarial, broken));
}

void ga_elitism(const std::vector<Fixture>& fx) {
  int runs = 0, regressions = 0, generations = 0, skipped = 0;
  for (int run = 0; run < 200; ++run) {
    const auto& f = fx[run % fx.size()];
    AttackConfig cfg = small_config();
    cfg.child_size = 8 + run % 24;
    cfg.rng_seed = 1000 + run;
    std::unique_ptr<ScriptedBackend> nf;
    gateway::Backend* backend = f.backend.get();
    int y = f.y;
    if (run % 2 == 1) {
      nf = never_flip(*f.backend);
      backend = nf.get();
      y = 0;
    }
    gateway::Gateway gw(*backend);
    auto renamer = lang::Renamer::for_source(f.src, cfg);
    const auto& vars = renamer.variables();
    Prediction base = gw.classify(f.src);
    auto subs = subgen::generate_substitutes(renamer, cfg, gw);
    if (base.label != y || !subs.any_candidates()) {
      ++skipped;
      continue;
    }
    auto ranking = greedy::rank_variables(f.src, vars, y, base, cfg.mask_token, gw);
    auto g = greedy::greedy_attack(renamer, y, subs, ranking, cfg, gw);
    Rng rng = seeded_rng(cfg.rng_seed, f.id);
    auto r = ga::ga_attack(renamer, y, subs, g, base.confidence(y), cfg, gw, rng);
    ++runs;
    generations += static_cast<int>(r.generations);
    for (std::size_t i = 1; i < r.best_fitness.size(); ++i) {
      if (r.best_fitness[i] < r.best_fitness[i - 1]) {
        ++regressions;
        break;
      }
    }
  }
  report("ga_elitism", regressions == 0 && runs == 200,
         fmt("%d seeded runs (%d not runnable), %d generations total, %d runs with a fitness drop",
             runs, skipped, generations, regressions));
}

campaign::OutcomeRecord hand_outcome(const char* id, Verdict v, std::size_t m, std::size_t n, long q) {
  campaign::OutcomeRecord r{id, {}};
  r.outcome.verdict = v;
  r.outcome.num_variables = m;
  r.outcome.classify_queries = q;
  std::vector<Gene> genes;
  for (std::size_t i = 0; i < m; ++i) {
    std::string name = "v" + std::to_string(i);
    genes.push_back({name, i < n ? "w" + std::to_string(i) : name});
  }
  if (v == Verdict::Success) r.outcome.chromosome = Chromosome(std::move(genes));
  return r;
}

void metrics_exactness() {
  // asr = 2/4, vcr = (1 + 2) / (4 + 6), NoQ over the four attacked items.
  std::vector<campaign::OutcomeRecord> five = {
      hand_outcome("s1", Verdict::Success, 4, 1, 10), hand_outcome("s2", Verdict::Success, 6, 2, 20),
      hand_outcome("f1", Verdict::Failure, 3, 0, 30), hand_outcome("f2", Verdict::Failure, 5, 0, 40),
      hand_outcome("k1", Verdict::Skipped, 2, 0, 1)};
  auto r = campaign::compute_metrics(five);
  bool ok = r.asr == 0.5 && r.vcr == 0.3 && r.noq_total == 100 && r.noq_mean == 25.0 && r.attacked == 4 &&
            r.succeeded == 2 && r.skipped == 1;

  // No successes: vcr is 0/0, reported as 0.
  std::vector<campaign::OutcomeRecord> none = {
      hand_outcome("f1", Verdict::Failure, 4, 0, 10), hand_outcome("f2", Verdict::Failure, 6, 0, 20),
      hand_outcome("f3", Verdict::Failure, 3, 0, 30), hand_outcome("f4", Verdict::Failure, 5, 0, 40),
      hand_outcome("k1", Verdict::Skipped, 2, 0, 1)};
  auto z = campaign::compute_metrics(none);
  bool zero_ok = z.vcr == 0.0 && z.asr == 0.0 && z.noq_total == 100 && z.noq_mean == 25.0;

  // And the same numbers after the outcomes file and report serialisation.
  std::stringstream ss;
  campaign::write_outcomes(ss, five);
  bool file_ok = campaign::compute_metrics(campaign::read_outcomes(ss)) == r &&
                 campaign::decode_report(campaign::encode_report(r)) == r;
  report("metrics_exactness", ok && zero_ok && file_ok,
         fmt("asr %.17g (want 0.5), vcr %.17g (want 0.3), noq %ld/%.17g (want 100/25); "
             "no-success vcr %.17g (want 0); file round trip %s",
             r.asr, r.vcr, r.noq_total, r.noq_mean, z.vcr, file_ok ? "equal" : "differs"));
}

void determinism() {
  std::vector<campaign::DatasetRecord> records = campaign::load_dataset(VARATTACK_DATA_DIR "/sample.jsonl");
  for (const auto& snip : fixtures::corpus()) {
    records.push_back({snip.source.origin_id, snip.source.language, snip.source.text, std::nullopt,
                       oracle_label(snip.source.text)});
  }
  AttackConfig cfg;
  cfg.rng_seed = 20240611;
  cfg.child_size = 24;

  surrogate::SurrogateBackend live{surrogate::Vocabulary(vocabulary_file())};
  gateway::SubstitutesCache recording;
  gateway::ReplayBackend recorder(live, recording, gateway::ReplayBackend::Mode::Record);
  campaign::run_campaign(records, cfg, recorder);
  auto path = std::filesystem::temp_directory_path() / "varattack_acceptance_substitutes.json";
  recording.save(path.string());

  auto replay = [&](int jobs) {
    auto cache = gateway::SubstitutesCache::load(path.string());
    surrogate::SurrogateBackend classify_only;
    gateway::ReplayBackend be(classify_only, cache, gateway::ReplayBackend::Mode::Replay);
    campaign::CampaignOptions opts;
    opts.jobs = jobs;
    std::ostringstream out;
    campaign::write_outcomes(out, campaign::run_campaign(records, cfg, be, opts));
    return out.str();
  };
  const std::string first = replay(4);
  const std::string second = replay(4);
  const std::string serial = replay(1);
  std::filesystem::remove(path);
  report("determinism", first == second && first == serial && !first.empty(),
         fmt("%zu items, %zu cached requests, outcomes %zu bytes; repeat %s, single-worker %s",
             records.size(), recording.size(), first.size(), first == second ? "identical" : "DIFFERS",
             first == serial ? "identical" : "DIFFERS"));
}

void defaults_audit() {
  const AttackConfig cfg;
  bool ok = cfg.top_j == 60 && cfg.top_k == 30 && cfg.child_size == 64 && cfg.crossover_rate == 0.7;
  std::string limits;
  for (std::size_t vars : {1, 2, 3, 4, 7, 20}) {
    int want = std::max(5 * static_cast<int>(vars), 10);
    ok = ok && cfg.max_iter(vars) == want;
    limits += fmt(" %zu->%d", vars, cfg.max_iter(vars));
  }
  report("defaults_audit", ok,
         fmt("top_j %d, top_k %d, child_size %d, r %.17g, max_iter%s", cfg.top_j, cfg.top_k, cfg.child_size,
             cfg.crossover_rate, limits.c_str()));
}

}  // namespace

int main() {
  auto fx = surrogate_fixtures();
  oracle_soundness(fx);
  ois_correctness(fx);
  query_bounds(fx);
  semantics_preservation();
  ga_elitism(fx);
  metrics_exactness();
  determinism();
  defaults_audit();
  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
