#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "support/backends.hpp"
#include "support/corpus.hpp"
#include "varattack/campaign/campaign.hpp"
#include "varattack/campaign/dataset.hpp"
#include "varattack/campaign/metrics.hpp"
#include "varattack/core/errors.hpp"
#include "varattack/gateway/replay.hpp"
#include "varattack/lang/parse_tree.hpp"
#include "varattack/surrogate/surrogate.hpp"

using namespace varattack;
using namespace varattack::campaign;
using varattack::fixtures::binary;
using varattack::fixtures::CountingBackend;
using varattack::fixtures::ScriptedBackend;

namespace {

OutcomeRecord outcome(std::string id, Verdict v, std::size_t m, std::size_t n, long q) {
  OutcomeRecord r{std::move(id), {}};
  r.outcome.verdict = v;
  r.outcome.num_variables = m;
  r.outcome.classify_queries = q;
  if (n > 0) {
    std::vector<Gene> genes;
    for (std::size_t i = 0; i < m; ++i) {
      std::string name = "v" + std::to_string(i);
      genes.push_back({name, i < n ? name + "_x" : name});
    }
    r.outcome.chromosome = Chromosome(std::move(genes));
  }
  return r;
}

std::vector<DatasetRecord> parse(const std::string& text) {
  std::istringstream in(text);
  return read_dataset(in);
}

std::vector<DatasetRecord> corpus_dataset(std::size_t stride = 5) {
  std::vector<DatasetRecord> out;
  auto all = fixtures::corpus();
  for (std::size_t i = 0; i < all.size(); i += stride) {
    const auto& s = all[i].source;
    out.push_back({s.origin_id, s.language, s.text, std::nullopt,
                   surrogate::surrogate_classify(s.text).label});
  }
  return out;
}

}  // namespace

TEST(Dataset, ReadsRecords) {
  auto recs = parse(
      "{\"id\":\"a\",\"language\":\"c\",\"code\":\"int y=0; return y;\",\"label\":1}\n"
      "\n"
      "{\"id\":\"b\",\"language\":\"java\",\"code\":\"class A {}\",\"code_pair\":\"class B {}\",\"label\":0}\n"
      "{\"id\":\"c\",\"language\":\"python\",\"code\":\"x = 1\\n\",\"code_pair\":null,\"label\":0,\"extra\":true}\n");
  ASSERT_EQ(recs.size(), 3u);
  EXPECT_EQ(recs[0].label, 1);
  EXPECT_EQ(recs[1].code_pair, "class B {}");
  EXPECT_EQ(recs[2].language, Language::Python);
  EXPECT_FALSE(recs[2].code_pair);
  std::ostringstream out;
  write_dataset(out, recs);
  EXPECT_EQ(parse(out.str()), recs);
}

TEST(Dataset, SchemaErrors) {
  EXPECT_THROW(parse("{not json}\n"), DatasetError);
  EXPECT_THROW(parse("[1]\n"), DatasetError);
  EXPECT_THROW(parse(R"({"id":"a","language":"c","code":"x"})"), DatasetError);
  EXPECT_THROW(parse(R"({"id":"a","language":"ruby","code":"x","label":0})"), DatasetError);
  EXPECT_THROW(parse(R"({"id":"a","language":"c","code":"x","label":-1})"), DatasetError);
  EXPECT_THROW(parse(R"({"id":"a","language":"c","code":"x","label":"0"})"), DatasetError);
  EXPECT_THROW(parse(R"({"id":1,"language":"c","code":"x","label":0})"), DatasetError);
  EXPECT_THROW(parse("{\"id\":\"a\",\"language\":\"c\",\"code\":\"x\",\"label\":0}\n"
                     "{\"id\":\"a\",\"language\":\"c\",\"code\":\"y\",\"label\":0}\n"),
               DatasetError);
  EXPECT_THROW(load_dataset("/nonexistent/d.jsonl"), DatasetError);
}

TEST(Outcomes, LineFormat) {
  OutcomeRecord r{"item-1", {}};
  r.outcome.verdict = Verdict::Success;
  r.outcome.stage = Stage::Greedy;
  r.outcome.adversarial = SourceUnit{Language::C, "int z=0; return z;", "item-1"};
  r.outcome.chromosome = Chromosome::parse("y:z,w:w");
  r.outcome.classify_queries = 7;
  r.outcome.mlm_queries = 2;
  r.outcome.num_variables = 2;
  EXPECT_EQ(encode_outcome(r),
            R"({"id":"item-1","verdict":"success","stage":"greedy","adversarial_code":"int z=0; return z;",)"
            R"("changes":[{"from":"y","to":"z"}],"classify_queries":7,"mlm_queries":2,"num_variables":2,)"
            R"("fallback_code":null,"fallback_confidence":null,"error":null})");
  auto back = decode_outcome(encode_outcome(r));
  EXPECT_EQ(back.id, "item-1");
  EXPECT_EQ(back.outcome.verdict, Verdict::Success);
  EXPECT_EQ(back.outcome.adversarial->text, "int z=0; return z;");
  EXPECT_EQ(back.outcome.chromosome->serialize(), "y:z");
  EXPECT_EQ(back.outcome.classify_queries, 7);
  EXPECT_EQ(encode_outcome(back), encode_outcome(r));
  EXPECT_THROW(decode_outcome("{}"), DatasetError);
}

TEST(Metrics, AsrOverAttackedItems) {
  std::vector<OutcomeRecord> o = {outcome("a", Verdict::Skipped, 2, 0, 1),
                                  outcome("b", Verdict::Success, 2, 1, 10),
                                  outcome("c", Verdict::Success, 3, 1, 20),
                                  outcome("d", Verdict::Failure, 4, 0, 30)};
  auto r = compute_metrics(o);
  EXPECT_EQ(r.attacked, 3u);
  EXPECT_EQ(r.succeeded, 2u);
  EXPECT_EQ(r.skipped, 1u);
  EXPECT_EQ(r.asr, 2.0 / 3.0);
  EXPECT_EQ(r.noq_total, 60);
  EXPECT_EQ(r.noq_mean, 20.0);
}

TEST(Metrics, VcrOverSucceededItems) {
  auto r = compute_metrics({outcome("a", Verdict::Success, 4, 1, 5), outcome("b", Verdict::Success, 6, 2, 5),
                            outcome("c", Verdict::Failure, 10, 0, 5)});
  EXPECT_EQ(r.vcr, 3.0 / 10.0);
  ASSERT_EQ(r.items.size(), 2u);
  EXPECT_EQ(r.items[1].m, 6u);
  EXPECT_EQ(r.items[1].n, 2u);
}

TEST(Metrics, EmptyDenominatorsAreZero) {
  auto r = compute_metrics({outcome("a", Verdict::Failure, 3, 0, 9), outcome("b", Verdict::Skipped, 0, 0, 0)});
  EXPECT_EQ(r.asr, 0.0);
  EXPECT_EQ(r.vcr, 0.0);
  auto none = compute_metrics({});
  EXPECT_EQ(none.asr, 0.0);
  EXPECT_EQ(none.noq_mean, 0.0);
}

TEST(Metrics, EverythingRenamedGivesOne) {
  auto r = compute_metrics({outcome("a", Verdict::Success, 2, 2, 5), outcome("b", Verdict::Success, 1, 1, 5)});
  EXPECT_EQ(r.vcr, 1.0);
  EXPECT_EQ(r.asr, 1.0);
}

TEST(Metrics, ReportRoundTripsThroughFiles) {
  std::vector<OutcomeRecord> o = {outcome("a", Verdict::Success, 4, 1, 11), outcome("b", Verdict::Failure, 2, 0, 13),
                                  outcome("c", Verdict::Skipped, 1, 0, 1)};
  auto r = compute_metrics(o);
  EXPECT_EQ(decode_report(encode_report(r)), r);
  std::stringstream ss;
  write_outcomes(ss, o);
  EXPECT_EQ(compute_metrics(read_outcomes(ss)), r);
}

TEST(Export, SelectionRules) {
  std::vector<DatasetRecord> train = {{"s", Language::C, "int a=0; return a;", std::nullopt, 0},
                                      {"ok", Language::C, "int b=0; return b;", std::nullopt, 1},
                                      {"fail", Language::C, "int c=0; return c;", std::nullopt, 0},
                                      {"none", Language::C, "int d=0; return d;", std::nullopt, 1}};
  std::vector<OutcomeRecord> outs(4);
  outs[0] = {"s", {}};  // Skipped
  outs[1] = {"ok", {}};
  outs[1].outcome.verdict = Verdict::Success;
  outs[1].outcome.adversarial = SourceUnit{Language::C, "int first=0; return first;", "ok"};
  outs[1].outcome.min_confidence_variant = TrackedVariant{{Language::C, "int lower=0; return lower;", "ok"}, {}, 0.1};
  outs[2] = {"fail", {}};
  outs[2].outcome.verdict = Verdict::Failure;
  outs[2].outcome.min_confidence_variant = TrackedVariant{{Language::C, "int cc=0; return cc;", "fail"}, {}, 0.51};
  outs[3] = {"none", {}};
  outs[3].outcome.verdict = Verdict::Failure;

  auto adv = adversarial_training_set(train, outs);
  ASSERT_EQ(adv.size(), 2u);
  EXPECT_EQ(adv[0].id, "ok");
  EXPECT_EQ(adv[0].code, "int first=0; return first;");
  EXPECT_EQ(adv[0].label, 1);
  EXPECT_EQ(adv[1].id, "fail");
  EXPECT_EQ(adv[1].code, "int cc=0; return cc;");
  EXPECT_EQ(adv[1].label, 0);

  // Same answer after a trip through the outcomes file.
  std::stringstream ss;
  write_outcomes(ss, outs);
  EXPECT_EQ(adversarial_training_set(train, read_outcomes(ss)), adv);
}

TEST(Config, FileSyntax) {
  AttackConfig cfg;
  apply_config_text("# comment\n top_k = 12  \n\ntop_j=20 # trailing\nseed = 7\nbudget = none\n", cfg);
  EXPECT_EQ(cfg.top_k, 12);
  EXPECT_EQ(cfg.top_j, 20);
  EXPECT_EQ(cfg.rng_seed, 7u);
  EXPECT_THROW(apply_config_text("top_k 12\n", cfg), ConfigError);
  EXPECT_THROW(apply_config_text("colour = blue\n", cfg), ConfigError);
  EXPECT_THROW(apply_config_file("/nonexistent.cfg", cfg), ConfigError);
}

TEST(Pipeline, SkipsMisclassifiedWithOneQuery) {
  surrogate::SurrogateBackend inner(surrogate::Vocabulary(fixtures::test_vocabulary()));
  CountingBackend be(inner);
  std::string code = "int f(void) { int y = 0; return y; }";
  int wrong = 1 - surrogate::surrogate_classify(code).label;
  auto o = attack_item({"m", Language::C, code, std::nullopt, wrong}, {}, be);
  EXPECT_EQ(o.verdict, Verdict::Skipped);
  EXPECT_EQ(o.classify_queries, 1);
  EXPECT_EQ(be.classify_calls, 1);
  EXPECT_EQ(be.substitutes_calls, 0);
}

TEST(Pipeline, SkipsWithoutVariablesOrParse) {
  surrogate::SurrogateBackend be(surrogate::Vocabulary(fixtures::test_vocabulary()));
  auto none = attack_item({"n", Language::C, "int f(int a) { return a + 1; }", std::nullopt, 0}, {}, be);
  EXPECT_EQ(none.verdict, Verdict::Skipped);
  EXPECT_EQ(none.classify_queries, 0);
  auto broken = attack_item({"b", Language::C, "int f( {", std::nullopt, 0}, {}, be);
  EXPECT_EQ(broken.verdict, Verdict::Skipped);
  EXPECT_EQ(broken.classify_queries, 0);
  EXPECT_FALSE(broken.error.empty());
}

TEST(Pipeline, BackendErrorsMarkTheItemOnly) {
  int calls = 0;
  ScriptedBackend flaky([&](const std::string&) -> Prediction {
    if (++calls > 3) throw TransportError("connection reset");
    return binary(0.9);
  });
  std::vector<DatasetRecord> recs = {{"x", Language::C, "int f(void) { int y = 0; return y; }", std::nullopt, 0},
                                     {"z", Language::C, "int f(void) { int y = 0; return y; }", std::nullopt, 0}};
  auto out = run_campaign(recs, {}, flaky);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].outcome.verdict, Verdict::Failure);
  EXPECT_TRUE(out[0].outcome.error.empty());
  EXPECT_EQ(out[1].outcome.verdict, Verdict::Failure);
  EXPECT_NE(out[1].outcome.error.find("connection reset"), std::string::npos);
}

TEST(Pipeline, BudgetEndsItemAsFailure) {
  surrogate::SurrogateBackend be(surrogate::Vocabulary(fixtures::test_vocabulary()));
  AttackConfig cfg;
  cfg.query_budget = 4;
  for (const auto& rec : corpus_dataset(10)) {
    auto o = attack_item(rec, cfg, be);
    if (o.verdict == Verdict::Failure) {
      EXPECT_TRUE(o.error.empty());
    }
    EXPECT_LE(o.classify_queries, 4);
  }
}

TEST(Pipeline, CampaignOverCorpus) {
  surrogate::SurrogateBackend inner(surrogate::Vocabulary(fixtures::test_vocabulary()));
  CountingBackend be(inner);
  AttackConfig cfg;
  cfg.top_k = 8;
  cfg.top_j = 8;
  auto recs = corpus_dataset();
  auto out = run_campaign(recs, cfg, be);
  ASSERT_EQ(out.size(), recs.size());
  long total = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(out[i].id, recs[i].id);
    const auto& o = out[i].outcome;
    total += o.classify_queries;
    EXPECT_NE(o.verdict, Verdict::Skipped);
    if (o.verdict == Verdict::Success) {
      ASSERT_TRUE(o.adversarial);
      SourceUnit orig{recs[i].language, recs[i].code, recs[i].id};
      EXPECT_NE(surrogate::surrogate_classify(o.adversarial->text).label, recs[i].label);
      EXPECT_TRUE(lang::parse_equivalent(lang::ParseTree::parse(orig), lang::ParseTree::parse(*o.adversarial)));
    }
  }
  EXPECT_EQ(total, be.classify_calls);
  auto report = compute_metrics(out);
  EXPECT_GT(report.succeeded, 0u);
}

TEST(Pipeline, DeterministicAcrossRunsAndWorkerCounts) {
  surrogate::SurrogateBackend be(surrogate::Vocabulary(fixtures::test_vocabulary()));
  AttackConfig cfg;
  cfg.rng_seed = 7;
  cfg.top_k = 6;
  cfg.top_j = 6;
  auto recs = corpus_dataset(3);
  auto encode = [&](int jobs) {
    std::ostringstream ss;
    CampaignOptions opts;
    opts.jobs = jobs;
    write_outcomes(ss, run_campaign(recs, cfg, be, opts));
    return ss.str();
  };
  const std::string one = encode(1);
  EXPECT_EQ(one, encode(1));
  EXPECT_EQ(one, encode(4));
}

TEST(Pipeline, ClonePairPerturbsFirstSnippetOnly) {
  std::vector<std::pair<std::string, std::optional<std::string>>> seen;
  ScriptedBackend be([](const std::string& code) {
    return binary(code.find("zz") != std::string::npos ? 0.2 : 0.9);
  }, [](const gateway::SubstitutesRequest& req) {
    gateway::RawSubstitutes out;
    for (const auto& v : req.variables) out[v.name] = {{"zz", 0.9}};
    return out;
  });
  CountingBackend counting(be);
  std::string pair = "int g(void) { int q = 1; return q; }";
  struct PairSpy : gateway::Backend {
    gateway::Backend& inner;
    std::string pair;
    bool pair_unchanged = true;
    explicit PairSpy(gateway::Backend& b, std::string p) : inner(b), pair(std::move(p)) {}
    Prediction classify(const std::string& code, const std::optional<std::string>& cp) override {
      if (!cp || *cp != pair) pair_unchanged = false;
      return inner.classify(code, cp);
    }
    gateway::RawSubstitutes substitutes(const gateway::SubstitutesRequest& r) override { return inner.substitutes(r); }
    gateway::HealthInfo health() override { return inner.health(); }
  } spy(counting, pair);
  auto o = attack_item({"p", Language::C, "int f(void) { int y = 0; return y; }", pair, 0}, {}, spy);
  EXPECT_EQ(o.verdict, Verdict::Success);
  EXPECT_TRUE(spy.pair_unchanged);
  EXPECT_EQ(o.adversarial->text, "int f(void) { int zz = 0; return zz; }");
}

TEST(Pipeline, ReplayedSubstitutesGiveIdenticalOutcomes) {
  surrogate::SurrogateBackend be(surrogate::Vocabulary(fixtures::test_vocabulary()));
  AttackConfig cfg;
  cfg.top_k = 5;
  cfg.top_j = 5;
  auto recs = corpus_dataset(7);
  gateway::SubstitutesCache cache;
  gateway::ReplayBackend recorder(be, cache, gateway::ReplayBackend::Mode::Record);
  std::ostringstream live;
  write_outcomes(live, run_campaign(recs, cfg, recorder));

  auto path = std::filesystem::temp_directory_path() / "varattack_campaign_cache.json";
  cache.save(path.string());
  auto loaded = gateway::SubstitutesCache::load(path.string());
  surrogate::SurrogateBackend classify_only;  // no vocabulary: substitutes must come from the cache
  gateway::ReplayBackend replay(classify_only, loaded, gateway::ReplayBackend::Mode::Replay);
  std::ostringstream replayed;
  write_outcomes(replayed, run_campaign(recs, cfg, replay));
  EXPECT_EQ(live.str(), replayed.str());
  std::filesystem::remove(path);
}
