#include <gtest/gtest.h>

#include <cmath>

#include "support/backends.hpp"
#include "varattack/core/errors.hpp"
#include "varattack/greedy/greedy.hpp"
#include "varattack/lang/extract.hpp"
#include "varattack/lang/rename.hpp"
#include "varattack/surrogate/surrogate.hpp"

using namespace varattack;
using varattack::fixtures::binary;
using varattack::fixtures::CountingBackend;
using varattack::fixtures::ScriptedBackend;

namespace {

SourceUnit c(std::string text) { return {Language::C, std::move(text), "t"}; }

double p0(const std::string& code) { return surrogate::surrogate_classify(code).confidences[0]; }

// Substitutes for every variable from a fixed list.
SubstituteSet subs_for(const std::vector<Identifier>& vars, std::vector<std::vector<std::string>> lists) {
  SubstituteSet s;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    double score = 1.0;
    for (const auto& n : lists[i]) s.by_variable[vars[i].name].push_back({n, score -= 0.01});
  }
  return s;
}

}  // namespace

TEST(Importance, MaskEqualToNameIsZero) {
  auto src = c("int y=0; return y;");
  surrogate::SurrogateBackend be;
  gateway::Gateway gw(be);
  auto base = gw.classify(src);
  auto occ = lang::extract_variables(src, {})[0].occurrences[0];
  EXPECT_EQ(greedy::importance_score(src, occ, 0, base, "y", gw), 0.0);
  EXPECT_EQ(gw.classify_count(), 2);
}

TEST(Importance, HandEvaluatedSurrogateGap) {
  auto src = c("int y=0; return y;");
  surrogate::SurrogateBackend be;
  gateway::Gateway gw(be);
  auto base = gw.classify(src);
  auto occ = lang::extract_variables(src, {})[0].occurrences[0];
  double is = greedy::importance_score(src, occ, 0, base, "<unk>", gw);
  EXPECT_NEAR(is, 0.9263549127742439 - 0.862237551464515, 1e-15);
  EXPECT_DOUBLE_EQ(is, p0("int y=0; return y;") - p0("int <unk>=0; return y;"));
  EXPECT_GE(is, -1.0);
  EXPECT_LE(is, 1.0);
}

TEST(Ranking, OisIsTheSumInOccurrenceOrder) {
  auto src = c("int f(void) { int v = 1; v = v + 1; return 0; }");
  auto vars = lang::extract_variables(src, {});
  ASSERT_EQ(vars[0].occurrences.size(), 3u);
  const double is[] = {0.1, -0.02, 0.05};
  ScriptedBackend be([&](const std::string& code) {
    for (int i = 0; i < 3; ++i) {
      if (code == lang::mask_occurrence(src, vars[0].occurrences[i], "<unk>").text) return binary(0.9 - is[i]);
    }
    return binary(0.9);
  });
  gateway::Gateway gw(be);
  auto r = greedy::rank_variables(src, vars, 0, "<unk>", gw);
  ASSERT_EQ(r.scores.size(), 1u);
  EXPECT_NEAR(r.scores[0].ois, 0.13, 1e-15);
  EXPECT_EQ(r.scores[0].ois, r.scores[0].importance[0] + r.scores[0].importance[1] + r.scores[0].importance[2]);
  EXPECT_EQ(gw.classify_count(), 4);
}

TEST(Ranking, TiesBreakByFirstOccurrence) {
  auto src = c("int f(void) { int b = 1; int a = 2; return a + b; }");
  auto vars = lang::extract_variables(src, {});
  ASSERT_EQ(vars.size(), 2u);
  ScriptedBackend be([](const std::string& code) {
    return binary(code.find("<unk>") == std::string::npos ? 0.9 : 0.8);
  });
  gateway::Gateway gw(be);
  auto r = greedy::rank_variables(src, vars, 0, "<unk>", gw);
  EXPECT_EQ(r.scores[0].ois, r.scores[1].ois);
  EXPECT_EQ(r.ranked(0).variable, "b");
  EXPECT_EQ(r.ranked(1).variable, "a");
}

TEST(Ranking, MatchesBruteForceRecomputation) {
  auto src = c("int f(int n) { int a = n; int b = a + 1; int c = b * 2; return a + c; }");
  auto vars = lang::extract_variables(src, {});
  ASSERT_EQ(vars.size(), 3u);
  ASSERT_EQ(total_occurrences(vars), 7u);
  surrogate::SurrogateBackend inner;
  CountingBackend be(inner);
  gateway::Gateway gw(be);
  const int y = surrogate::surrogate_classify(src.text).label;
  auto r = greedy::rank_variables(src, vars, y, "<unk>", gw);
  EXPECT_EQ(gw.classify_count(), 8);
  EXPECT_EQ(be.classify_calls, 8);

  const double base = surrogate::surrogate_classify(src.text).confidences[y];
  std::vector<std::pair<double, std::size_t>> expected;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    double ois = 0.0;
    for (std::size_t k = 0; k < vars[i].occurrences.size(); ++k) {
      const auto& o = vars[i].occurrences[k];
      std::string masked = src.text.substr(0, o.byte_start) + "<unk>" + src.text.substr(o.byte_end);
      double is = base - surrogate::surrogate_classify(masked).confidences[y];
      EXPECT_NEAR(r.scores[i].importance[k], is, 1e-12);
      ois += is;
    }
    EXPECT_NEAR(r.scores[i].ois, ois, 1e-12);
    expected.push_back({-ois, vars[i].first_offset()});
  }
  std::sort(expected.begin(), expected.end());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    EXPECT_EQ(r.ranked(i).first_offset, expected[i].second);
  }
}

TEST(Greedy, EmptySubstitutesFailWithoutQueries) {
  auto src = c("int f(void) { int y = 0; return y; }");
  surrogate::SurrogateBackend be;
  gateway::Gateway gw(be);
  auto r = lang::Renamer::for_source(src, {});
  auto rank = greedy::rank_variables(src, r.variables(), 0, "<unk>", gw);
  long before = gw.classify_count();
  auto g = greedy::greedy_attack(r, 0, SubstituteSet{}, rank, {}, gw);
  EXPECT_EQ(g.outcome.verdict, Verdict::Failure);
  EXPECT_FALSE(g.outcome.adversarial);
  EXPECT_EQ(g.phase_queries, 0);
  EXPECT_EQ(gw.classify_count(), before);
}

TEST(Greedy, EngineeredFlipInFirstIteration) {
  auto src = c("int f(void) { int y = 0; return y; }");
  const int y = surrogate::surrogate_classify(src.text).label;
  // Scan generated names for the first that moves the label.
  std::string flip;
  for (int i = 0; i < 5000 && flip.empty(); ++i) {
    std::string name = "v" + std::to_string(i);
    auto renamed = lang::rename(src, Chromosome::parse("y:" + name));
    if (surrogate::surrogate_classify(renamed.text).label != y) flip = name;
  }
  ASSERT_FALSE(flip.empty());
  std::vector<std::string> stay;
  for (int i = 0; stay.size() < 4; ++i) {
    std::string name = "w" + std::to_string(i);
    if (surrogate::surrogate_classify(lang::rename(src, Chromosome::parse("y:" + name)).text).label == y) {
      stay.push_back(name);
    }
  }
  auto r = lang::Renamer::for_source(src, {});
  auto subs = subs_for(r.variables(), {{stay[0], stay[1], flip, stay[2], stay[3]}});

  surrogate::SurrogateBackend inner;
  CountingBackend be(inner);
  gateway::Gateway gw(be);
  auto rank = greedy::rank_variables(src, r.variables(), y, "<unk>", gw);
  auto g = greedy::greedy_attack(r, y, subs, rank, {}, gw);
  EXPECT_EQ(g.outcome.verdict, Verdict::Success);
  EXPECT_EQ(g.outcome.stage, Stage::Greedy);
  ASSERT_TRUE(g.outcome.adversarial);
  EXPECT_EQ(g.outcome.chromosome->serialize(), "y:" + flip);
  EXPECT_NE(surrogate::surrogate_classify(g.outcome.adversarial->text).label, y);
  EXPECT_EQ(g.phase_queries, 3);
  EXPECT_LE(g.phase_queries, 5);
  EXPECT_EQ(gw.classify_count(), 1 + 2 + 3 + 1);  // baseline, masks, candidates, verification
  EXPECT_EQ(be.classify_calls, gw.classify_count());
}

TEST(Greedy, CommitIsArgminAndConfidenceNeverRises) {
  auto src = c("int f(int n) { int a = n; int b = a + 1; int c = b * 2; return a + c; }");
  const int y = surrogate::surrogate_classify(src.text).label;
  auto r = lang::Renamer::for_source(src, {});
  std::vector<std::vector<std::string>> lists = {{"p1", "p2", "p3", "p4"}, {"q1", "q2", "q3"}, {"r1", "r2"}};
  auto subs = subs_for(r.variables(), lists);

  // Never flips: confidence on y stays above one half.
  ScriptedBackend be([y](const std::string& code) {
    double s = std::tanh(surrogate::score(code));
    double conf = 0.75 + 0.2 * s;
    return y == 0 ? binary(conf) : binary(1.0 - conf);
  });
  gateway::Gateway gw(be);
  auto rank = greedy::rank_variables(src, r.variables(), y, "<unk>", gw);
  auto g = greedy::greedy_attack(r, y, subs, rank, {}, gw);
  EXPECT_EQ(g.outcome.verdict, Verdict::Failure);
  EXPECT_EQ(g.phase_queries, 9);
  ASSERT_EQ(g.committed_confidence.size(), 4u);
  for (std::size_t i = 1; i < g.committed_confidence.size(); ++i) {
    EXPECT_LE(g.committed_confidence[i], g.committed_confidence[i - 1]);
    for (const auto& e : g.evaluations) {
      if (e.round + 1 == i) {
        EXPECT_LE(g.committed_confidence[i], e.confidence);
      }
    }
  }
  EXPECT_EQ(g.best_substitutes.size(), 3u);
  ASSERT_TRUE(g.outcome.min_confidence_variant);
  EXPECT_LE(g.committed_confidence.back(), g.outcome.min_confidence_variant->confidence);
}

TEST(Greedy, SkipsCandidatesCollidingWithEarlierCommits) {
  auto src = c("int f(void) { int a = 1; int b = 2; return a + b; }");
  auto r = lang::Renamer::for_source(src, {});
  auto subs = subs_for(r.variables(), {{"q"}, {"q", "s"}});
  // Renaming to q lowers confidence; nothing flips.
  ScriptedBackend be([](const std::string& code) {
    return binary(code.find(" q") != std::string::npos ? 0.6 : 0.9);
  });
  gateway::Gateway gw(be);
  auto rank = greedy::rank_variables(src, r.variables(), 0, "<unk>", gw);
  auto g = greedy::greedy_attack(r, 0, subs, rank, {}, gw);
  EXPECT_EQ(g.phase_queries, 2);  // b:q collides with the committed a:q
  EXPECT_EQ(g.outcome.chromosome->serialize(), "a:q,b:b");
}

TEST(Greedy, UnverifiedFlipIsNotReported) {
  auto src = c("int f(void) { int a = 1; return a; }");
  auto r = lang::Renamer::for_source(src, {});
  auto subs = subs_for(r.variables(), {{"z"}});
  int flips_left = 1;
  ScriptedBackend be([&](const std::string& code) {
    if (code.find(" z") != std::string::npos && flips_left-- > 0) return binary(0.2);
    return binary(0.9);
  });
  gateway::Gateway gw(be);
  auto rank = greedy::rank_variables(src, r.variables(), 0, "<unk>", gw);
  auto g = greedy::greedy_attack(r, 0, subs, rank, {}, gw);
  EXPECT_EQ(g.outcome.verdict, Verdict::Failure);
  EXPECT_EQ(g.phase_queries, 1);
  EXPECT_EQ(gw.classify_count(), 1 + 2 + 1 + 1);
}

TEST(Greedy, BudgetExhaustionIsFailure) {
  auto src = c("int f(void) { int a = 1; return a; }");
  auto r = lang::Renamer::for_source(src, {});
  auto subs = subs_for(r.variables(), {{"z1", "z2", "z3", "z4"}});
  ScriptedBackend be([](const std::string&) { return binary(0.9); });
  gateway::Gateway gw(be, {5, 0});
  auto rank = greedy::rank_variables(src, r.variables(), 0, "<unk>", gw);
  auto g = greedy::greedy_attack(r, 0, subs, rank, {}, gw);
  EXPECT_TRUE(g.budget_exhausted);
  EXPECT_EQ(g.outcome.verdict, Verdict::Failure);
  EXPECT_EQ(g.phase_queries, 2);
  EXPECT_EQ(gw.classify_count(), 5);
}
