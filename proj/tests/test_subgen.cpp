#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "support/backends.hpp"
#include "support/corpus.hpp"
#include "varattack/lang/extract.hpp"
#include "varattack/lang/rename.hpp"
#include "varattack/subgen/subgen.hpp"
#include "varattack/surrogate/surrogate.hpp"

using namespace varattack;
using varattack::fixtures::binary;
using varattack::fixtures::ScriptedBackend;

namespace {

// Answers each single-occurrence request from a table keyed by byte_start.
ScriptedBackend by_occurrence(std::map<std::size_t, std::vector<SubstituteCandidate>> table) {
  return ScriptedBackend([](const std::string&) { return binary(0.9); },
                         [table](const gateway::SubstitutesRequest& req) {
                           gateway::RawSubstitutes out;
                           for (const auto& v : req.variables) {
                             auto it = table.find(v.occurrences.front().byte_start);
                             if (it != table.end()) out[v.name] = it->second;
                           }
                           return out;
                         });
}

}  // namespace

TEST(Subgen, UnionAcrossOccurrencesKeepsMax) {
  SourceUnit src{Language::C, "int y=0; return y;", "t"};
  auto be = by_occurrence({{4, {{"a", 0.9}}}, {16, {{"b", 0.8}, {"a", 0.7}}}});
  gateway::Gateway gw(be);
  auto vars = lang::extract_variables(src, {});
  auto subs = subgen::generate_substitutes(src, vars, {}, gw);
  EXPECT_EQ(subs.candidates("y").size(), 2u);
  EXPECT_EQ(subs.by_variable.at("y"),
            (std::vector<SubstituteCandidate>{{"a", 0.9}, {"b", 0.8}}));
  EXPECT_EQ(gw.mlm_count(), 2);
  ASSERT_EQ(be.requests.size(), 2u);
  for (const auto& r : be.requests) {
    ASSERT_EQ(r.variables.size(), 1u);
    EXPECT_EQ(r.variables[0].occurrences.size(), 1u);
    EXPECT_EQ(r.top_j, 60);
    EXPECT_EQ(r.top_k, 30);
  }
  EXPECT_EQ(gw.classify_count(), 0);
}

TEST(Subgen, FilterRemovesInvalidNames) {
  SourceUnit src{Language::C, "int f(void) { int y = 0; return y + g; }", "t"};
  auto be = by_occurrence({{18, {{"y", 1.0}, {"while", 0.95}, {"g", 0.9}, {"f", 0.85}, {"2x", 0.8},
                                 {"ok", 0.7}, {"Ok", 0.7}, {"ok", 0.6}}}});
  gateway::Gateway gw(be);
  auto vars = lang::extract_variables(src, {});
  auto subs = subgen::generate_substitutes(src, vars, {}, gw);
  EXPECT_EQ(subs.by_variable.at("y"), (std::vector<SubstituteCandidate>{{"Ok", 0.7}, {"ok", 0.7}}));
}

TEST(Subgen, TruncatesToTopKWithNameTieBreak) {
  auto filtered = subgen::filter_candidates(
      "v", std::vector<std::vector<SubstituteCandidate>>{{{"d", 0.5}, {"c", 0.5}}, {{"b", 0.9}, {"a", 0.1}}},
      {}, Language::C, 3);
  EXPECT_EQ(filtered, (std::vector<SubstituteCandidate>{{"b", 0.9}, {"c", 0.5}, {"d", 0.5}}));
  EXPECT_TRUE(subgen::filter_candidates("v", std::vector<std::vector<SubstituteCandidate>>{{{"a", 1}}}, {},
                                        Language::C, 0)
                  .empty());
}

TEST(Subgen, BufferGetsQueue) {
  std::ifstream in(VARATTACK_TEST_DATA "/monitor_flush.c");
  std::stringstream ss;
  ss << in.rdbuf();
  SourceUnit fig{Language::C, ss.str(), "fig"};
  surrogate::SurrogateBackend be(surrogate::Vocabulary({"buffers", "queue", "qmp_async_cmd_handler"}));
  gateway::Gateway gw(be);
  auto r = lang::Renamer::for_source(fig, {});
  auto subs = subgen::generate_substitutes(r, {}, gw);
  auto list = subs.candidates("buffer");
  auto has = [&](const char* n) {
    return std::any_of(list.begin(), list.end(), [&](const auto& c) { return c.name == n; });
  };
  EXPECT_TRUE(has("queue"));
  EXPECT_TRUE(has("buffers"));
  EXPECT_EQ(gw.mlm_count(), static_cast<long>(total_occurrences(r.variables())));
}

TEST(Subgen, CorpusInvariants) {
  surrogate::SurrogateBackend be(surrogate::Vocabulary(fixtures::test_vocabulary()));
  AttackConfig cfg;
  cfg.top_j = 12;
  cfg.top_k = 6;
  for (const auto& snip : fixtures::corpus()) {
    gateway::Gateway gw(be);
    auto r = lang::Renamer::for_source(snip.source, cfg);
    auto a = subgen::generate_substitutes(r, cfg, gw);
    EXPECT_EQ(a, subgen::generate_substitutes(r, cfg, gw));
    for (const auto& v : r.variables()) {
      auto list = a.candidates(v.name);
      EXPECT_LE(list.size(), 6u);
      for (std::size_t i = 0; i < list.size(); ++i) {
        EXPECT_NE(list[i].name, v.name);
        EXPECT_TRUE(lang::is_valid_substitute(list[i].name, snip.source, snip.source.language));
        if (i > 0) {
          EXPECT_GE(list[i - 1].similarity, list[i].similarity);
        }
        for (std::size_t j = 0; j < i; ++j) EXPECT_NE(list[i].name, list[j].name);
      }
    }
  }
}
