#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "support/corpus.hpp"
#include "varattack/core/errors.hpp"
#include "varattack/gateway/wire.hpp"
#include "varattack/surrogate/surrogate.hpp"

using namespace varattack;
using namespace varattack::surrogate;

// Expected values come from a separate Python evaluation of the scorer.
TEST(Surrogate, TokenWeights) {
  EXPECT_EQ(token_weight("int"), 0.305);
  EXPECT_EQ(token_weight("y"), 0.705);
  EXPECT_EQ(token_weight("return"), -0.396);
  EXPECT_EQ(token_weight("0"), -0.053);
  EXPECT_EQ(token_weight("z"), 0.117);
  EXPECT_EQ(token_weight("unk"), 0.356);
  EXPECT_EQ(token_weight("buffer"), -0.57);
}

TEST(Surrogate, Tokenizer) {
  auto t = tokenize("int y=0; return <unk>+a_b9;");
  std::vector<std::string_view> want = {"int", "y", "0", "return", "unk", "a_b9"};
  EXPECT_EQ(t, want);
  EXPECT_TRUE(tokenize("  ;;<>{}").empty());
}

TEST(Surrogate, HandEvaluatedPrediction) {
  auto p = surrogate_classify("int y=0; return y;");
  const double s = 0.305 + 0.705 + -0.053 + -0.396 + 0.705;
  EXPECT_DOUBLE_EQ(score("int y=0; return y;"), s);
  EXPECT_EQ(p.label, 0);
  EXPECT_NEAR(p.confidences[0], std::exp(s) / (std::exp(s) + std::exp(-s)), 1e-15);
  EXPECT_NEAR(p.confidences[0], 0.9263549127742439, 1e-15);
  EXPECT_NEAR(p.confidences[1], 0.07364508722575624, 1e-15);
}

TEST(Surrogate, EmptyTokenStreamIsATie) {
  auto p = surrogate_classify("");
  EXPECT_EQ(p.confidences[0], 0.5);
  EXPECT_EQ(p.confidences[1], 0.5);
  EXPECT_EQ(p.label, 0);
  EXPECT_EQ(surrogate_classify("{ ; }").label, 0);
}

TEST(Surrogate, RenamingShiftsScoreLinearly) {
  double before = score("int y=0; return y;");
  double after = score("int z=0; return z;");
  EXPECT_NEAR(after - before, 2 * (token_weight("z") - token_weight("y")), 1e-12);
}

TEST(Surrogate, PairAddsSecondSnippet) {
  EXPECT_EQ(surrogate_classify("int a;", std::string("int b;")), surrogate_classify("int a; int b;"));
}

TEST(Surrogate, PredictionsAlwaysValid) {
  for (const auto& s : fixtures::corpus()) {
    EXPECT_FALSE(prediction_violation(surrogate_classify(s.source.text)));
  }
  std::string many(5000, 'a');
  for (std::size_t i = 0; i < many.size(); i += 2) many[i] = ' ';
  EXPECT_FALSE(prediction_violation(surrogate_classify(many)));
}

TEST(Surrogate, Dice) {
  EXPECT_DOUBLE_EQ(dice_bigrams("buffer", "buffers"), 10.0 / 11.0);
  EXPECT_EQ(dice_bigrams("buffer", "queue"), 0.0);
  EXPECT_DOUBLE_EQ(dice_bigrams("buffer", "qmp_async_cmd_handler"), 0.08);
  EXPECT_EQ(dice_bigrams("buffer", "x"), 0.0);
  EXPECT_EQ(dice_bigrams("x", "x"), 1.0);
  EXPECT_EQ(dice_bigrams("x", "y"), 0.0);
  EXPECT_EQ(dice_bigrams("abab", "abab"), 1.0);
  // multiset: "aaa" has {aa, aa}; "aa" has {aa}
  EXPECT_DOUBLE_EQ(dice_bigrams("aaa", "aa"), 2.0 / 3.0);
}

TEST(Surrogate, SubstitutesRanking) {
  Vocabulary vocab({"x", "queue", "buffers"});
  gateway::SubstitutesRequest req{"char *buffer;", 60, 30, {{"buffer", {{6, 12}}}}};
  auto out = surrogate_substitutes(req, vocab);
  ASSERT_EQ(out.at("buffer").size(), 3u);
  EXPECT_EQ(out.at("buffer")[0].name, "buffers");
  EXPECT_EQ(out.at("buffer")[1].name, "queue");  // tie at 0 broken lexicographically
  EXPECT_EQ(out.at("buffer")[2].name, "x");

  req.top_j = 2;
  EXPECT_EQ(surrogate_substitutes(req, vocab).at("buffer").size(), 2u);
  req.top_j = 60;
  req.top_k = 1;
  EXPECT_EQ(surrogate_substitutes(req, vocab).at("buffer").size(), 1u);

  EXPECT_TRUE(surrogate_substitutes(req, Vocabulary{}).at("buffer").empty());
}

TEST(Surrogate, RepeatedRequestsAreByteIdentical) {
  SurrogateBackend be(Vocabulary(fixtures::test_vocabulary()));
  gateway::SubstitutesRequest req{"int total = 0;", 60, 30, {{"total", {{4, 9}}}}};
  auto a = gateway::wire::encode_substitutes_response(be.substitutes(req));
  auto b = gateway::wire::encode_substitutes_response(be.substitutes(req));
  EXPECT_EQ(a, b);
}

TEST(Surrogate, MissingVocabulary) {
  SurrogateBackend be;
  EXPECT_THROW(be.substitutes({"x", 1, 1, {}}), MissingVocabulary);
  EXPECT_THROW(Vocabulary::load("/nonexistent/vocab.txt"), MissingVocabulary);
  EXPECT_TRUE(be.stateless());
}

TEST(Surrogate, VocabularyFile) {
  auto path = std::filesystem::temp_directory_path() / "varattack_vocab_test.txt";
  {
    std::ofstream out(path, std::ios::binary);
    out << "alpha\nbeta\r\n\ngamma\nalpha\n";
  }
  auto v = Vocabulary::load(path.string());
  EXPECT_EQ(v.words(), (std::vector<std::string>{"alpha", "beta", "gamma"}));
  std::filesystem::remove(path);
}
