#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "support/backends.hpp"
#include "varattack/core/errors.hpp"
#include "varattack/gateway/gateway.hpp"
#include "varattack/gateway/http.hpp"
#include "varattack/gateway/replay.hpp"
#include "varattack/gateway/wire.hpp"
#include "varattack/surrogate/surrogate.hpp"

using namespace varattack;
using namespace varattack::gateway;
using varattack::fixtures::binary;
using varattack::fixtures::CountingBackend;
using varattack::fixtures::ScriptedBackend;

namespace {

std::string golden(const std::string& name) {
  std::ifstream in(std::string(VARATTACK_TEST_DATA) + "/golden/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string s = ss.str();
  while (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

SourceUnit snippet() { return {Language::C, "int y=0; return y;", "t"}; }
Identifier var_y() { return {"y", {{4, 5}, {16, 17}}}; }

}  // namespace

TEST(Wire, GoldenEncodings) {
  EXPECT_EQ(wire::encode_classify_request({"int y=0; return y;", std::nullopt}),
            golden("classify_request.json"));
  EXPECT_EQ(wire::encode_classify_request({"a = 1\n", "b = 2\n"}), golden("classify_request_pair.json"));
  EXPECT_EQ(wire::encode_prediction({0, {0.75, 0.25}}), golden("classify_response.json"));
  EXPECT_EQ(wire::encode_substitutes_request({"int y=0; return y;", 60, 30, {var_y()}}),
            golden("substitutes_request.json"));
  EXPECT_EQ(wire::encode_substitutes_response({{"y", {{"z", 0.5}, {"w", 0.25}}}}),
            golden("substitutes_response.json"));
  EXPECT_EQ(wire::encode_health({"ok", "surrogate-fnv1a-bigram"}), golden("health_response.json"));
}

TEST(Wire, GoldenDecodings) {
  auto req = wire::decode_classify_request(golden("classify_request_pair.json"));
  EXPECT_EQ(req.code, "a = 1\n");
  EXPECT_EQ(req.code_pair, "b = 2\n");
  EXPECT_FALSE(wire::decode_classify_request(golden("classify_request.json")).code_pair);
  EXPECT_EQ(wire::decode_prediction(golden("classify_response.json")), (Prediction{0, {0.75, 0.25}}));
  EXPECT_EQ(wire::decode_substitutes_request(golden("substitutes_request.json")),
            (SubstitutesRequest{"int y=0; return y;", 60, 30, {var_y()}}));
  auto subs = wire::decode_substitutes_response(golden("substitutes_response.json"));
  ASSERT_EQ(subs.at("y").size(), 2u);
  EXPECT_EQ(subs.at("y")[1], (SubstituteCandidate{"w", 0.25}));
  EXPECT_EQ(wire::decode_health(golden("health_response.json")).model, "surrogate-fnv1a-bigram");
}

TEST(Wire, FloatsRoundTripExactly) {
  const double third = 1.0 / 3.0;
  Prediction p{1, {third, 1.0 - third}};
  EXPECT_EQ(wire::decode_prediction(wire::encode_prediction(p)), p);
  RawSubstitutes s{{"v", {{"w", 0.1 + 0.2}}}};
  EXPECT_EQ(wire::decode_substitutes_response(wire::encode_substitutes_response(s)), s);
}

TEST(Wire, SchemaViolations) {
  EXPECT_THROW(wire::decode_prediction("not json"), ProtocolError);
  EXPECT_THROW(wire::decode_prediction("[1,2]"), ProtocolError);
  EXPECT_THROW(wire::decode_prediction(R"({"confidences":[0.5,0.5]})"), ProtocolError);
  EXPECT_THROW(wire::decode_prediction(R"({"label":"0","confidences":[0.5,0.5]})"), ProtocolError);
  EXPECT_THROW(wire::decode_prediction(R"({"label":0,"confidences":[0.5,"x"]})"), ProtocolError);
  EXPECT_THROW(wire::decode_prediction(R"({"label":0.5,"confidences":[0.5,0.5]})"), ProtocolError);
  EXPECT_THROW(wire::decode_substitutes_response(R"({"subs":{}})"), ProtocolError);
  EXPECT_THROW(wire::decode_substitutes_response(R"({"substitutes":{"y":[{"name":"z"}]}})"),
               ProtocolError);
  EXPECT_THROW(wire::decode_substitutes_response(R"({"substitutes":{"y":{"name":"z","score":1}}})"),
               ProtocolError);
  EXPECT_THROW(wire::decode_substitutes_request(R"({"code":"x","top_j":1,"variables":[]})"),
               ProtocolError);
  EXPECT_THROW(wire::decode_classify_request(R"({"code":5})"), ProtocolError);
  EXPECT_THROW(wire::decode_health(R"({"status":"ok"})"), ProtocolError);
  // Extra fields are tolerated.
  EXPECT_NO_THROW(wire::decode_prediction(R"({"label":0,"confidences":[0.5,0.5],"extra":1})"));
}

TEST(Gateway, SurrogateClassification) {
  surrogate::SurrogateBackend backend;
  Gateway gw(backend);
  auto p = gw.classify(snippet());
  EXPECT_EQ(p.label, 0);
  EXPECT_DOUBLE_EQ(p.confidences[0], 0.9263549127742439);
  EXPECT_DOUBLE_EQ(p.confidences[1], 0.07364508722575624);
}

TEST(Gateway, NonNormalizedPredictionIsProtocolError) {
  ScriptedBackend bad([](const std::string&) { return Prediction{0, {0.6, 0.6}}; });
  Gateway gw(bad);
  EXPECT_THROW(gw.classify(snippet()), ProtocolError);
  ScriptedBackend wrong_label([](const std::string&) { return Prediction{1, {0.7, 0.3}}; });
  Gateway gw2(wrong_label);
  EXPECT_THROW(gw2.classify(snippet()), ProtocolError);
}

TEST(Gateway, PredictionWidthMustStayConstant) {
  int calls = 0;
  ScriptedBackend be([&](const std::string&) {
    return ++calls == 1 ? Prediction{0, {0.6, 0.4}} : Prediction{0, {0.5, 0.3, 0.2}};
  });
  Gateway gw(be);
  gw.classify(snippet());
  EXPECT_THROW(gw.classify(snippet()), ProtocolError);
}

TEST(Gateway, EveryCallCountsNoCaching) {
  surrogate::SurrogateBackend inner;
  CountingBackend counting(inner);
  Gateway gw(counting);
  gw.classify(snippet());
  gw.classify(snippet());
  EXPECT_EQ(gw.classify_count(), 2);
  EXPECT_EQ(counting.classify_calls, 2);
  EXPECT_EQ(gw.mlm_count(), 0);
}

TEST(Gateway, BudgetStopsAtLimit) {
  surrogate::SurrogateBackend inner;
  CountingBackend counting(inner);
  Gateway gw(counting, {3, 0});
  for (int i = 0; i < 3; ++i) gw.classify(snippet());
  EXPECT_THROW(gw.classify(snippet()), BudgetExhausted);
  EXPECT_EQ(gw.classify_count(), 3);
  EXPECT_EQ(counting.classify_calls, 3);
  Gateway zero(counting, {0, 0});
  EXPECT_THROW(zero.classify(snippet()), BudgetExhausted);
}

TEST(Gateway, BudgetIsRespectedUnderConcurrency) {
  surrogate::SurrogateBackend inner;
  Gateway gw(inner, {100, 0});
  std::atomic<int> ok{0};
  std::vector<std::thread> ts;
  for (int t = 0; t < 8; ++t) {
    ts.emplace_back([&] {
      for (int i = 0; i < 50; ++i) {
        try {
          gw.classify(snippet());
          ++ok;
        } catch (const BudgetExhausted&) {
        }
      }
    });
  }
  for (auto& t : ts) t.join();
  EXPECT_EQ(ok, 100);
  EXPECT_EQ(gw.classify_count(), 100);
}

TEST(Gateway, RetriesDoNotTouchTheLedger) {
  int failures = 2;
  ScriptedBackend flaky([&](const std::string&) -> Prediction {
    if (failures-- > 0) throw TransportError("down");
    return binary(0.8);
  });
  Gateway no_retry(flaky);
  EXPECT_THROW(no_retry.classify(snippet()), TransportError);
  EXPECT_EQ(no_retry.classify_count(), 1);

  failures = 2;
  Gateway retrying(flaky, {std::nullopt, 2});
  EXPECT_EQ(retrying.classify(snippet()).label, 0);
  EXPECT_EQ(retrying.classify_count(), 1);
}

TEST(Gateway, SubstitutesRankedBySurrogateDice) {
  surrogate::SurrogateBackend backend(
      surrogate::Vocabulary({"qmp_async_cmd_handler", "queue", "buffers"}));
  Gateway gw(backend);
  Identifier buffer{"buffer", {{6, 12}}};
  SourceUnit src{Language::C, "char *buffer = 0;", "t"};
  auto raw = gw.mlm_substitutes(src, std::span(&buffer, 1), 60, 30);
  ASSERT_EQ(raw.at("buffer").size(), 3u);
  EXPECT_EQ(raw.at("buffer")[0].name, "buffers");
  EXPECT_EQ(raw.at("buffer")[1].name, "qmp_async_cmd_handler");
  EXPECT_EQ(raw.at("buffer")[2].name, "queue");
  EXPECT_EQ(gw.mlm_count(), 1);
  EXPECT_EQ(gw.classify_count(), 0);
}

TEST(Gateway, ZeroTopKGivesEmptyListsWithoutACall) {
  surrogate::SurrogateBackend inner(surrogate::Vocabulary({"a", "b"}));
  CountingBackend counting(inner);
  Gateway gw(counting);
  Identifier y = var_y();
  auto raw = gw.mlm_substitutes(snippet(), std::span(&y, 1), 60, 0);
  ASSERT_EQ(raw.size(), 1u);
  EXPECT_TRUE(raw.at("y").empty());
  EXPECT_EQ(counting.substitutes_calls, 0);
}

TEST(Gateway, RawOutputMayContainTheVariableItself) {
  surrogate::SurrogateBackend backend(surrogate::Vocabulary({"y", "yy", "q"}));
  Gateway gw(backend);
  Identifier y = var_y();
  auto raw = gw.mlm_substitutes(snippet(), std::span(&y, 1), 60, 30);
  EXPECT_EQ(raw.at("y").front().name, "y");
}

TEST(Gateway, SubstitutesValidation) {
  auto make = [](RawSubstitutes reply) {
    return ScriptedBackend([](const std::string&) { return binary(0.5); },
                           [reply](const SubstitutesRequest&) { return reply; });
  };
  Identifier y = var_y();
  auto span = std::span(&y, 1);
  {
    auto be = make({{"q", {{"a", 0.5}}}});
    Gateway gw(be);
    EXPECT_THROW(gw.mlm_substitutes(snippet(), span, 5, 5), ProtocolError);
  }
  {
    auto be = make({{"y", {{"a", 0.1}, {"b", 0.5}}}});
    Gateway gw(be);
    EXPECT_THROW(gw.mlm_substitutes(snippet(), span, 5, 5), ProtocolError);
  }
  {
    auto be = make({{"y", {{"a", 0.5}, {"b", 0.4}, {"c", 0.3}}}});
    Gateway gw(be);
    EXPECT_THROW(gw.mlm_substitutes(snippet(), span, 5, 2), ProtocolError);
  }
  {
    auto be = make({{"y", {{"a", std::nan("")}}}});
    Gateway gw(be);
    EXPECT_THROW(gw.mlm_substitutes(snippet(), span, 5, 5), ProtocolError);
  }
  {
    auto be = make({});
    Gateway gw(be);
    EXPECT_TRUE(gw.mlm_substitutes(snippet(), span, 5, 5).at("y").empty());
    ASSERT_EQ(be.requests.size(), 1u);
    EXPECT_EQ(be.requests[0].top_j, 5);
    EXPECT_EQ(be.requests[0].variables[0], y);
  }
}

TEST(Http, RoundTripThroughWireServer) {
  surrogate::SurrogateBackend inner(surrogate::Vocabulary({"buffers", "queue", "z"}));
  CountingBackend counting(inner);
  WireServer server(counting);
  int port = server.start();
  HttpBackend client("http://127.0.0.1:" + std::to_string(port));

  EXPECT_EQ(client.health().status, "ok");
  EXPECT_EQ(client.health().model, "surrogate-fnv1a-bigram");

  Gateway gw(client);
  auto direct = surrogate::surrogate_classify(snippet().text);
  EXPECT_EQ(gw.classify(snippet()), direct);
  SourceUnit pair{Language::C, "int q = 1;", "p"};
  EXPECT_EQ(gw.classify(snippet(), &pair), surrogate::surrogate_classify(snippet().text, pair.text));

  Identifier y = var_y();
  auto subs = gw.mlm_substitutes(snippet(), std::span(&y, 1), 60, 2);
  EXPECT_EQ(subs, inner.substitutes({snippet().text, 60, 2, {y}}));

  EXPECT_EQ(gw.classify_count(), 2);
  EXPECT_EQ(counting.classify_calls, 2);
  EXPECT_EQ(counting.substitutes_calls, 1);
  server.stop();
}

TEST(Http, ServerErrorsMapToProtocolErrors) {
  surrogate::SurrogateBackend no_vocab;
  WireServer server(no_vocab);
  int port = server.start();
  HttpBackend client("http://127.0.0.1:" + std::to_string(port));
  EXPECT_THROW(client.substitutes({"x", 1, 1, {}}), ProtocolError);
  server.stop();
}

TEST(Http, UnreachableServerIsTransportError) {
  int port = 0;
  {
    surrogate::SurrogateBackend be;
    WireServer server(be);
    port = server.start();
    server.stop();
  }
  HttpBackend client("http://127.0.0.1:" + std::to_string(port), std::chrono::milliseconds(500));
  EXPECT_THROW(client.health(), TransportError);
  Gateway gw(client);
  EXPECT_THROW(gw.classify(snippet()), TransportError);
  EXPECT_EQ(gw.classify_count(), 1);
}

TEST(Replay, RecordThenReplayIsExact) {
  surrogate::SurrogateBackend inner(surrogate::Vocabulary({"buffers", "queue", "z", "yy"}));
  SubstitutesCache cache;
  ReplayBackend recorder(inner, cache, ReplayBackend::Mode::Record);
  SubstitutesRequest req{snippet().text, 60, 3, {var_y()}};
  auto live = recorder.substitutes(req);
  EXPECT_EQ(cache.size(), 1u);

  auto path = std::filesystem::temp_directory_path() / "varattack_replay_test.json";
  cache.save(path.string());
  auto loaded = SubstitutesCache::load(path.string());
  EXPECT_EQ(loaded.size(), 1u);

  ScriptedBackend dead([](const std::string&) { return binary(0.9); },
                       [](const SubstitutesRequest&) -> RawSubstitutes { throw TransportError("offline"); });
  ReplayBackend replay(dead, loaded, ReplayBackend::Mode::Replay);
  EXPECT_EQ(replay.substitutes(req), live);
  SubstitutesRequest other = req;
  other.top_k = 2;
  EXPECT_THROW(replay.substitutes(other), ProtocolError);
  EXPECT_EQ(replay.classify("x", std::nullopt), binary(0.9));
  std::filesystem::remove(path);
}

TEST(Replay, CacheLoadErrors) {
  auto path = std::filesystem::temp_directory_path() / "varattack_replay_bad.json";
  {
    std::ofstream out(path);
    out << R"([{"request": {"code": "x"}, "response": {"substitutes": {}}}])";
  }
  EXPECT_THROW(SubstitutesCache::load(path.string()), Error);
  EXPECT_THROW(SubstitutesCache::load((path.string() + ".missing")), Error);
  std::filesystem::remove(path);
}
