#pragma once

// Deterministic offline stand-in for a remote victim and MLM server.
//
// Classifier: the snippet is split into maximal runs of [A-Za-z0-9_]; each
// token t contributes w(t) = ((fnv1a64(t) mod 2001) - 1000) / 1000 to a score
// s, and the prediction is softmax(s, -s). A clone-detection pair adds the
// second snippet's tokens to the same score.
//
// Substitutes: every vocabulary word is scored against the variable name by
// the Dice coefficient over character bigrams (multiset intersection),
// ranked descending with lexicographic tie-break, and truncated to
// min(top_j, top_k).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "varattack/gateway/backend.hpp"

namespace varattack::surrogate {

double token_weight(std::string_view token);
std::vector<std::string_view> tokenize(std::string_view text);
double score(std::string_view code);

Prediction surrogate_classify(std::string_view code, const std::optional<std::string>& code_pair = {});

double dice_bigrams(std::string_view a, std::string_view b);

class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> words);

  /// One identifier per line, LF-terminated; blank lines are skipped.
  /// Throws MissingVocabulary if the file cannot be read.
  static Vocabulary load(const std::string& path);

  const std::vector<std::string>& words() const { return words_; }

 private:
  std::vector<std::string> words_;
};

gateway::RawSubstitutes surrogate_substitutes(const gateway::SubstitutesRequest& request,
                                              const Vocabulary& vocabulary);

class SurrogateBackend : public gateway::Backend {
 public:
  SurrogateBackend() = default;
  explicit SurrogateBackend(Vocabulary vocabulary) : vocabulary_(std::move(vocabulary)) {}

  Prediction classify(const std::string& code, const std::optional<std::string>& code_pair) override {
    return surrogate_classify(code, code_pair);
  }
  /// Throws MissingVocabulary when constructed without one.
  gateway::RawSubstitutes substitutes(const gateway::SubstitutesRequest& request) override;
  gateway::HealthInfo health() override { return {"ok", "surrogate-fnv1a-bigram"}; }
  bool stateless() const override { return true; }

 private:
  std::optional<Vocabulary> vocabulary_;
};

}  // namespace varattack::surrogate
