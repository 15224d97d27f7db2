#include "varattack/surrogate/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "varattack/core/errors.hpp"
#include "varattack/core/hash.hpp"

namespace varattack::surrogate {
namespace {

bool word_byte(char ch) {
  auto c = static_cast<unsigned char>(ch);
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

std::map<std::string_view, int> bigrams(std::string_view s) {
  std::map<std::string_view, int> out;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) ++out[s.substr(i, 2)];
  return out;
}

}  // namespace

double token_weight(std::string_view token) {
  const auto bucket = static_cast<int>(fnv1a64(token) % 2001ULL);
  return static_cast<double>(bucket - 1000) / 1000.0;
}

std::vector<std::string_view> tokenize(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!word_byte(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && word_byte(text[j])) ++j;
    out.push_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

double score(std::string_view code) {
  double s = 0.0;
  for (auto t : tokenize(code)) s += token_weight(t);
  return s;
}

Prediction surrogate_classify(std::string_view code, const std::optional<std::string>& code_pair) {
  double s = score(code);
  if (code_pair) s += score(*code_pair);
  Prediction p;
  p.confidences = {1.0 / (1.0 + std::exp(-2.0 * s)), 1.0 / (1.0 + std::exp(2.0 * s))};
  p.label = p.confidences[1] > p.confidences[0] ? 1 : 0;
  return p;
}

double dice_bigrams(std::string_view a, std::string_view b) {
  auto ga = bigrams(a);
  auto gb = bigrams(b);
  std::size_t na = a.size() < 2 ? 0 : a.size() - 1;
  std::size_t nb = b.size() < 2 ? 0 : b.size() - 1;
  if (na + nb == 0) return a == b ? 1.0 : 0.0;
  std::size_t shared = 0;
  for (const auto& [g, count] : ga) {
    auto it = gb.find(g);
    if (it != gb.end()) shared += static_cast<std::size_t>(std::min(count, it->second));
  }
  return 2.0 * static_cast<double>(shared) / static_cast<double>(na + nb);
}

Vocabulary::Vocabulary(std::vector<std::string> words) {
  std::set<std::string> seen;
  for (auto& w : words) {
    if (!w.empty() && seen.insert(w).second) words_.push_back(std::move(w));
  }
}

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingVocabulary("cannot read vocabulary file '" + path + "'");
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) words.push_back(line);
  }
  return Vocabulary(std::move(words));
}

gateway::RawSubstitutes surrogate_substitutes(const gateway::SubstitutesRequest& request,
                                              const Vocabulary& vocabulary) {
  const std::size_t limit =
      static_cast<std::size_t>(std::max(0, std::min(request.top_j, request.top_k)));
  gateway::RawSubstitutes out;
  for (const auto& var : request.variables) {
    std::vector<SubstituteCandidate> ranked;
    ranked.reserve(vocabulary.words().size());
    for (const auto& w : vocabulary.words()) ranked.push_back({w, dice_bigrams(var.name, w)});
    std::sort(ranked.begin(), ranked.end(),
              [](const SubstituteCandidate& x, const SubstituteCandidate& y) {
                if (x.similarity != y.similarity) return x.similarity > y.similarity;
                return x.name < y.name;
              });
    if (ranked.size() > limit) ranked.resize(limit);
    out[var.name] = std::move(ranked);
  }
  return out;
}

gateway::RawSubstitutes SurrogateBackend::substitutes(const gateway::SubstitutesRequest& request) {
  if (!vocabulary_) throw MissingVocabulary("surrogate backend has no vocabulary loaded");
  return surrogate_substitutes(request, *vocabulary_);
}

}  // namespace varattack::surrogate
