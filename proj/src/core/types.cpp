#include "varattack/core/types.hpp"

#include <cmath>
#include <numeric>

#include "varattack/core/errors.hpp"

namespace varattack {

std::size_t total_occurrences(std::span<const Identifier> vars) {
  std::size_t n = 0;
  for (const auto& v : vars) n += v.occurrences.size();
  return n;
}

std::span<const SubstituteCandidate> SubstituteSet::candidates(const std::string& variable) const {
  auto it = by_variable.find(variable);
  if (it == by_variable.end()) return {};
  return it->second;
}

bool SubstituteSet::any_candidates() const {
  for (const auto& [_, list] : by_variable) {
    if (!list.empty()) return true;
  }
  return false;
}

Chromosome Chromosome::identity(std::span<const Identifier> vars) {
  std::vector<Gene> genes;
  genes.reserve(vars.size());
  for (const auto& v : vars) genes.push_back({v.name, v.name});
  return Chromosome(std::move(genes));
}

std::optional<std::size_t> Chromosome::index_of(std::string_view variable) const {
  for (std::size_t i = 0; i < genes_.size(); ++i) {
    if (genes_[i].variable == variable) return i;
  }
  return std::nullopt;
}

Chromosome Chromosome::with_substitute(std::size_t index, std::string substitute) const {
  Chromosome copy = *this;
  copy.genes_.at(index).substitute = std::move(substitute);
  return copy;
}

Chromosome Chromosome::with_substitute(std::string_view variable, std::string substitute) const {
  auto idx = index_of(variable);
  if (!idx) throw Error("chromosome has no gene for variable '" + std::string(variable) + "'");
  return with_substitute(*idx, std::move(substitute));
}

std::size_t Chromosome::changed_count() const {
  std::size_t n = 0;
  for (const auto& g : genes_) n += g.changed() ? 1 : 0;
  return n;
}

std::string Chromosome::serialize() const {
  std::string out;
  for (std::size_t i = 0; i < genes_.size(); ++i) {
    if (i) out += ',';
    out += genes_[i].variable;
    out += ':';
    out += genes_[i].substitute;
  }
  return out;
}

Chromosome Chromosome::parse(std::string_view text) {
  std::vector<Gene> genes;
  if (text.empty()) return Chromosome{};
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view item = text.substr(pos, comma - pos);
    std::size_t colon = item.find(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 == item.size() ||
        item.find(':', colon + 1) != std::string_view::npos) {
      throw Error("malformed gene '" + std::string(item) + "'");
    }
    genes.push_back({std::string(item.substr(0, colon)), std::string(item.substr(colon + 1))});
    pos = comma + 1;
  }
  return Chromosome(std::move(genes));
}

double Prediction::confidence(int y) const {
  if (y < 0 || static_cast<std::size_t>(y) >= confidences.size()) {
    throw Error("label " + std::to_string(y) + " outside prediction of width " +
                std::to_string(confidences.size()));
  }
  return confidences[static_cast<std::size_t>(y)];
}

std::optional<std::string> prediction_violation(const Prediction& p) {
  if (p.confidences.size() < 2) return "fewer than two confidences";
  double sum = 0.0;
  std::size_t argmax = 0;
  for (std::size_t i = 0; i < p.confidences.size(); ++i) {
    double c = p.confidences[i];
    if (!std::isfinite(c)) return "non-finite confidence";
    if (c < 0.0) return "negative confidence";
    sum += c;
    if (c > p.confidences[argmax]) argmax = i;
  }
  if (std::fabs(sum - 1.0) > 1e-6) return "confidences sum to " + std::to_string(sum);
  if (p.label < 0 || static_cast<std::size_t>(p.label) != argmax) {
    return "label " + std::to_string(p.label) + " is not the argmax " + std::to_string(argmax);
  }
  return std::nullopt;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Success:
      return "success";
    case Verdict::Failure:
      return "failure";
    case Verdict::Skipped:
      return "skipped";
  }
  return "?";
}

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::None:
      return "none";
    case Stage::Greedy:
      return "greedy";
    case Stage::GA:
      return "ga";
  }
  return "?";
}

Verdict parse_verdict(std::string_view s) {
  if (s == "success") return Verdict::Success;
  if (s == "failure") return Verdict::Failure;
  if (s == "skipped") return Verdict::Skipped;
  throw Error("unknown verdict '" + std::string(s) + "'");
}

Stage parse_stage(std::string_view s) {
  if (s == "none") return Stage::None;
  if (s == "greedy") return Stage::Greedy;
  if (s == "ga") return Stage::GA;
  throw Error("unknown stage '" + std::string(s) + "'");
}

}  // namespace varattack
