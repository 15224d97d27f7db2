#include "varattack/subgen/subgen.hpp"

#include <algorithm>
#include <map>

namespace varattack::subgen {

std::vector<SubstituteCandidate> filter_candidates(
    const std::string& variable, std::span<const std::vector<SubstituteCandidate>> raw_lists,
    const lang::NameSet& identifiers, Language language, int top_k) {
  std::map<std::string, double> best;
  for (const auto& list : raw_lists) {
    for (const auto& c : list) {
      auto [it, inserted] = best.emplace(c.name, c.similarity);
      if (!inserted) it->second = std::max(it->second, c.similarity);
    }
  }
  std::vector<SubstituteCandidate> out;
  for (const auto& [name, score] : best) {
    if (name == variable) continue;
    if (!lang::is_valid_substitute(name, identifiers, language)) continue;
    out.push_back({name, score});
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.similarity > b.similarity;
  });
  if (out.size() > static_cast<std::size_t>(std::max(top_k, 0))) out.resize(std::max(top_k, 0));
  return out;
}

namespace {

SubstituteSet generate(const SourceUnit& src, std::span<const Identifier> vars,
                       const lang::NameSet& identifiers, const AttackConfig& cfg,
                       gateway::Gateway& gw) {
  SubstituteSet set;
  for (const auto& var : vars) {
    std::vector<std::vector<SubstituteCandidate>> lists;
    for (const auto& occ : var.occurrences) {
      Identifier single{var.name, {occ}};
      auto raw = gw.mlm_substitutes(src, std::span<const Identifier>(&single, 1), cfg.top_j,
                                    cfg.top_k);
      lists.push_back(std::move(raw[var.name]));
    }
    set.by_variable[var.name] =
        filter_candidates(var.name, lists, identifiers, src.language, cfg.top_k);
  }
  return set;
}

}  // namespace

SubstituteSet generate_substitutes(const lang::Renamer& renamer, const AttackConfig& cfg,
                                   gateway::Gateway& gw) {
  return generate(renamer.source(), renamer.variables(), renamer.identifiers(), cfg, gw);
}

SubstituteSet generate_substitutes(const SourceUnit& src, std::span<const Identifier> vars,
                                   const AttackConfig& cfg, gateway::Gateway& gw) {
  return generate(src, vars, lang::identifiers_in(src), cfg, gw);
}

}  // namespace varattack::subgen
