#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "varattack/core/config.hpp"
#include "varattack/core/types.hpp"
#include "varattack/gateway/gateway.hpp"
#include "varattack/lang/rename.hpp"

namespace varattack::greedy {

struct VariableScore {
  std::string variable;
  std::size_t first_offset = 0;
  std::vector<double> importance;  // one per occurrence, occurrence order
  double ois = 0.0;
};

struct VariableRanking {
  Prediction baseline;
  std::vector<VariableScore> scores;  // canonical variable order
  std::vector<std::size_t> order;     // indices into scores, descending OIS

  const VariableScore& ranked(std::size_t i) const { return scores[order[i]]; }
};

/// base.confidences[y] minus the confidence after masking occ. One query.
double importance_score(const SourceUnit& src, const OccurrenceSpan& occ, int y,
                        const Prediction& base, std::string_view mask_token, gateway::Gateway& gw,
                        const SourceUnit* pair = nullptr);

/// Uses the supplied baseline; queries = total occurrences.
VariableRanking rank_variables(const SourceUnit& src, std::span<const Identifier> vars, int y,
                               const Prediction& base, std::string_view mask_token,
                               gateway::Gateway& gw, const SourceUnit* pair = nullptr);

/// Queries the baseline first; queries = 1 + total occurrences.
VariableRanking rank_variables(const SourceUnit& src, std::span<const Identifier> vars, int y,
                               std::string_view mask_token, gateway::Gateway& gw,
                               const SourceUnit* pair = nullptr);

/// A chromosome that was sent to the victim and what came back.
struct Evaluation {
  Chromosome chromosome;
  double confidence = 0.0;  // on the ground-truth label
  int label = 0;
  std::size_t round = 0;  // greedy iteration that produced it
};

struct GreedyResult {
  AttackOutcome outcome;  // Success or Failure; query counts left to the caller
  /// Per variable, the candidate that gave the lowest confidence in its
  /// iteration (or the top candidate when none could be evaluated).
  std::map<std::string, std::string> best_substitutes;
  std::vector<Evaluation> evaluations;
  /// Working snippet confidence after each iteration, baseline first.
  std::vector<double> committed_confidence;
  long phase_queries = 0;  // excludes the verification query
  bool budget_exhausted = false;
};

GreedyResult greedy_attack(const lang::Renamer& renamer, int y, const SubstituteSet& subs,
                           const VariableRanking& ranking, const AttackConfig& cfg,
                           gateway::Gateway& gw, const SourceUnit* pair = nullptr);

}  // namespace varattack::greedy
