#include "varattack/greedy/greedy.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "varattack/core/errors.hpp"

namespace varattack::greedy {

double importance_score(const SourceUnit& src, const OccurrenceSpan& occ, int y,
                        const Prediction& base, std::string_view mask_token, gateway::Gateway& gw,
                        const SourceUnit* pair) {
  SourceUnit masked = lang::mask_occurrence(src, occ, mask_token);
  return base.confidence(y) - gw.classify(masked, pair).confidence(y);
}

VariableRanking rank_variables(const SourceUnit& src, std::span<const Identifier> vars, int y,
                               const Prediction& base, std::string_view mask_token,
                               gateway::Gateway& gw, const SourceUnit* pair) {
  VariableRanking r;
  r.baseline = base;
  for (const auto& var : vars) {
    VariableScore s{var.name, var.first_offset(), {}, 0.0};
    for (const auto& occ : var.occurrences) {
      double is = importance_score(src, occ, y, base, mask_token, gw, pair);
      s.importance.push_back(is);
      s.ois += is;
    }
    r.scores.push_back(std::move(s));
  }
  r.order.resize(r.scores.size());
  std::iota(r.order.begin(), r.order.end(), 0);
  std::stable_sort(r.order.begin(), r.order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = r.scores[a];
    const auto& z = r.scores[b];
    if (x.ois != z.ois) return x.ois > z.ois;
    if (x.first_offset != z.first_offset) return x.first_offset < z.first_offset;
    return x.variable < z.variable;
  });
  return r;
}

VariableRanking rank_variables(const SourceUnit& src, std::span<const Identifier> vars, int y,
                               std::string_view mask_token, gateway::Gateway& gw,
                               const SourceUnit* pair) {
  Prediction base = gw.classify(src, pair);
  return rank_variables(src, vars, y, base, mask_token, gw, pair);
}

GreedyResult greedy_attack(const lang::Renamer& renamer, int y, const SubstituteSet& subs,
                           const VariableRanking& ranking, const AttackConfig&,
                           gateway::Gateway& gw, const SourceUnit* pair) {
  GreedyResult res;
  res.outcome.verdict = Verdict::Failure;
  res.outcome.stage = Stage::Greedy;
  res.outcome.num_variables = renamer.variables().size();

  Chromosome current = renamer.identity();
  double current_conf = ranking.baseline.confidence(y);
  res.committed_confidence.push_back(current_conf);

  auto track = [&](const SourceUnit& code, const Chromosome& c, double conf) {
    auto& best = res.outcome.min_confidence_variant;
    if (!best || conf < best->confidence) best = TrackedVariant{code, c, conf};
  };

  try {
    for (std::size_t i = 0; i < ranking.order.size(); ++i) {
      const std::string& var = ranking.ranked(i).variable;
      auto cands = subs.candidates(var);
      if (cands.empty()) continue;

      std::optional<Chromosome> iter_best;
      std::string iter_best_name;
      double iter_best_conf = std::numeric_limits<double>::infinity();
      for (const auto& cand : cands) {
        Chromosome trial = current.with_substitute(var, cand.name);
        SourceUnit code;
        try {
          code = renamer.apply(trial);
        } catch (const CollisionError&) {
          continue;
        } catch (const InvalidName&) {
          continue;
        } catch (const StructureMismatch&) {
          continue;
        }
        Prediction p = gw.classify(code, pair);
        ++res.phase_queries;
        double conf = p.confidence(y);
        res.evaluations.push_back({trial, conf, p.label, i});
        track(code, trial, conf);
        if (p.label != y && gw.classify(code, pair).label != y) {
          res.outcome.verdict = Verdict::Success;
          res.outcome.adversarial = std::move(code);
          res.outcome.chromosome = std::move(trial);
          res.best_substitutes[var] = cand.name;
          return res;
        }
        if (conf < iter_best_conf) {
          iter_best_conf = conf;
          iter_best = trial;
          iter_best_name = cand.name;
        }
      }
      res.best_substitutes[var] = iter_best ? iter_best_name : cands.front().name;
      if (iter_best && iter_best_conf < current_conf) {
        current = std::move(*iter_best);
        current_conf = iter_best_conf;
      }
      res.committed_confidence.push_back(current_conf);
    }
  } catch (const BudgetExhausted&) {
    res.budget_exhausted = true;
  }
  if (!current.is_identity()) res.outcome.chromosome = current;
  return res;
}

}  // namespace varattack::greedy
