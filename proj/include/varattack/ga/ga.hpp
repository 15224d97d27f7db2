#pragma once

#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "varattack/core/config.hpp"
#include "varattack/core/rng.hpp"
#include "varattack/core/types.hpp"
#include "varattack/gateway/gateway.hpp"
#include "varattack/greedy/greedy.hpp"
#include "varattack/lang/rename.hpp"

namespace varattack::ga {

inline constexpr double kRejected = -std::numeric_limits<double>::infinity();

/// Chromosome i renames only variable i, to greedy_best[variable]; a
/// variable missing from greedy_best yields the identity chromosome.
std::vector<Chromosome> init_population(std::span<const Identifier> vars,
                                        const std::map<std::string, std::string>& greedy_best);

/// Genes [0, h) from c1, [h, n) from c2, i.e. c1 up to 1-based position h.
/// Throws DegeneratePopulation for fewer than two genes and
/// std::out_of_range unless 1 <= h < n.
Chromosome crossover(const Chromosome& c1, const Chromosome& c2, std::size_t h);

/// Re-draws one gene, chosen uniformly among genes that have candidates,
/// from its candidates plus the original name, excluding the current value.
/// Throws NoMutationPossible when no gene has candidates.
Chromosome mutate(const Chromosome& c, const SubstituteSet& subs, Rng& rng);

/// Fitness (baseline confidence minus variant confidence on y), memoised: each distinct chromosome is sent to the victim at
/// most once. Identity is 0 and rejected renames are kRejected, both free.
class FitnessEvaluator {
 public:
  struct Result {
    double fitness = 0.0;
    int label = 0;
    bool queried = false;  // this call spent a classify query
  };

  FitnessEvaluator(const lang::Renamer& renamer, int y, double baseline, gateway::Gateway& gw,
                   const SourceUnit* pair = nullptr);

  /// Records an earlier query so it is not repeated.
  void remember(const Chromosome& c, double confidence, int label);
  Result evaluate(const Chromosome& c);

  double baseline() const { return baseline_; }
  long queries() const { return queries_; }
  /// Lowest confidence-on-y variant among this evaluator's own queries.
  const std::optional<TrackedVariant>& min_confidence_variant() const { return min_variant_; }

 private:
  struct Entry {
    double fitness;
    int label;
  };

  const lang::Renamer& renamer_;
  int y_;
  double baseline_;
  gateway::Gateway& gw_;
  const SourceUnit* pair_;
  std::map<Chromosome, Entry> memo_;
  long queries_ = 0;
  std::optional<TrackedVariant> min_variant_;
};

double fitness(const lang::Renamer& renamer, const Chromosome& c, int y, double baseline,
               gateway::Gateway& gw, const SourceUnit* pair = nullptr);

struct GaResult {
  AttackOutcome outcome;
  /// Best fitness of the population: initial, then after every selection.
  std::vector<double> best_fitness;
  std::vector<std::size_t> population_size;  // parallel to best_fitness
  std::vector<long> generation_queries;      // one per completed or stopped generation
  std::vector<Chromosome> population;        // final population, fittest first
  std::size_t generations = 0;
  long phase_queries = 0;  // excludes the verification query
  bool budget_exhausted = false;
};

GaResult ga_attack(const lang::Renamer& renamer, int y, const SubstituteSet& subs,
                   const greedy::GreedyResult& greedy_state, double baseline,
                   const AttackConfig& cfg, gateway::Gateway& gw, Rng& rng,
                   const SourceUnit* pair = nullptr);

}  // namespace varattack::ga
