#include "varattack/ga/ga.hpp"

#include <algorithm>
#include <stdexcept>

#include "varattack/core/errors.hpp"

namespace varattack::ga {

std::vector<Chromosome> init_population(std::span<const Identifier> vars,
                                        const std::map<std::string, std::string>& greedy_best) {
  Chromosome identity = Chromosome::identity(vars);
  std::vector<Chromosome> pop;
  pop.reserve(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    auto it = greedy_best.find(vars[i].name);
    pop.push_back(it == greedy_best.end() ? identity : identity.with_substitute(i, it->second));
  }
  return pop;
}

Chromosome crossover(const Chromosome& c1, const Chromosome& c2, std::size_t h) {
  const std::size_t n = c1.size();
  if (n < 2) throw DegeneratePopulation("crossover needs at least two genes");
  if (c2.size() != n) throw std::invalid_argument("crossover parents differ in length");
  if (h < 1 || h >= n) throw std::out_of_range("crossover cut-off out of range");
  std::vector<Gene> genes(c1.genes().begin(), c1.genes().begin() + static_cast<long>(h));
  genes.insert(genes.end(), c2.genes().begin() + static_cast<long>(h), c2.genes().end());
  return Chromosome(std::move(genes));
}

Chromosome mutate(const Chromosome& c, const SubstituteSet& subs, Rng& rng) {
  std::vector<std::size_t> mutable_genes;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!subs.candidates(c[i].variable).empty()) mutable_genes.push_back(i);
  }
  if (mutable_genes.empty()) throw NoMutationPossible("no variable has substitute candidates");

  const std::size_t gi = mutable_genes[rng.uniform_index(mutable_genes.size())];
  const Gene& g = c[gi];
  std::vector<std::string> choices;
  if (g.substitute != g.variable) choices.push_back(g.variable);
  for (const auto& cand : subs.candidates(g.variable)) {
    if (cand.name != g.substitute) choices.push_back(cand.name);
  }
  return c.with_substitute(gi, choices[rng.uniform_index(choices.size())]);
}

FitnessEvaluator::FitnessEvaluator(const lang::Renamer& renamer, int y, double baseline,
                                   gateway::Gateway& gw, const SourceUnit* pair)
    : renamer_(renamer), y_(y), baseline_(baseline), gw_(gw), pair_(pair) {}

void FitnessEvaluator::remember(const Chromosome& c, double confidence, int label) {
  memo_.emplace(c, Entry{baseline_ - confidence, label});
}

FitnessEvaluator::Result FitnessEvaluator::evaluate(const Chromosome& c) {
  if (c.is_identity()) return {0.0, y_, false};
  if (auto it = memo_.find(c); it != memo_.end()) return {it->second.fitness, it->second.label, false};

  SourceUnit code;
  try {
    code = renamer_.apply(c);
  } catch (const CollisionError&) {
    memo_.emplace(c, Entry{kRejected, y_});
    return {kRejected, y_, false};
  } catch (const InvalidName&) {
    memo_.emplace(c, Entry{kRejected, y_});
    return {kRejected, y_, false};
  } catch (const StructureMismatch&) {
    memo_.emplace(c, Entry{kRejected, y_});
    return {kRejected, y_, false};
  }
  Prediction p = gw_.classify(code, pair_);
  ++queries_;
  double conf = p.confidence(y_);
  if (!min_variant_ || conf < min_variant_->confidence) min_variant_ = TrackedVariant{code, c, conf};
  Entry e{baseline_ - conf, p.label};
  memo_.emplace(c, e);
  return {e.fitness, e.label, true};
}

double fitness(const lang::Renamer& renamer, const Chromosome& c, int y, double baseline,
               gateway::Gateway& gw, const SourceUnit* pair) {
  FitnessEvaluator eval(renamer, y, baseline, gw, pair);
  return eval.evaluate(c).fitness;
}

namespace {

struct Scored {
  Chromosome chromosome;
  double fitness;
};

// Fitter first; ties go to fewer changed genes, then canonical order.
bool fitter(const Scored& a, const Scored& b) {
  if (a.fitness != b.fitness) return a.fitness > b.fitness;
  auto ca = a.chromosome.changed_count();
  auto cb = b.chromosome.changed_count();
  if (ca != cb) return ca < cb;
  return a.chromosome < b.chromosome;
}

std::vector<Scored> select(std::vector<Scored> pool, std::size_t size) {
  std::sort(pool.begin(), pool.end(), fitter);
  pool.erase(std::unique(pool.begin(), pool.end(),
                         [](const Scored& a, const Scored& b) { return a.chromosome == b.chromosome; }),
             pool.end());
  std::vector<Scored> next;
  next.reserve(size);
  for (std::size_t i = 0; next.size() < size; ++i) next.push_back(pool[i % pool.size()]);
  return next;
}

}  // namespace

GaResult ga_attack(const lang::Renamer& renamer, int y, const SubstituteSet& subs,
                   const greedy::GreedyResult& greedy_state, double baseline,
                   const AttackConfig& cfg, gateway::Gateway& gw, Rng& rng,
                   const SourceUnit* pair) {
  GaResult res;
  res.outcome.verdict = Verdict::Failure;
  res.outcome.stage = Stage::GA;
  res.outcome.num_variables = renamer.variables().size();
  res.outcome.min_confidence_variant = greedy_state.outcome.min_confidence_variant;

  const auto& vars = renamer.variables();
  if (vars.empty() || !subs.any_candidates()) return res;

  FitnessEvaluator eval(renamer, y, baseline, gw, pair);
  for (const auto& e : greedy_state.evaluations) eval.remember(e.chromosome, e.confidence, e.label);

  const std::size_t n = vars.size();
  const std::size_t generations = static_cast<std::size_t>(cfg.max_iter(n));
  const long cap = static_cast<long>(generations) * cfg.child_size;

  std::vector<Scored> population;
  auto finish = [&] {
    res.phase_queries = eval.queries();
    for (const auto& s : population) res.population.push_back(s.chromosome);
    auto& tracked = res.outcome.min_confidence_variant;
    const auto& own = eval.min_confidence_variant();
    if (own && (!tracked || own->confidence < tracked->confidence)) tracked = own;
    if (res.outcome.verdict != Verdict::Success && !population.empty()) {
      const Chromosome& best = population.front().chromosome;
      if (!best.is_identity() && population.front().fitness != kRejected) res.outcome.chromosome = best;
    }
    return res;
  };

  // Evaluates c; true once a verified flip has been recorded as the outcome.
  auto consider = [&](const Chromosome& c, double& fit) {
    auto r = eval.evaluate(c);
    fit = r.fitness;
    if (r.label == y || fit == kRejected) return false;
    SourceUnit code = renamer.apply(c);
    if (gw.classify(code, pair).label == y) return false;
    res.outcome.verdict = Verdict::Success;
    res.outcome.adversarial = std::move(code);
    res.outcome.chromosome = c;
    return true;
  };

  try {
    for (const auto& c : init_population(vars, greedy_state.best_substitutes)) {
      double fit = 0.0;
      if (consider(c, fit)) return finish();
      population.push_back({c, fit});
    }
    population = select(std::move(population), n);
    res.best_fitness.push_back(population.front().fitness);
    res.population_size.push_back(population.size());

    for (std::size_t gen = 0; gen < generations; ++gen) {
      const long before = eval.queries();
      res.generation_queries.push_back(0);
      std::vector<Scored> pool = population;
      for (int k = 0; k < cfg.child_size; ++k) {
        if (eval.queries() >= cap) break;
        Chromosome child;
        if (n >= 2 && rng.uniform01() < cfg.crossover_rate) {
          const Chromosome& p1 = population[rng.uniform_index(n)].chromosome;
          const Chromosome& p2 = population[rng.uniform_index(n)].chromosome;
          child = crossover(p1, p2, 1 + rng.uniform_index(n - 1));
        } else {
          child = mutate(population[rng.uniform_index(n)].chromosome, subs, rng);
        }
        double fit = 0.0;
        bool flipped = consider(child, fit);
        res.generation_queries.back() = eval.queries() - before;
        if (flipped) {
          res.generations = gen + 1;
          return finish();
        }
        pool.push_back({std::move(child), fit});
      }
      population = select(std::move(pool), n);
      res.best_fitness.push_back(population.front().fitness);
      res.population_size.push_back(population.size());
      res.generations = gen + 1;
      if (eval.queries() >= cap) break;
    }
  } catch (const BudgetExhausted&) {
    res.budget_exhausted = true;
  }
  return finish();
}

}  // namespace varattack::ga
