#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "usab/rng.hpp"

namespace usab {

/// Integer genome. Demo problems use small integers, feature masks use 0/1,
/// feature scoring uses quantized weights.
struct Chromosome {
  std::vector<int> genes;
  std::optional<double> fitness;

  friend bool operator==(const Chromosome& a, const Chromosome& b) { return a.genes == b.genes; }
};

/// Inclusive range every gene is drawn from.
struct GeneRange {
  int lo = 0;
  int hi = 1;
};

struct GaConfig {
  std::size_t population_size = 6;
  std::size_t gene_count = 4;
  double crossover_rate = 0.25;
  double mutation_rate = 0.1;
  /// Generations produced after the initial population.
  std::size_t max_generations = 1000;
  std::optional<double> target_fitness;
  std::size_t elitism = 1;

  void validate() const;
  /// round(mutation_rate * population_size * gene_count)
  std::size_t mutation_count() const;
};

struct GenerationStats {
  std::size_t generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  Chromosome best;
};

struct EvolutionTrace {
  std::vector<GenerationStats> generations;

  /// `generation,best,mean`
  void write_csv(std::ostream& out) const;
};

/// Fitness must be finite and >= 0; larger is better.
using FitnessFn = std::function<double(const Chromosome&)>;
/// Applied to every newly produced child, e.g. to repair empty feature masks.
using RepairFn = std::function<void(Chromosome&, Rng&)>;

struct GaProblem {
  GeneRange range;
  FitnessFn fitness;
  RepairFn repair;
  /// Placed at the front of the initial population (truncated to fit).
  std::vector<Chromosome> seeds;
};

struct EvolutionResult {
  Chromosome best;
  EvolutionTrace trace;
  std::vector<Chromosome> final_population;
};

/// |a + 2b + 3c + 4d - 30|
double demo_objective(const Chromosome& c);

/// 1 / (1 + objective): strictly decreasing, 1 exactly at objective 0.
double fitness_from_objective(double objective);

/// Genes in [0, 30], fitness from demo_objective.
GaProblem demo_problem();

/// Draws an index with probability fitness_i / sum(fitness). Every fitness
/// must be finite and > 0.
std::size_t roulette_select(std::span<const double> fitnesses, Rng& rng);

/// Single cut point in [1, n-1]; children swap suffixes.
std::pair<Chromosome, Chromosome> crossover_at(const Chromosome& a, const Chromosome& b,
                                               std::size_t cut);

/// With probability `rate`, crossover_at with a uniform cut; otherwise copies.
std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b, double rate,
                                            Rng& rng);

/// Replaces exactly config.mutation_count() distinct gene positions, chosen
/// uniformly over the whole population, with fresh uniform draws from range.
void mutate(std::vector<Chromosome>& population, const GaConfig& config, GeneRange range, Rng& rng);

Chromosome random_chromosome(std::size_t gene_count, GeneRange range, Rng& rng);

/// Evaluate -> select -> crossover -> mutate, until max_generations or the
/// target fitness is reached. The top `elitism` members survive unchanged.
/// Returns the best chromosome ever evaluated (earliest wins ties).
EvolutionResult evolve(const GaProblem& problem, const GaConfig& config, RngSpec rng);

}  // namespace usab
