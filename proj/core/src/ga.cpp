#include "usab/ga.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "usab/error.hpp"

namespace usab {

namespace {

// Stream coordinates. Generation g, member m uses (g, m); per-generation
// mutation uses a member index no population reaches.
constexpr std::uint64_t kMutationStream = 0xffff'ffffULL;

// Roulette weights for members whose fitness is exactly zero.
constexpr double kSelectionFloor = 1e-12;

double checked_fitness(const FitnessFn& fn, const Chromosome& c) {
  const double f = fn(c);
  require(std::isfinite(f) && f >= 0.0, ErrorCode::InvalidArgument,
          "fitness callback must return a finite value >= 0");
  return f;
}

}  // namespace

void GaConfig::validate() const {
  require(population_size >= 2, ErrorCode::InvalidArgument, "population_size must be >= 2");
  require(gene_count >= 1, ErrorCode::InvalidArgument, "gene_count must be >= 1");
  require(crossover_rate >= 0.0 && crossover_rate <= 1.0, ErrorCode::InvalidArgument,
          "crossover_rate must lie in [0,1]");
  require(mutation_rate >= 0.0 && mutation_rate <= 1.0, ErrorCode::InvalidArgument,
          "mutation_rate must lie in [0,1]");
  require(elitism < population_size, ErrorCode::InvalidArgument,
          "elitism must leave room for offspring");
}

std::size_t GaConfig::mutation_count() const {
  return static_cast<std::size_t>(
      std::llround(mutation_rate * static_cast<double>(population_size * gene_count)));
}

void EvolutionTrace::write_csv(std::ostream& out) const {
  out << "generation,best,mean\n";
  const auto old_precision = out.precision(17);
  for (const auto& g : generations) {
    out << g.generation << ',' << g.best_fitness << ',' << g.mean_fitness << '\n';
  }
  out.precision(old_precision);
}

double demo_objective(const Chromosome& c) {
  require(c.genes.size() == 4, ErrorCode::WrongGeneCount,
          "demo objective needs 4 genes, got " + std::to_string(c.genes.size()));
  const long long sum = static_cast<long long>(c.genes[0]) + 2LL * c.genes[1] +
                        3LL * c.genes[2] + 4LL * c.genes[3];
  return static_cast<double>(std::llabs(sum - 30));
}

double fitness_from_objective(double objective) {
  require(!(objective < 0.0), ErrorCode::NegativeObjective, "objective must be >= 0");
  require(!std::isnan(objective), ErrorCode::InvalidArgument, "objective is NaN");
  return 1.0 / (1.0 + objective);
}

GaProblem demo_problem() {
  GaProblem p;
  p.range = {0, 30};
  p.fitness = [](const Chromosome& c) { return fitness_from_objective(demo_objective(c)); };
  return p;
}

std::size_t roulette_select(std::span<const double> fitnesses, Rng& rng) {
  require(!fitnesses.empty(), ErrorCode::ZeroTotalFitness, "empty population");
  double total = 0.0;
  for (double f : fitnesses) {
    require(std::isfinite(f) && f > 0.0, ErrorCode::ZeroTotalFitness,
            "roulette selection needs every fitness > 0");
    total += f;
  }
  const double spin = rng.uniform01() * total;
  double cumulative = 0.0;
  for (std::size_t i = 0; i < fitnesses.size(); ++i) {
    cumulative += fitnesses[i];
    if (spin < cumulative) return i;
  }
  return fitnesses.size() - 1;
}

std::pair<Chromosome, Chromosome> crossover_at(const Chromosome& a, const Chromosome& b,
                                               std::size_t cut) {
  require(a.genes.size() == b.genes.size(), ErrorCode::GeneCountMismatch,
          "parents differ in gene count");
  require(cut >= 1 && cut < a.genes.size(), ErrorCode::InvalidArgument,
          "cut point must lie in [1, n-1]");
  Chromosome first{a.genes, std::nullopt};
  Chromosome second{b.genes, std::nullopt};
  std::swap_ranges(first.genes.begin() + static_cast<std::ptrdiff_t>(cut), first.genes.end(),
                   second.genes.begin() + static_cast<std::ptrdiff_t>(cut));
  return {std::move(first), std::move(second)};
}

std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b, double rate,
                                            Rng& rng) {
  require(a.genes.size() == b.genes.size(), ErrorCode::GeneCountMismatch,
          "parents differ in gene count");
  // Draw unconditionally so the stream position does not depend on gene count.
  const bool apply = rng.bernoulli(rate);
  if (!apply || a.genes.size() < 2) return {a, b};
  const std::size_t cut = 1 + rng.index(a.genes.size() - 1);
  return crossover_at(a, b, cut);
}

void mutate(std::vector<Chromosome>& population, const GaConfig& config, GeneRange range,
            Rng& rng) {
  if (population.empty()) return;
  const std::size_t genes = population.front().genes.size();
  const std::size_t total = genes * population.size();
  const std::size_t count = std::min(
      total, static_cast<std::size_t>(std::llround(config.mutation_rate * static_cast<double>(total))));
  for (std::size_t pos : rng.sample_without_replacement(total, count)) {
    auto& member = population[pos / genes];
    member.genes[pos % genes] = rng.integer(range.lo, range.hi);
    member.fitness.reset();
  }
}

Chromosome random_chromosome(std::size_t gene_count, GeneRange range, Rng& rng) {
  Chromosome c;
  c.genes.resize(gene_count);
  for (auto& g : c.genes) g = rng.integer(range.lo, range.hi);
  return c;
}

EvolutionResult evolve(const GaProblem& problem, const GaConfig& config, RngSpec rng) {
  config.validate();
  require(static_cast<bool>(problem.fitness), ErrorCode::InvalidArgument, "missing fitness callback");
  require(problem.range.lo <= problem.range.hi, ErrorCode::InvalidRange, "empty gene range");

  std::vector<Chromosome> population;
  population.reserve(config.population_size);
  for (const auto& seed : problem.seeds) {
    if (population.size() == config.population_size) break;
    require(seed.genes.size() == config.gene_count, ErrorCode::GeneCountMismatch,
            "seed chromosome has the wrong gene count");
    population.push_back({seed.genes, std::nullopt});
  }
  while (population.size() < config.population_size) {
    Rng member_rng = Rng::stream(rng, 0, population.size());
    auto c = random_chromosome(config.gene_count, problem.range, member_rng);
    if (problem.repair) problem.repair(c, member_rng);
    population.push_back(std::move(c));
  }

  EvolutionResult result;
  bool have_best = false;
  std::vector<double> fitness(config.population_size);
  std::vector<std::size_t> order(config.population_size);

  for (std::size_t generation = 0;; ++generation) {
    for (std::size_t i = 0; i < population.size(); ++i) {
      if (!population[i].fitness) population[i].fitness = checked_fitness(problem.fitness, population[i]);
      fitness[i] = *population[i].fitness;
    }

    // Stable ordering by descending fitness; index breaks ties.
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fitness[a] > fitness[b]; });
    const auto& gen_best = population[order.front()];
    const double mean =
        std::accumulate(fitness.begin(), fitness.end(), 0.0) / static_cast<double>(fitness.size());
    result.trace.generations.push_back({generation, fitness[order.front()], mean, gen_best});
    if (!have_best || fitness[order.front()] > *result.best.fitness) {
      result.best = gen_best;
      have_best = true;
    }

    const bool target_hit =
        config.target_fitness && *result.best.fitness >= *config.target_fitness;
    if (generation == config.max_generations || target_hit) break;

    std::vector<double> weights(fitness);
    for (auto& w : weights) w = std::max(w, kSelectionFloor);

    std::vector<Chromosome> next;
    next.reserve(config.population_size);
    for (std::size_t e = 0; e < config.elitism; ++e) next.push_back(population[order[e]]);

    const std::uint64_t g = generation + 1;
    for (std::size_t pair = 0; next.size() < config.population_size; ++pair) {
      Rng pair_rng = Rng::stream(rng, g, pair);
      const auto& a = population[roulette_select(weights, pair_rng)];
      const auto& b = population[roulette_select(weights, pair_rng)];
      auto [c1, c2] = crossover(a, b, config.crossover_rate, pair_rng);
      next.push_back(std::move(c1));
      if (next.size() < config.population_size) next.push_back(std::move(c2));
    }

    Rng mutation_rng = Rng::stream(rng, g, kMutationStream);
    std::vector<Chromosome> elites(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(config.elitism));
    mutate(next, config, problem.range, mutation_rng);
    std::copy(elites.begin(), elites.end(), next.begin());

    if (problem.repair) {
      for (std::size_t i = config.elitism; i < next.size(); ++i) {
        // Repair only touches children that need it; the stream is per child.
        Rng repair_rng = Rng::stream(rng, g, kMutationStream + 1 + i);
        const auto before = next[i].genes;
        problem.repair(next[i], repair_rng);
        if (next[i].genes != before) next[i].fitness.reset();
      }
    }
    population = std::move(next);
  }

  result.final_population = std::move(population);
  return result;
}

}  // namespace usab
