#include "usab/selection.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "usab/error.hpp"

namespace usab {

FeatureMask FeatureMask::full(std::size_t d) { return {std::vector<bool>(d, true)}; }

FeatureMask FeatureMask::single(std::size_t d, std::size_t feature) {
  FeatureMask m{std::vector<bool>(d, false)};
  m.bits.at(feature) = true;
  return m;
}

FeatureMask FeatureMask::from_chromosome(const Chromosome& c) {
  FeatureMask m;
  m.bits.reserve(c.genes.size());
  for (int g : c.genes) m.bits.push_back(g != 0);
  return m;
}

std::size_t FeatureMask::popcount() const noexcept {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), true));
}

std::vector<std::size_t> FeatureMask::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) out.push_back(i);
  }
  return out;
}

std::string FeatureMask::to_string() const {
  std::string s;
  for (bool b : bits) s.push_back(b ? '1' : '0');
  return s;
}

double mask_fitness(const FeatureMask& mask, const FeatureMatrix& fm, const SvmConfig& svm_cfg,
                    std::size_t folds, RngSpec rng, double lambda) {
  require(mask.size() == fm.cols(), ErrorCode::DimensionMismatch, "mask length differs from D");
  require(mask.popcount() > 0, ErrorCode::EmptyMask, "mask selects no features");
  require(folds >= 2, ErrorCode::InvalidArgument, "folds must be >= 2");
  require(fm.labeled(), ErrorCode::InvalidArgument, "mask fitness needs labels");
  const auto cols = mask.indices();
  const double acc =
      svm_cv_accuracy(fm.values.take_cols(cols), fm.labels, fm.num_classes(), svm_cfg, folds, rng);
  return acc - lambda * static_cast<double>(cols.size()) / static_cast<double>(mask.size());
}

GaConfig default_selection_ga(std::size_t d) {
  GaConfig cfg;
  cfg.population_size = std::max<std::size_t>(12, d + 1);
  cfg.gene_count = d;
  cfg.crossover_rate = 0.8;
  cfg.mutation_rate = 0.05;
  cfg.max_generations = 15;
  cfg.elitism = 2;
  return cfg;
}

SelectionResult select_features(const FeatureMatrix& fm, const SvmConfig& svm_cfg, GaConfig ga_cfg,
                                const SelectionOptions& options, RngSpec rng) {
  const std::size_t d = fm.cols();
  require(d >= 2, ErrorCode::InvalidArgument, "feature selection needs at least two features");
  ga_cfg.gene_count = d;

  struct Evaluated {
    double fitness;
    double accuracy;
  };
  std::map<std::vector<bool>, Evaluated> cache;
  const RngSpec cv_rng = selection_cv_stream(rng);

  GaProblem problem;
  problem.range = {0, 1};
  problem.fitness = [&](const Chromosome& c) {
    const auto mask = FeatureMask::from_chromosome(c);
    auto it = cache.find(mask.bits);
    if (it == cache.end()) {
      const double acc = mask_fitness(mask, fm, svm_cfg, options.folds, cv_rng, 0.0);
      const double penalty = options.lambda * static_cast<double>(mask.popcount()) / static_cast<double>(d);
      it = cache.emplace(mask.bits, Evaluated{acc - penalty, acc}).first;
    }
    // The GA needs non-negative fitness; ranking happens on the cached values.
    return std::max(it->second.fitness, 0.0);
  };
  problem.repair = [](Chromosome& c, Rng& r) {
    if (std::all_of(c.genes.begin(), c.genes.end(), [](int g) { return g == 0; })) {
      c.genes[r.index(c.genes.size())] = 1;
    }
  };
  problem.seeds.push_back({std::vector<int>(d, 1), std::nullopt});
  for (std::size_t f = 0; f < d; ++f) {
    std::vector<int> genes(d, 0);
    genes[f] = 1;
    problem.seeds.push_back({std::move(genes), std::nullopt});
  }

  auto evo = evolve(problem, ga_cfg, substream(rng, 0x6a));

  SelectionResult result;
  const std::pair<const std::vector<bool>, Evaluated>* best = nullptr;
  for (const auto& entry : cache) {
    if (best == nullptr) {
      best = &entry;
      continue;
    }
    const auto pc = std::count(entry.first.begin(), entry.first.end(), true);
    const auto best_pc = std::count(best->first.begin(), best->first.end(), true);
    const bool better = entry.second.fitness > best->second.fitness ||
                        (entry.second.fitness == best->second.fitness &&
                         (pc < best_pc || (pc == best_pc && entry.first < best->first)));
    if (better) best = &entry;
  }
  result.best_mask = FeatureMask{best->first};
  result.cv_accuracy = best->second.accuracy;
  result.fitness = best->second.fitness;
  result.masks_evaluated = cache.size();

  result.per_feature_frequency.assign(d, 0.0);
  for (const auto& member : evo.final_population) {
    for (std::size_t f = 0; f < d; ++f) result.per_feature_frequency[f] += member.genes[f] != 0 ? 1.0 : 0.0;
  }
  for (auto& freq : result.per_feature_frequency) {
    freq /= static_cast<double>(evo.final_population.size());
  }
  result.trace = std::move(evo.trace);
  return result;
}

std::vector<SelectionRow> selection_report(const SelectionResult& r,
                                           const std::vector<std::string>& feature_names,
                                           const FeatureScoreTable& scores) {
  require(feature_names.size() == r.best_mask.size() &&
              feature_names.size() == r.per_feature_frequency.size(),
          ErrorCode::DimensionMismatch, "feature names do not match the selection result");
  const std::set<std::string> universe(feature_names.begin(), feature_names.end());
  std::set<std::string> scored;
  for (const auto& row : scores.rows) scored.insert(row.feature);
  require(universe == scored && universe.size() == feature_names.size() &&
              scored.size() == scores.rows.size(),
          ErrorCode::FeatureUniverseMismatch, "score table and selection cover different features");

  std::vector<SelectionRow> rows;
  for (const auto& s : scores.rows) {
    const auto idx = static_cast<std::size_t>(
        std::find(feature_names.begin(), feature_names.end(), s.feature) - feature_names.begin());
    rows.push_back({s.feature, s.score, r.best_mask.bits[idx], r.per_feature_frequency[idx]});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SelectionRow& a, const SelectionRow& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.feature < b.feature;
  });
  return rows;
}

}  // namespace usab
