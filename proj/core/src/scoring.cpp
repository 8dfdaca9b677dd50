#include "usab/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "usab/error.hpp"

namespace usab {

ScoringProblem ScoringProblem::from_labeled(const FeatureMatrix& fm, double weight_resolution) {
  require(fm.labeled(), ErrorCode::InvalidArgument, "scoring needs labelled rows");
  require(fm.num_classes() >= 2, ErrorCode::SingleClassInput, "scoring needs at least two classes");
  ScoringProblem p{fm, {}, weight_resolution};
  const double top = static_cast<double>(fm.num_classes() - 1);
  p.targets.reserve(fm.rows());
  for (std::size_t label : fm.labels) p.targets.push_back((top - static_cast<double>(label)) / top);
  p.validate();
  return p;
}

void ScoringProblem::validate() const {
  require(matrix.rows() >= 1 && matrix.cols() >= 1, ErrorCode::InvalidArgument, "empty scoring matrix");
  require(targets.size() == matrix.rows(), ErrorCode::LengthMismatch, "one target per row required");
  for (double y : targets) {
    require(y >= 0.0 && y <= 1.0, ErrorCode::InvalidArgument, "targets must lie in [0,1]");
  }
  require(weight_resolution > 0.0 && weight_resolution <= 1.0, ErrorCode::InvalidArgument,
          "weight resolution must lie in (0,1]");
}

int ScoringProblem::levels() const { return static_cast<int>(std::lround(1.0 / weight_resolution)); }

std::vector<double> residuals(std::span<const double> w, const ScoringProblem& problem) {
  const auto& X = problem.matrix.values;
  require(w.size() == X.cols(), ErrorCode::DimensionMismatch, "one weight per feature required");
  require(problem.targets.size() == X.rows(), ErrorCode::LengthMismatch, "one target per row required");
  std::vector<double> r(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) {
    double pred = 0.0;
    for (std::size_t d = 0; d < w.size(); ++d) pred += w[d] * X(i, d);
    r[i] = problem.targets[i] - pred;
  }
  return r;
}

ScoringFitness fitness_from_residuals(std::span<const double> r) {
  require(!r.empty(), ErrorCode::InvalidArgument, "no residuals");
  std::vector<double> sq(r.size());
  std::transform(r.begin(), r.end(), sq.begin(), [](double v) { return v * v; });
  std::sort(sq.begin(), sq.end());
  double sum = 0.0;
  for (double v : sq) sum += v;
  const double R = std::sqrt(sum / static_cast<double>(r.size()));
  return {R, 1.0 / (1.0 + R)};
}

ScoringFitness total_residual(std::span<const double> w, const ScoringProblem& problem) {
  return fitness_from_residuals(residuals(w, problem));
}

void FeatureScoreTable::sort() {
  std::stable_sort(rows.begin(), rows.end(), [](const FeatureScore& a, const FeatureScore& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.feature < b.feature;
  });
}

double FeatureScoreTable::score_of(const std::string& feature) const {
  for (const auto& row : rows) {
    if (row.feature == feature) return row.score;
  }
  fail(ErrorCode::FeatureUniverseMismatch, "no score for feature '" + feature + "'");
}

GaConfig default_scoring_ga(std::size_t d) {
  GaConfig cfg;
  cfg.population_size = 40;
  cfg.gene_count = d;
  cfg.crossover_rate = 0.8;
  cfg.mutation_rate = 0.05;
  cfg.max_generations = 300;
  cfg.elitism = 2;
  return cfg;
}

ScoringResult score_features(const ScoringProblem& problem, GaConfig ga, RngSpec rng) {
  problem.validate();
  const std::size_t d = problem.matrix.cols();
  require(ga.gene_count == d, ErrorCode::GeneCountMismatch, "gene count must equal the feature count");
  const int levels = problem.levels();
  const double step = problem.weight_resolution;

  auto to_weights = [&](const Chromosome& c) {
    std::vector<double> w(c.genes.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::min(1.0, c.genes[i] * step);
    return w;
  };

  GaProblem gp;
  gp.range = {0, levels};
  gp.fitness = [&](const Chromosome& c) { return total_residual(to_weights(c), problem).F; };
  const int equal = static_cast<int>(std::lround(1.0 / (static_cast<double>(d) * step)));
  gp.seeds.push_back({std::vector<int>(d, std::min(equal, levels)), std::nullopt});

  auto evo = evolve(gp, ga, rng);

  ScoringResult result;
  result.weights = to_weights(evo.best);
  result.fitness = total_residual(result.weights, problem);
  for (std::size_t i = 0; i < d; ++i) {
    result.table.rows.push_back({problem.matrix.feature_names[i], result.weights[i]});
  }
  result.table.sort();
  result.trace = std::move(evo.trace);
  return result;
}

void export_score_table(const FeatureScoreTable& t, std::ostream& out) {
  out << "feature,score\n";
  char buf[64];
  for (const auto& row : t.rows) {
    std::snprintf(buf, sizeof buf, "%.4f", row.score);
    out << row.feature << ',' << buf << '\n';
  }
}

void export_score_table(const FeatureScoreTable& t, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::IoError, "cannot open " + path.string());
  export_score_table(t, out);
  require(static_cast<bool>(out), ErrorCode::IoError, "failed writing " + path.string());
}

FeatureScoreTable read_score_table(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)) && line == "feature,score", ErrorCode::MissingHeader,
          "score table must start with 'feature,score'");
  FeatureScoreTable t;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    require(comma != std::string::npos, ErrorCode::ParseError, "malformed score row: " + line);
    std::istringstream num(line.substr(comma + 1));
    double score = 0.0;
    num >> score;
    require(!num.fail(), ErrorCode::ParseError, "malformed score: " + line);
    t.rows.push_back({line.substr(0, comma), score});
  }
  return t;
}

}  // namespace usab
