#include "usab/evaluation.hpp"

#include "usab/error.hpp"

namespace usab {

EvaluationResult evaluate_on_folds(const FeatureMatrix& fm, const ModelSpec& spec,
                                   std::span<const FoldIndices> folds, RngSpec rng) {
  require(fm.labeled(), ErrorCode::InvalidArgument, "evaluation needs labels");
  require(!folds.empty(), ErrorCode::InvalidArgument, "no folds given");
  const std::size_t k = fm.num_classes();

  Labels predictions(fm.rows(), 0);
  std::vector<bool> seen(fm.rows(), false);
  Matrix scores(fm.rows(), k);
  ConfusionMatrix cm(fm.class_names);

  for (std::size_t f = 0; f < folds.size(); ++f) {
    const auto& fold = folds[f];
    Labels train_labels;
    train_labels.reserve(fold.train.size());
    for (std::size_t i : fold.train) train_labels.push_back(fm.labels[i]);
    const auto model =
        Classifier::train(spec, fm.values.take_rows(fold.train), train_labels, k, substream(rng, f, 1));
    for (std::size_t i : fold.test) {
      require(i < fm.rows() && !seen[i], ErrorCode::InvalidArgument, "folds must not overlap");
      seen[i] = true;
      const auto s = model.scores(fm.values.row(i));
      std::copy(s.begin(), s.end(), scores.row(i).begin());
      predictions[i] = model.predict(fm.values.row(i));
      cm.add(predictions[i], fm.labels[i]);
    }
  }

  // Rows missing from every test fold contribute no scores.
  std::vector<std::size_t> tested;
  for (std::size_t i = 0; i < fm.rows(); ++i) {
    if (seen[i]) tested.push_back(i);
  }
  ScoredPredictions scored{scores.take_rows(tested), {}};
  for (std::size_t i : tested) scored.truth.push_back(fm.labels[i]);

  EvaluationResult result{cm, metrics(cm, &scored), false, std::move(predictions)};
  result.meets_threshold = result.metrics.accuracy > kAcceptanceAccuracy;
  return result;
}

std::vector<FoldIndices> evaluation_folds(std::span<const std::size_t> labels, std::size_t folds,
                                          RngSpec rng) {
  require(folds >= 2, ErrorCode::InvalidArgument, "folds must be >= 2");
  return kfold(labels, folds, SplitSpec{0.7, substream(rng, 0xf01d), true});
}

EvaluationResult evaluate_pipeline(const FeatureMatrix& fm, const ModelSpec& spec, std::size_t folds,
                                   RngSpec rng) {
  require(fm.labeled(), ErrorCode::InvalidArgument, "evaluation needs labels");
  const auto parts = evaluation_folds(fm.labels, folds, rng);
  return evaluate_on_folds(fm, spec, parts, rng);
}

}  // namespace usab
