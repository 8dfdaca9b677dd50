#include "usab/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "usab/error.hpp"

namespace usab {

namespace {

constexpr double kVarianceFloor = 1e-9;

std::size_t argmax_lowest(std::span<const double> values) {
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

struct KnnState {
  Matrix X;
  Labels labels;
};

struct NbState {
  std::vector<double> log_prior;      // -inf for classes without rows
  std::vector<std::vector<double>> mean;
  std::vector<std::vector<double>> variance;
};

struct LogRegState {
  Matrix weights;  // K x D
  std::vector<double> bias;
};

std::vector<double> softmax_logits(const LogRegState& s, std::span<const double> x) {
  std::vector<double> z(s.bias);
  for (std::size_t c = 0; c < z.size(); ++c) {
    const auto w = s.weights.row(c);
    z[c] += std::inner_product(w.begin(), w.end(), x.begin(), 0.0);
  }
  return z;
}

void softmax_in_place(std::vector<double>& z) {
  const double top = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (auto& v : z) {
    v = std::exp(v - top);
    sum += v;
  }
  for (auto& v : z) v /= sum;
}

}  // namespace

struct BaselineModel::State {
  std::variant<KnnState, NbState, std::vector<DecisionTree>, LogRegState> fitted;
};

std::string kind_name(const BaselineKind& kind) {
  struct Visitor {
    std::string operator()(const KnnParams&) const { return "knn"; }
    std::string operator()(const GaussianNbParams&) const { return "gaussian_nb"; }
    std::string operator()(const TreeParams&) const { return "tree"; }
    std::string operator()(const ForestParams&) const { return "forest"; }
    std::string operator()(const LogRegParams&) const { return "logreg"; }
  };
  return std::visit(Visitor{}, kind);
}

double gini_impurity(std::span<const double> class_counts) {
  const double total = std::accumulate(class_counts.begin(), class_counts.end(), 0.0);
  if (total <= 0.0) return 0.0;
  double sum_sq = 0.0;
  for (double c : class_counts) sum_sq += (c / total) * (c / total);
  return 1.0 - sum_sq;
}

const TreeNode& DecisionTree::leaf_for(std::span<const double> x) const {
  std::size_t node = 0;
  while (nodes[node].feature != TreeNode::npos) {
    node = x[nodes[node].feature] <= nodes[node].threshold ? nodes[node].left : nodes[node].right;
  }
  return nodes[node];
}

std::size_t DecisionTree::predict(std::span<const double> x) const {
  return argmax_lowest(leaf_for(x).class_counts);
}

DecisionTree grow_tree(const Matrix& X, std::span<const std::size_t> labels, std::size_t num_classes,
                       std::span<const std::size_t> rows, std::size_t max_depth,
                       std::size_t features_per_split, Rng& rng) {
  const std::size_t d = X.cols();
  features_per_split = std::clamp<std::size_t>(features_per_split, 1, d);
  DecisionTree tree;

  struct Pending {
    std::size_t node;
    std::vector<std::size_t> rows;
    std::size_t depth;
  };

  auto counts_of = [&](const std::vector<std::size_t>& subset) {
    std::vector<double> counts(num_classes, 0.0);
    for (std::size_t r : subset) counts[labels[r]] += 1.0;
    return counts;
  };

  tree.nodes.push_back({});
  std::vector<Pending> stack;
  stack.push_back({0, std::vector<std::size_t>(rows.begin(), rows.end()), 0});

  while (!stack.empty()) {
    Pending job = std::move(stack.back());
    stack.pop_back();
    auto counts = counts_of(job.rows);
    const double parent_gini = gini_impurity(counts);
    tree.nodes[job.node].class_counts = counts;
    if (job.depth >= max_depth || parent_gini == 0.0 || job.rows.size() < 2) continue;

    std::vector<std::size_t> candidates(d);
    std::iota(candidates.begin(), candidates.end(), std::size_t{0});
    if (features_per_split < d) {
      candidates = rng.sample_without_replacement(d, features_per_split);
      std::sort(candidates.begin(), candidates.end());
    }

    const double n = static_cast<double>(job.rows.size());
    double best_score = parent_gini;
    std::size_t best_feature = TreeNode::npos;
    double best_threshold = 0.0;
    std::vector<std::pair<double, std::size_t>> column(job.rows.size());
    for (std::size_t f : candidates) {
      for (std::size_t i = 0; i < job.rows.size(); ++i) {
        column[i] = {X(job.rows[i], f), labels[job.rows[i]]};
      }
      std::sort(column.begin(), column.end());
      std::vector<double> left(num_classes, 0.0);
      std::vector<double> right = counts;
      for (std::size_t i = 0; i + 1 < column.size(); ++i) {
        left[column[i].second] += 1.0;
        right[column[i].second] -= 1.0;
        if (column[i].first == column[i + 1].first) continue;
        const double nl = static_cast<double>(i + 1);
        const double score = (nl / n) * gini_impurity(left) + ((n - nl) / n) * gini_impurity(right);
        // Strict improvement keeps the first (lowest) feature and threshold on ties.
        if (score < best_score - 1e-15) {
          best_score = score;
          best_feature = f;
          best_threshold = 0.5 * (column[i].first + column[i + 1].first);
        }
      }
    }
    if (best_feature == TreeNode::npos) continue;

    std::vector<std::size_t> left_rows;
    std::vector<std::size_t> right_rows;
    for (std::size_t r : job.rows) {
      (X(r, best_feature) <= best_threshold ? left_rows : right_rows).push_back(r);
    }
    const std::size_t left_id = tree.nodes.size();
    tree.nodes.push_back({});
    tree.nodes.push_back({});
    auto& node = tree.nodes[job.node];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = left_id;
    node.right = left_id + 1;
    stack.push_back({left_id + 1, std::move(right_rows), job.depth + 1});
    stack.push_back({left_id, std::move(left_rows), job.depth + 1});
  }
  return tree;
}

BaselineModel::BaselineModel(BaselineKind kind, std::size_t num_classes, std::size_t dimension,
                             std::shared_ptr<const State> state)
    : kind_(std::move(kind)), num_classes_(num_classes), dimension_(dimension), state_(std::move(state)) {}

BaselineModel BaselineModel::train(const BaselineKind& kind, const Matrix& X,
                                   std::span<const std::size_t> labels, std::size_t num_classes,
                                   RngSpec rng) {
  const std::size_t n = X.rows();
  const std::size_t d = X.cols();
  require(n >= 1 && d >= 1, ErrorCode::InvalidArgument, "training matrix is empty");
  require(labels.size() == n, ErrorCode::LengthMismatch, "one label per row required");
  require(X.all_finite(), ErrorCode::NonFiniteFeature, "training matrix contains NaN or inf");
  for (std::size_t label : labels) {
    require(label < num_classes, ErrorCode::UnknownClass, "label outside class range");
  }
  const bool is_knn = std::holds_alternative<KnnParams>(kind);
  require(is_knn || distinct_count(labels) >= 2, ErrorCode::SingleClassInput,
          kind_name(kind) + " needs at least two classes in the training data");

  auto state = std::make_shared<State>();
  if (const auto* p = std::get_if<KnnParams>(&kind)) {
    require(p->k >= 1, ErrorCode::InvalidArgument, "k must be >= 1");
    state->fitted = KnnState{X, Labels(labels.begin(), labels.end())};
  } else if (std::holds_alternative<GaussianNbParams>(kind)) {
    NbState nb;
    nb.log_prior.assign(num_classes, -std::numeric_limits<double>::infinity());
    nb.mean.assign(num_classes, std::vector<double>(d, 0.0));
    nb.variance.assign(num_classes, std::vector<double>(d, kVarianceFloor));
    std::vector<double> count(num_classes, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      count[labels[i]] += 1.0;
      for (std::size_t j = 0; j < d; ++j) nb.mean[labels[i]][j] += X(i, j);
    }
    for (std::size_t c = 0; c < num_classes; ++c) {
      if (count[c] == 0.0) continue;
      nb.log_prior[c] = std::log(count[c] / static_cast<double>(n));
      for (auto& m : nb.mean[c]) m /= count[c];
    }
    std::vector<std::vector<double>> ss(num_classes, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        const double diff = X(i, j) - nb.mean[labels[i]][j];
        ss[labels[i]][j] += diff * diff;
      }
    }
    for (std::size_t c = 0; c < num_classes; ++c) {
      if (count[c] == 0.0) continue;
      for (std::size_t j = 0; j < d; ++j) {
        nb.variance[c][j] = std::max(ss[c][j] / count[c], kVarianceFloor);
      }
    }
    state->fitted = std::move(nb);
  } else if (const auto* p = std::get_if<TreeParams>(&kind)) {
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    Rng tree_rng = Rng::stream(rng, 0);
    state->fitted = std::vector<DecisionTree>{grow_tree(X, labels, num_classes, rows, p->max_depth, d, tree_rng)};
  } else if (const auto* p = std::get_if<ForestParams>(&kind)) {
    require(p->n_trees >= 1, ErrorCode::InvalidArgument, "n_trees must be >= 1");
    const auto mtry = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(d))));
    std::vector<DecisionTree> trees;
    trees.reserve(p->n_trees);
    for (std::size_t t = 0; t < p->n_trees; ++t) {
      Rng tree_rng = Rng::stream(rng, t, 1);
      std::vector<std::size_t> bootstrap(n);
      for (auto& r : bootstrap) r = tree_rng.index(n);
      trees.push_back(grow_tree(X, labels, num_classes, bootstrap, p->max_depth, mtry, tree_rng));
    }
    state->fitted = std::move(trees);
  } else {
    const auto& lp = std::get<LogRegParams>(kind);
    LogRegState lr{Matrix(num_classes, d, 0.0), std::vector<double>(num_classes, 0.0)};
    Matrix grad_w(num_classes, d);
    std::vector<double> grad_b(num_classes);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t epoch = 0; epoch < lp.epochs; ++epoch) {
      grad_w = Matrix(num_classes, d, 0.0);
      std::fill(grad_b.begin(), grad_b.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        auto prob = softmax_logits(lr, X.row(i));
        softmax_in_place(prob);
        for (std::size_t c = 0; c < num_classes; ++c) {
          const double err = prob[c] - (labels[i] == c ? 1.0 : 0.0);
          grad_b[c] += err;
          for (std::size_t j = 0; j < d; ++j) grad_w(c, j) += err * X(i, j);
        }
      }
      for (std::size_t c = 0; c < num_classes; ++c) {
        lr.bias[c] -= lp.learning_rate * grad_b[c] * inv_n;
        for (std::size_t j = 0; j < d; ++j) lr.weights(c, j) -= lp.learning_rate * grad_w(c, j) * inv_n;
      }
    }
    state->fitted = std::move(lr);
  }
  return BaselineModel(kind, num_classes, d, std::move(state));
}

std::vector<double> BaselineModel::scores(std::span<const double> x) const {
  require(x.size() == dimension_, ErrorCode::DimensionMismatch,
          "input dimension does not match the model");
  std::vector<double> out(num_classes_, 0.0);

  if (const auto* knn = std::get_if<KnnState>(&state_->fitted)) {
    const std::size_t n = knn->X.rows();
    const std::size_t k = std::min(std::get<KnnParams>(kind_).k, n);
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      const auto r = knn->X.row(i);
      for (std::size_t j = 0; j < r.size(); ++j) s += (r[j] - x[j]) * (r[j] - x[j]);
      dist[i] = {s, i};
    }
    // Equal distances resolve to the lower training row.
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    for (std::size_t i = 0; i < k; ++i) out[knn->labels[dist[i].second]] += 1.0;
  } else if (const auto* nb = std::get_if<NbState>(&state_->fitted)) {
    for (std::size_t c = 0; c < num_classes_; ++c) {
      double log_post = nb->log_prior[c];
      if (std::isinf(log_post)) {
        out[c] = log_post;
        continue;
      }
      for (std::size_t j = 0; j < x.size(); ++j) {
        const double var = nb->variance[c][j];
        const double diff = x[j] - nb->mean[c][j];
        log_post += -0.5 * std::log(2.0 * M_PI * var) - diff * diff / (2.0 * var);
      }
      out[c] = log_post;
    }
  } else if (const auto* trees = std::get_if<std::vector<DecisionTree>>(&state_->fitted)) {
    if (std::holds_alternative<TreeParams>(kind_)) {
      const auto& counts = trees->front().leaf_for(x).class_counts;
      const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
      for (std::size_t c = 0; c < num_classes_; ++c) out[c] = counts[c] / total;
    } else {
      for (const auto& tree : *trees) out[tree.predict(x)] += 1.0;
      for (auto& v : out) v /= static_cast<double>(trees->size());
    }
  } else {
    out = softmax_logits(std::get<LogRegState>(state_->fitted), x);
    softmax_in_place(out);
  }
  return out;
}

std::size_t BaselineModel::predict(std::span<const double> x) const {
  return argmax_lowest(scores(x));
}

const std::vector<DecisionTree>& BaselineModel::trees() const {
  const auto* trees = std::get_if<std::vector<DecisionTree>>(&state_->fitted);
  require(trees != nullptr, ErrorCode::InvalidArgument, kind_name(kind_) + " model has no trees");
  return *trees;
}

}  // namespace usab
