#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <vector>

#include "tabml/models/tree.hpp"

namespace tabml::models {

namespace detail {

// Majority vote over a bag of trees; scores are the class-1 vote fraction.
class TreeEnsembleFitted : public Fitted {
 public:
  std::vector<Cart> trees;

  std::vector<double> vote_fraction(const FeatureMatrix& x) const {
    std::vector<double> votes(x.rows, 0.0);
    for (const auto& tree : trees) {
      for (std::size_t r = 0; r < x.rows; ++r)
        if (tree.predict_row(x.row(r)) == 1) votes[r] += 1.0;
    }
    const double m = static_cast<double>(trees.size());
    for (double& v : votes) v /= m;
    return votes;
  }

  std::vector<int> predict(const FeatureMatrix& x) const override {
    const auto votes = vote_fraction(x);
    std::vector<int> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) out[r] = votes[r] > 0.5 ? 1 : 0;
    return out;
  }

  std::vector<double> decision_scores(const FeatureMatrix& x) const override {
    return vote_fraction(x);
  }
};

inline std::vector<std::size_t> bootstrap_rows(std::size_t n, Rng& rng) {
  std::vector<std::size_t> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = rng.below(n);
  return rows;
}

// SAMME-boosted decision stumps.
class AdaBoostFitted : public Fitted {
 public:
  std::vector<Cart> stumps;
  std::vector<double> alphas;

  std::vector<double> weighted_vote(const FeatureMatrix& x) const {
    std::vector<double> score(x.rows, 0.0);
    double alpha_total = 0.0;
    for (std::size_t m = 0; m < stumps.size(); ++m) {
      alpha_total += alphas[m];
      for (std::size_t r = 0; r < x.rows; ++r)
        if (stumps[m].predict_row(x.row(r)) == 1) score[r] += alphas[m];
    }
    if (alpha_total > 0.0)
      for (double& s : score) s /= alpha_total;
    return score;
  }

  std::vector<int> predict(const FeatureMatrix& x) const override {
    const auto score = weighted_vote(x);
    std::vector<int> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) out[r] = score[r] > 0.5 ? 1 : 0;
    return out;
  }

  std::vector<double> decision_scores(const FeatureMatrix& x) const override {
    return weighted_vote(x);
  }
};

}  // namespace detail

// Random forest: bootstrap samples, sqrt(q) candidate features per split,
// unlimited depth, majority vote. Each tree runs on its own stream derived
// from the spec seed.
inline FitOutput fit_random_forest(const ModelSpec& spec, const FeatureMatrix& train) {
  const auto n_trees = static_cast<std::size_t>(num_param(spec.params, "trees"));
  if (n_trees < 1) throw ParameterError("random-forest: trees must be at least 1");
  detail::TreeOptions options;
  options.max_depth = static_cast<std::size_t>(num_param(spec.params, "max_depth"));
  options.min_split = static_cast<std::size_t>(num_param(spec.params, "min_split"));
  options.features_per_split = static_cast<std::size_t>(
      std::floor(std::sqrt(static_cast<double>(train.cols))));
  if (options.features_per_split < 1) options.features_per_split = 1;

  const std::vector<double> weights(train.rows, 1.0);
  auto fitted = std::make_shared<detail::TreeEnsembleFitted>();
  fitted->trees.reserve(n_trees);
  for (std::size_t t = 0; t < n_trees; ++t) {
    Rng rng(derive_seed(spec.seed, t));
    auto rows = detail::bootstrap_rows(train.rows, rng);
    detail::CartBuilder builder(train, weights, options, &rng);
    fitted->trees.push_back(builder.build(std::move(rows)));
  }
  return {fitted, {}};
}

// Bagging of unpruned trees on bootstrap samples, all features per split.
inline FitOutput fit_bagging(const ModelSpec& spec, const FeatureMatrix& train) {
  const auto n_trees = static_cast<std::size_t>(num_param(spec.params, "trees"));
  if (n_trees < 1) throw ParameterError("bagging: trees must be at least 1");
  detail::TreeOptions options;  // unpruned, all features

  const std::vector<double> weights(train.rows, 1.0);
  auto fitted = std::make_shared<detail::TreeEnsembleFitted>();
  fitted->trees.reserve(n_trees);
  for (std::size_t t = 0; t < n_trees; ++t) {
    Rng rng(derive_seed(spec.seed, t));
    auto rows = detail::bootstrap_rows(train.rows, rng);
    detail::CartBuilder builder(train, weights, options, &rng);
    fitted->trees.push_back(builder.build(std::move(rows)));
  }
  return {fitted, {}};
}

// Extremely randomized trees: whole sample per tree, sqrt(q) features and
// one random threshold per candidate feature.
inline FitOutput fit_extra_trees(const ModelSpec& spec, const FeatureMatrix& train) {
  const auto n_trees = static_cast<std::size_t>(num_param(spec.params, "trees"));
  if (n_trees < 1) throw ParameterError("extra-trees: trees must be at least 1");
  detail::TreeOptions options;
  options.random_thresholds = true;
  options.features_per_split = static_cast<std::size_t>(
      std::floor(std::sqrt(static_cast<double>(train.cols))));
  if (options.features_per_split < 1) options.features_per_split = 1;

  const std::vector<double> weights(train.rows, 1.0);
  std::vector<std::size_t> all_rows(train.rows);
  std::iota(all_rows.begin(), all_rows.end(), std::size_t{0});
  auto fitted = std::make_shared<detail::TreeEnsembleFitted>();
  fitted->trees.reserve(n_trees);
  for (std::size_t t = 0; t < n_trees; ++t) {
    Rng rng(derive_seed(spec.seed, t));
    detail::CartBuilder builder(train, weights, options, &rng);
    fitted->trees.push_back(builder.build(all_rows));
  }
  return {fitted, {}};
}

// AdaBoost (SAMME) over depth-1 stumps. A stump with weighted error at or
// above chance stops the boosting; a perfect stump takes a capped weight
// and also stops, since later reweighting would be degenerate.
inline FitOutput fit_adaboost(const ModelSpec& spec, const FeatureMatrix& train) {
  const auto n_estimators = static_cast<std::size_t>(num_param(spec.params, "estimators"));
  const double learning_rate = num_param(spec.params, "learning_rate");
  if (n_estimators < 1) throw ParameterError("adaboost: estimators must be at least 1");

  detail::TreeOptions options;
  options.max_depth = 1;

  std::vector<std::size_t> all_rows(train.rows);
  std::iota(all_rows.begin(), all_rows.end(), std::size_t{0});
  std::vector<double> weights(train.rows, 1.0 / static_cast<double>(train.rows));

  auto fitted = std::make_shared<detail::AdaBoostFitted>();
  for (std::size_t m = 0; m < n_estimators; ++m) {
    detail::CartBuilder builder(train, weights, options, nullptr);
    detail::Cart stump = builder.build(all_rows);

    double err = 0.0;
    std::vector<int> preds(train.rows);
    for (std::size_t r = 0; r < train.rows; ++r) {
      preds[r] = stump.predict_row(train.row(r));
      if (preds[r] != train.target[r]) err += weights[r];
    }

    if (err >= 0.5) {
      if (fitted->stumps.empty()) {
        // Nothing better than chance exists; keep the bare stump.
        fitted->stumps.push_back(std::move(stump));
        fitted->alphas.push_back(1.0);
      }
      break;
    }
    const double bounded = std::max(err, 1e-12);
    const double alpha = learning_rate * std::log((1.0 - bounded) / bounded);
    fitted->stumps.push_back(std::move(stump));
    fitted->alphas.push_back(alpha);
    if (err <= 0.0) break;

    double total = 0.0;
    for (std::size_t r = 0; r < train.rows; ++r) {
      if (preds[r] != train.target[r]) weights[r] *= std::exp(alpha);
      total += weights[r];
    }
    for (double& w : weights) w /= total;
  }
  return {fitted, {}};
}

}  // namespace tabml::models
