#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "tabml/models/model.hpp"
#include "tabml/rng.hpp"

namespace tabml::models {

namespace detail {

// CART configuration. The same builder serves the plain decision tree,
// forest members (feature subsampling), extra-trees (random thresholds) and
// boosted stumps (sample weights, depth 1).
struct TreeOptions {
  std::size_t max_depth = 0;       // 0 means unlimited
  std::size_t min_split = 2;       // smallest node eligible for splitting
  std::size_t features_per_split = 0;  // 0 means all features
  bool random_thresholds = false;  // extra-trees style
};

struct TreeNode {
  // Internal node when feature != npos, else leaf.
  std::size_t feature = SIZE_MAX;
  double threshold = 0.0;
  std::size_t left = 0;
  std::size_t right = 0;
  int label = 0;        // leaf majority, ties to class 0
  double fraction1 = 0.0;  // weighted class-1 fraction at the leaf
};

class Cart {
 public:
  std::vector<TreeNode> nodes;

  std::size_t leaf_for(std::span<const double> row) const {
    std::size_t at = 0;
    while (nodes[at].feature != SIZE_MAX)
      at = row[nodes[at].feature] <= nodes[at].threshold ? nodes[at].left : nodes[at].right;
    return at;
  }

  int predict_row(std::span<const double> row) const { return nodes[leaf_for(row)].label; }
  double fraction1_row(std::span<const double> row) const { return nodes[leaf_for(row)].fraction1; }
};

struct SplitChoice {
  std::size_t feature = 0;
  double threshold = 0.0;
  double impurity = std::numeric_limits<double>::infinity();
};

inline double gini_of(double w1, double w_total) {
  if (w_total <= 0.0) return 0.0;
  const double p1 = w1 / w_total;
  const double p0 = 1.0 - p1;
  return 1.0 - p0 * p0 - p1 * p1;
}

// Exhaustive best split of one feature: sort the node's values, scan the
// midpoints between distinct neighbors, and keep the lowest weighted Gini.
// The scan order makes tie-breaking deterministic (first feature, then
// lowest threshold).
inline std::optional<std::pair<double, double>> best_split_of_feature(
    const FeatureMatrix& x, const std::vector<double>& weights,
    const std::vector<std::size_t>& rows, std::size_t feature) {
  struct Entry {
    double value;
    double weight;
    int label;
  };
  std::vector<Entry> entries;
  entries.reserve(rows.size());
  for (std::size_t r : rows)
    entries.push_back({x.at(r, feature), weights[r], x.target[r]});
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.value < b.value; });
  if (entries.front().value == entries.back().value) return std::nullopt;

  double total_w = 0.0, total_w1 = 0.0;
  for (const auto& e : entries) {
    total_w += e.weight;
    if (e.label == 1) total_w1 += e.weight;
  }

  double best_impurity = std::numeric_limits<double>::infinity();
  double best_threshold = 0.0;
  double left_w = 0.0, left_w1 = 0.0;
  for (std::size_t i = 0; i + 1 < entries.size(); ++i) {
    left_w += entries[i].weight;
    if (entries[i].label == 1) left_w1 += entries[i].weight;
    if (entries[i].value == entries[i + 1].value) continue;
    const double right_w = total_w - left_w;
    const double right_w1 = total_w1 - left_w1;
    const double impurity =
        (left_w * gini_of(left_w1, left_w) + right_w * gini_of(right_w1, right_w)) / total_w;
    if (impurity < best_impurity - 1e-12) {
      best_impurity = impurity;
      best_threshold = entries[i].value + (entries[i + 1].value - entries[i].value) / 2.0;
    }
  }
  if (!std::isfinite(best_impurity)) return std::nullopt;
  return std::make_pair(best_threshold, best_impurity);
}

// Extra-trees variant: a single uniformly random threshold between the
// node's min and max of the feature.
inline std::optional<std::pair<double, double>> random_split_of_feature(
    const FeatureMatrix& x, const std::vector<double>& weights,
    const std::vector<std::size_t>& rows, std::size_t feature, Rng& rng) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t r : rows) {
    lo = std::min(lo, x.at(r, feature));
    hi = std::max(hi, x.at(r, feature));
  }
  if (lo == hi) return std::nullopt;
  const double threshold = lo + rng.uniform() * (hi - lo);

  double left_w = 0.0, left_w1 = 0.0, total_w = 0.0, total_w1 = 0.0;
  for (std::size_t r : rows) {
    const double w = weights[r];
    total_w += w;
    if (x.target[r] == 1) total_w1 += w;
    if (x.at(r, feature) <= threshold) {
      left_w += w;
      if (x.target[r] == 1) left_w1 += w;
    }
  }
  if (left_w == 0.0 || left_w == total_w) return std::nullopt;
  const double right_w = total_w - left_w;
  const double right_w1 = total_w1 - left_w1;
  const double impurity =
      (left_w * gini_of(left_w1, left_w) + right_w * gini_of(right_w1, right_w)) / total_w;
  return std::make_pair(threshold, impurity);
}

class CartBuilder {
 public:
  CartBuilder(const FeatureMatrix& x, const std::vector<double>& weights, TreeOptions options,
              Rng* rng)
      : x_(x), weights_(weights), options_(options), rng_(rng) {}

  Cart build(std::vector<std::size_t> rows) {
    Cart tree;
    grow(tree, std::move(rows), 0);
    return tree;
  }

 private:
  std::size_t grow(Cart& tree, std::vector<std::size_t> rows, std::size_t depth) {
    const std::size_t node_index = tree.nodes.size();
    tree.nodes.emplace_back();

    double w_total = 0.0, w1 = 0.0;
    for (std::size_t r : rows) {
      w_total += weights_[r];
      if (x_.target[r] == 1) w1 += weights_[r];
    }
    tree.nodes[node_index].fraction1 = w_total > 0.0 ? w1 / w_total : 0.0;
    tree.nodes[node_index].label = w1 > w_total - w1 ? 1 : 0;

    const bool pure = w1 == 0.0 || w1 == w_total;
    const bool depth_capped = options_.max_depth != 0 && depth >= options_.max_depth;
    if (pure || depth_capped || rows.size() < options_.min_split) return node_index;

    const auto candidates = candidate_features();
    SplitChoice best;
    bool found = false;
    for (std::size_t f : candidates) {
      const auto split = options_.random_thresholds
                             ? random_split_of_feature(x_, weights_, rows, f, *rng_)
                             : best_split_of_feature(x_, weights_, rows, f);
      if (!split) continue;
      if (!found || split->second < best.impurity - 1e-12) {
        best = {f, split->first, split->second};
        found = true;
      }
    }
    if (!found) return node_index;  // all candidate features constant here

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : rows)
      (x_.at(r, best.feature) <= best.threshold ? left_rows : right_rows).push_back(r);
    if (left_rows.empty() || right_rows.empty()) return node_index;

    rows.clear();
    rows.shrink_to_fit();
    tree.nodes[node_index].feature = best.feature;
    tree.nodes[node_index].threshold = best.threshold;
    const std::size_t left = grow(tree, std::move(left_rows), depth + 1);
    const std::size_t right = grow(tree, std::move(right_rows), depth + 1);
    tree.nodes[node_index].left = left;
    tree.nodes[node_index].right = right;
    return node_index;
  }

  std::vector<std::size_t> candidate_features() {
    std::vector<std::size_t> all(x_.cols);
    std::iota(all.begin(), all.end(), std::size_t{0});
    if (options_.features_per_split == 0 || options_.features_per_split >= x_.cols || !rng_)
      return all;
    // Seeded draw without replacement, then sorted so the scan order stays
    // feature-ascending.
    const auto picked = rng_->sample_without_replacement(x_.cols, options_.features_per_split);
    std::vector<std::size_t> subset(picked.begin(), picked.end());
    std::sort(subset.begin(), subset.end());
    return subset;
  }

  const FeatureMatrix& x_;
  const std::vector<double>& weights_;
  TreeOptions options_;
  Rng* rng_;
};

class DecisionTreeFitted : public Fitted {
 public:
  Cart tree;

  std::vector<int> predict(const FeatureMatrix& x) const override {
    std::vector<int> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) out[r] = tree.predict_row(x.row(r));
    return out;
  }

  // Leaf class-1 fraction, a probability estimate.
  std::vector<double> decision_scores(const FeatureMatrix& x) const override {
    std::vector<double> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) out[r] = tree.fraction1_row(x.row(r));
    return out;
  }
};

}  // namespace detail

// CART decision tree: Gini impurity, exhaustive midpoint thresholds scanned
// in feature order, grown until pure unless capped.
inline FitOutput fit_decision_tree(const ModelSpec& spec, const FeatureMatrix& train) {
  detail::TreeOptions options;
  options.max_depth = static_cast<std::size_t>(num_param(spec.params, "max_depth"));
  options.min_split = static_cast<std::size_t>(num_param(spec.params, "min_split"));
  if (options.min_split < 2) throw ParameterError("decision-tree: min_split must be at least 2");

  const std::vector<double> weights(train.rows, 1.0);
  std::vector<std::size_t> rows(train.rows);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  detail::CartBuilder builder(train, weights, options, nullptr);
  auto fitted = std::make_shared<detail::DecisionTreeFitted>();
  fitted->tree = builder.build(std::move(rows));
  return {fitted, {}};
}

}  // namespace tabml::models
