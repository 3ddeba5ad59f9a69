#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "tabml/models/model.hpp"

namespace tabml::models {

namespace detail {

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

class NearestCentroidFitted : public Fitted {
 public:
  std::vector<double> centroid0;
  std::vector<double> centroid1;

  std::vector<int> predict(const FeatureMatrix& x) const override {
    std::vector<int> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) {
      const auto row = x.row(r);
      const double d0 = squared_distance(row, centroid0);
      const double d1 = squared_distance(row, centroid1);
      out[r] = d1 < d0 ? 1 : 0;  // tie predicts class 0
    }
    return out;
  }

  // Margin: positive when the class-1 centroid is nearer.
  std::vector<double> decision_scores(const FeatureMatrix& x) const override {
    std::vector<double> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) {
      const auto row = x.row(r);
      out[r] = std::sqrt(squared_distance(row, centroid0)) -
               std::sqrt(squared_distance(row, centroid1));
    }
    return out;
  }
};

// Lazy learner: keeps the training matrix and votes among the k nearest
// rows. Distance ties are broken by the lower training-row index.
class KNeighborsFitted : public Fitted {
 public:
  std::size_t k = 5;
  FeatureMatrix train;

  std::vector<double> neighbor_vote(const FeatureMatrix& x) const {
    std::vector<double> votes(x.rows);
    std::vector<std::pair<double, std::size_t>> dist(train.rows);
    for (std::size_t r = 0; r < x.rows; ++r) {
      const auto row = x.row(r);
      for (std::size_t t = 0; t < train.rows; ++t)
        dist[t] = {squared_distance(row, train.row(t)), t};
      const std::size_t use = std::min(k, train.rows);
      std::partial_sort(dist.begin(), dist.begin() + use, dist.end());
      double ones = 0.0;
      for (std::size_t i = 0; i < use; ++i)
        if (train.target[dist[i].second] == 1) ones += 1.0;
      votes[r] = ones / static_cast<double>(use);
    }
    return votes;
  }

  std::vector<int> predict(const FeatureMatrix& x) const override {
    const auto votes = neighbor_vote(x);
    std::vector<int> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) out[r] = votes[r] > 0.5 ? 1 : 0;
    return out;
  }

  std::vector<double> decision_scores(const FeatureMatrix& x) const override {
    return neighbor_vote(x);
  }
};

}  // namespace detail

inline FitOutput fit_nearest_centroid(const ModelSpec&, const FeatureMatrix& train) {
  auto fitted = std::make_shared<detail::NearestCentroidFitted>();
  fitted->centroid0.assign(train.cols, 0.0);
  fitted->centroid1.assign(train.cols, 0.0);
  const auto counts = detail::class_counts(train.target);
  for (std::size_t r = 0; r < train.rows; ++r) {
    auto& c = train.target[r] == 1 ? fitted->centroid1 : fitted->centroid0;
    const auto row = train.row(r);
    for (std::size_t f = 0; f < train.cols; ++f) c[f] += row[f];
  }
  for (std::size_t f = 0; f < train.cols; ++f) {
    fitted->centroid0[f] /= static_cast<double>(counts[0]);
    fitted->centroid1[f] /= static_cast<double>(counts[1]);
  }
  return {fitted, {}};
}

inline FitOutput fit_kneighbors(const ModelSpec& spec, const FeatureMatrix& train) {
  const double k = num_param(spec.params, "k");
  if (k < 1.0) throw ParameterError("kneighbors: k must be at least 1");
  auto fitted = std::make_shared<detail::KNeighborsFitted>();
  fitted->k = static_cast<std::size_t>(k);
  fitted->train = train;
  return {fitted, {}};
}

}  // namespace tabml::models
