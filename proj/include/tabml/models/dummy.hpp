#pragma once

#include <string>
#include <vector>

#include "tabml/models/model.hpp"
#include "tabml/rng.hpp"

namespace tabml::models {

namespace detail {

class DummyFitted : public Fitted {
 public:
  bool stratified = false;
  int majority = 0;
  double p1 = 0.0;  // training frequency of class 1
  std::uint64_t seed = 0;

  std::vector<int> predict(const FeatureMatrix& x) const override {
    std::vector<int> out(x.rows, majority);
    if (stratified) {
      // Draws follow the class prior; the fresh generator keeps predict pure.
      Rng rng(seed);
      for (std::size_t r = 0; r < x.rows; ++r) out[r] = rng.bernoulli(p1) ? 1 : 0;
    }
    return out;
  }

  std::vector<double> decision_scores(const FeatureMatrix& x) const override {
    if (stratified) {
      const auto preds = predict(x);
      return std::vector<double>(preds.begin(), preds.end());
    }
    return std::vector<double>(x.rows, p1);
  }
};

}  // namespace detail

// Baseline predictor. "most_frequent" always answers the training majority
// (ties to class 0); "stratified" draws labels from the class prior using
// the spec seed.
inline FitOutput fit_dummy(const ModelSpec& spec, const FeatureMatrix& train) {
  const std::string strategy = str_param(spec.params, "strategy");
  if (strategy != "most_frequent" && strategy != "stratified")
    throw ConfigError("dummy: unknown strategy '" + strategy + "'");
  auto fitted = std::make_shared<detail::DummyFitted>();
  fitted->stratified = strategy == "stratified";
  fitted->majority = detail::majority_label(train.target);
  const auto counts = detail::class_counts(train.target);
  fitted->p1 = static_cast<double>(counts[1]) / static_cast<double>(train.rows);
  fitted->seed = spec.seed;
  return {fitted, {}};
}

}  // namespace tabml::models
