#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include "tabml/models/discriminant.hpp"
#include "tabml/models/dummy.hpp"
#include "tabml/models/ensemble.hpp"
#include "tabml/models/linear.hpp"
#include "tabml/models/mlp.hpp"
#include "tabml/models/naive_bayes.hpp"
#include "tabml/models/neighbors.hpp"
#include "tabml/models/tree.hpp"

namespace tabml::models {

struct RegistryEntry {
  std::string name;
  Hyperparams defaults;
  bool supports_scores = true;
  std::string score_kind;  // "probability", "margin", or "labels"
  bool core = true;        // optional extensions sit outside the default run
  bool needs_both_classes = true;
  std::function<FitOutput(const ModelSpec&, const FeatureMatrix&)> fit;
};

// Fixed-order table of every available classifier with its documented
// defaults. The core set mirrors the benchmark's standard lineup; the
// entries flagged non-core are optional extras.
inline const std::vector<RegistryEntry>& registry() {
  static const std::vector<RegistryEntry> entries = [] {
    std::vector<RegistryEntry> r;
    r.push_back({"dummy",
                 {{"strategy", std::string("most_frequent")}},
                 true,
                 "probability",
                 true,
                 false,
                 fit_dummy});
    r.push_back({"logistic-regression",
                 {{"learning_rate", 0.1}, {"epochs", 1000.0}, {"l2", 1e-4}},
                 true,
                 "probability",
                 true,
                 true,
                 fit_logistic});
    r.push_back({"sgd-classifier",
                 {{"learning_rate", 0.01}, {"epochs", 100.0}},
                 true,
                 "probability",
                 true,
                 true,
                 fit_sgd});
    r.push_back({"perceptron", {{"epochs", 100.0}}, true, "margin", true, true, fit_perceptron});
    r.push_back({"ridge-classifier", {{"l2", 1.0}}, true, "margin", true, true, fit_ridge});
    r.push_back({"linear-svc",
                 {{"l2", 1e-4}, {"epochs", 1000.0}},
                 true,
                 "margin",
                 true,
                 true,
                 fit_linear_svc});
    r.push_back({"gaussian-nb",
                 {{"var_smoothing", 1e-9}},
                 true,
                 "probability",
                 true,
                 true,
                 fit_gaussian_nb});
    r.push_back({"bernoulli-nb",
                 {{"alpha", 1.0}, {"binarize", 0.0}},
                 true,
                 "probability",
                 true,
                 true,
                 fit_bernoulli_nb});
    r.push_back(
        {"nearest-centroid", {}, true, "margin", true, true, fit_nearest_centroid});
    r.push_back({"kneighbors", {{"k", 5.0}}, true, "probability", true, true, fit_kneighbors});
    r.push_back({"decision-tree",
                 {{"max_depth", 0.0}, {"min_split", 2.0}},
                 true,
                 "probability",
                 true,
                 true,
                 fit_decision_tree});
    r.push_back({"random-forest",
                 {{"trees", 100.0}, {"max_depth", 0.0}, {"min_split", 2.0}},
                 true,
                 "probability",
                 true,
                 true,
                 fit_random_forest});
    r.push_back({"bagging", {{"trees", 10.0}}, true, "probability", true, true, fit_bagging});
    r.push_back({"adaboost",
                 {{"estimators", 50.0}, {"learning_rate", 1.0}},
                 true,
                 "probability",
                 true,
                 true,
                 fit_adaboost});
    r.push_back({"lda", {{"reg", 1e-6}}, true, "probability", true, true, fit_lda});
    r.push_back({"qda", {{"reg", 1e-6}}, true, "probability", true, true, fit_qda});
    // Optional extensions, excluded from the default benchmark run.
    r.push_back(
        {"extra-trees", {{"trees", 100.0}}, true, "probability", false, true, fit_extra_trees});
    r.push_back({"passive-aggressive",
                 {{"c", 1.0}, {"epochs", 100.0}},
                 true,
                 "margin",
                 false,
                 true,
                 fit_passive_aggressive});
    r.push_back({"mlp",
                 {{"hidden", 100.0}, {"learning_rate", 1e-3}, {"epochs", 200.0}},
                 true,
                 "probability",
                 false,
                 true,
                 fit_mlp});
    return r;
  }();
  return entries;
}

inline const RegistryEntry& registry_entry(const std::string& name) {
  for (const auto& entry : registry())
    if (entry.name == name) return entry;
  throw ConfigError("unknown model '" + name + "'");
}

inline std::vector<std::string> core_model_names() {
  std::vector<std::string> names;
  for (const auto& entry : registry())
    if (entry.core) names.push_back(entry.name);
  return names;
}

// Builds a spec from registry defaults plus overrides. Unknown hyperparameter
// names are rejected; numeric overrides for numeric defaults are coerced.
inline ModelSpec make_spec(const std::string& name, const Hyperparams& overrides = {},
                           std::uint64_t seed = 42) {
  const RegistryEntry& entry = registry_entry(name);
  ModelSpec spec;
  spec.name = name;
  spec.seed = seed;
  spec.params = entry.defaults;
  for (const auto& [key, value] : overrides) {
    const auto it = spec.params.find(key);
    if (it == spec.params.end())
      throw ConfigError("model '" + name + "' has no hyperparameter '" + key + "'");
    if (it->second.index() != value.index())
      throw ConfigError("hyperparameter '" + key + "' of model '" + name +
                        "' has the wrong type");
    it->second = value;
  }
  return spec;
}

// Trains a model: validates the data and hyperparameters, runs the
// registered fit function, and stamps the wall-clock fit time.
inline TrainedModel fit(const ModelSpec& spec, const FeatureMatrix& train) {
  const RegistryEntry& entry = registry_entry(spec.name);
  for (const auto& [key, value] : spec.params) {
    if (entry.defaults.find(key) == entry.defaults.end())
      throw ConfigError("model '" + spec.name + "' has no hyperparameter '" + key + "'");
    (void)value;
  }
  if (train.rows < 2)
    throw FitError("model '" + spec.name + "' needs at least 2 training rows, got " +
                   std::to_string(train.rows));
  if (entry.needs_both_classes) {
    const auto counts = detail::class_counts(train.target);
    if (counts[0] == 0 || counts[1] == 0)
      throw FitError("model '" + spec.name + "' cannot fit single-class training data");
  }

  const auto start = std::chrono::steady_clock::now();
  FitOutput output = entry.fit(spec, train);
  const auto stop = std::chrono::steady_clock::now();

  TrainedModel model;
  model.spec = spec;
  model.feature_names = train.feature_names;
  model.score_kind = entry.supports_scores ? entry.score_kind : "labels";
  model.loss_curve = std::move(output.loss_curve);
  model.fit_seconds = std::chrono::duration<double>(stop - start).count();
  model.fitted = std::move(output.fitted);
  return model;
}

}  // namespace tabml::models
