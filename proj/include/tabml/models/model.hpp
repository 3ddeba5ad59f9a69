#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "tabml/dataset.hpp"
#include "tabml/error.hpp"

namespace tabml::models {

// Hyperparameter values are numeric, boolean, or enumerated strings.
using HyperValue = std::variant<double, bool, std::string>;
using Hyperparams = std::map<std::string, HyperValue>;

// Declarative classifier configuration: registry key, overrides on top of
// the registry defaults, and the seed every stochastic choice derives from.
struct ModelSpec {
  std::string name;
  Hyperparams params;
  std::uint64_t seed = 42;
};

inline double num_param(const Hyperparams& p, const std::string& key) {
  const auto it = p.find(key);
  if (it == p.end() || !std::holds_alternative<double>(it->second))
    throw ConfigError("missing numeric hyperparameter '" + key + "'");
  return std::get<double>(it->second);
}

inline std::string str_param(const Hyperparams& p, const std::string& key) {
  const auto it = p.find(key);
  if (it == p.end() || !std::holds_alternative<std::string>(it->second))
    throw ConfigError("missing string hyperparameter '" + key + "'");
  return std::get<std::string>(it->second);
}

inline std::string hyper_to_string(const HyperValue& v) {
  if (std::holds_alternative<double>(v)) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", std::get<double>(v));
    return buf;
  }
  if (std::holds_alternative<bool>(v)) return std::get<bool>(v) ? "true" : "false";
  return std::get<std::string>(v);
}

// Fitted, immutable parameter state. Implementations are pure after
// construction and safe to share across threads.
class Fitted {
 public:
  virtual ~Fitted() = default;
  virtual std::vector<int> predict(const FeatureMatrix& x) const = 0;
  virtual std::vector<double> decision_scores(const FeatureMatrix& x) const = 0;
};

// What a fit function hands back to the registry wrapper.
struct FitOutput {
  std::shared_ptr<const Fitted> fitted;
  // Full-batch iterative learners record their per-epoch training loss.
  std::vector<double> loss_curve;
};

// A fitted model bound to its spec and training column order.
struct TrainedModel {
  ModelSpec spec;
  std::vector<std::string> feature_names;
  std::string score_kind;  // "probability", "margin", or "labels"
  std::vector<double> loss_curve;
  double fit_seconds = 0.0;
  std::shared_ptr<const Fitted> fitted;

  void check_columns(const FeatureMatrix& x) const {
    if (x.cols != feature_names.size())
      throw ShapeError("model '" + spec.name + "' expects " +
                       std::to_string(feature_names.size()) + " features, got " +
                       std::to_string(x.cols));
    for (std::size_t i = 0; i < feature_names.size(); ++i) {
      if (x.feature_names[i] != feature_names[i])
        throw ShapeError("model '" + spec.name + "' feature order mismatch at column " +
                         std::to_string(i) + ": expected '" + feature_names[i] + "', got '" +
                         x.feature_names[i] + "'");
    }
  }

  std::vector<int> predict(const FeatureMatrix& x) const {
    check_columns(x);
    return fitted->predict(x);
  }

  std::vector<double> decision_scores(const FeatureMatrix& x) const {
    check_columns(x);
    return fitted->decision_scores(x);
  }
};

namespace detail {

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Affine decision value w.x + b of one matrix row.
inline double margin(const FeatureMatrix& x, std::size_t r, const std::vector<double>& w,
                     double b) {
  double z = b;
  const auto row = x.row(r);
  for (std::size_t c = 0; c < row.size(); ++c) z += w[c] * row[c];
  return z;
}

// Counts per class; [0] and [1].
inline std::array<std::size_t, 2> class_counts(const std::vector<int>& y) {
  std::array<std::size_t, 2> counts{0, 0};
  for (int v : y) ++counts[v == 1 ? 1 : 0];
  return counts;
}

inline int majority_label(const std::vector<int>& y) {
  const auto counts = class_counts(y);
  // Ties predict class 0.
  return counts[1] > counts[0] ? 1 : 0;
}

}  // namespace detail

}  // namespace tabml::models
