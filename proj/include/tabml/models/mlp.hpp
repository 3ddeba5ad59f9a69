#pragma once

#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "tabml/models/model.hpp"
#include "tabml/rng.hpp"

namespace tabml::models {

namespace detail {

// One hidden layer of rectified units with a sigmoid output.
class MlpFitted : public Fitted {
 public:
  std::size_t hidden = 0;
  std::vector<double> w1;  // hidden x inputs, row-major
  std::vector<double> b1;
  std::vector<double> w2;  // hidden
  double b2 = 0.0;

  double forward(std::span<const double> row) const {
    double z2 = b2;
    const std::size_t q = row.size();
    for (std::size_t h = 0; h < hidden; ++h) {
      double a = b1[h];
      for (std::size_t f = 0; f < q; ++f) a += w1[h * q + f] * row[f];
      if (a > 0.0) z2 += w2[h] * a;
    }
    return sigmoid(z2);
  }

  std::vector<int> predict(const FeatureMatrix& x) const override {
    std::vector<int> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) out[r] = forward(x.row(r)) > 0.5 ? 1 : 0;
    return out;
  }

  std::vector<double> decision_scores(const FeatureMatrix& x) const override {
    std::vector<double> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) out[r] = forward(x.row(r));
    return out;
  }
};

}  // namespace detail

// Small multilayer perceptron trained by per-sample stochastic gradient
// descent on the log loss, with gradient clipping to survive unscaled
// inputs. Off the core registry; included for completeness.
inline FitOutput fit_mlp(const ModelSpec& spec, const FeatureMatrix& train) {
  const auto hidden = static_cast<std::size_t>(num_param(spec.params, "hidden"));
  const double lr = num_param(spec.params, "learning_rate");
  const auto epochs = static_cast<std::size_t>(num_param(spec.params, "epochs"));
  if (hidden < 1) throw ParameterError("mlp: hidden must be at least 1");

  const std::size_t q = train.cols;
  auto fitted = std::make_shared<detail::MlpFitted>();
  fitted->hidden = hidden;
  fitted->w1.resize(hidden * q);
  fitted->b1.assign(hidden, 0.0);
  fitted->w2.resize(hidden);
  Rng rng(spec.seed);
  const double scale1 = std::sqrt(2.0 / static_cast<double>(q));
  for (double& v : fitted->w1) v = rng.normal(0.0, scale1);
  const double scale2 = std::sqrt(2.0 / static_cast<double>(hidden));
  for (double& v : fitted->w2) v = rng.normal(0.0, scale2);

  std::vector<double> activations(hidden);
  std::vector<std::size_t> order(train.rows);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto clip = [](double g) { return g > 1.0 ? 1.0 : (g < -1.0 ? -1.0 : g); };

  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t r : order) {
      const auto row = train.row(r);
      double z2 = fitted->b2;
      for (std::size_t h = 0; h < hidden; ++h) {
        double a = fitted->b1[h];
        for (std::size_t f = 0; f < q; ++f) a += fitted->w1[h * q + f] * row[f];
        activations[h] = a > 0.0 ? a : 0.0;
        z2 += fitted->w2[h] * activations[h];
      }
      const double delta2 = detail::sigmoid(z2) - (train.target[r] == 1 ? 1.0 : 0.0);
      for (std::size_t h = 0; h < hidden; ++h) {
        const double grad_w2 = delta2 * activations[h];
        const double delta1 = activations[h] > 0.0 ? delta2 * fitted->w2[h] : 0.0;
        fitted->w2[h] -= lr * clip(grad_w2);
        if (delta1 != 0.0) {
          for (std::size_t f = 0; f < q; ++f)
            fitted->w1[h * q + f] -= lr * clip(delta1 * row[f]);
          fitted->b1[h] -= lr * clip(delta1);
        }
      }
      fitted->b2 -= lr * clip(delta2);
    }
  }
  return {fitted, {}};
}

}  // namespace tabml::models
