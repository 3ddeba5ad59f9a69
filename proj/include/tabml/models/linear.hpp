#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "tabml/linalg.hpp"
#include "tabml/models/model.hpp"
#include "tabml/rng.hpp"

namespace tabml::models {

namespace detail {

// Linear model state shared by the gradient-trained family.
class LinearFitted : public Fitted {
 public:
  LinearFitted(std::vector<double> w, double b, bool probabilistic)
      : w_(std::move(w)), b_(b), probabilistic_(probabilistic) {}

  std::vector<int> predict(const FeatureMatrix& x) const override {
    std::vector<int> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) out[r] = margin(x, r, w_, b_) > 0.0 ? 1 : 0;
    return out;
  }

  std::vector<double> decision_scores(const FeatureMatrix& x) const override {
    std::vector<double> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) {
      const double z = margin(x, r, w_, b_);
      out[r] = probabilistic_ ? sigmoid(z) : z;
    }
    return out;
  }

  const std::vector<double>& weights() const { return w_; }
  double bias() const { return b_; }

 private:
  std::vector<double> w_;
  double b_;
  bool probabilistic_;
};

struct Objective {
  // Fills grad_w/grad_b with the full-batch (sub)gradient and returns the
  // objective value at (w, b).
  std::function<double(const std::vector<double>& w, double b, std::vector<double>& grad_w,
                       double& grad_b)>
      eval;
};

struct DescentResult {
  std::vector<double> w;
  double b = 0.0;
  std::vector<double> loss_curve;
};

// Full-batch descent with a per-epoch step safeguard: a step is only taken
// if it does not increase the objective, halving the trial step as needed.
// This keeps the recorded loss curve non-increasing on any data, including
// unscaled features where a fixed step would diverge. The step is allowed
// to grow back toward the base schedule after accepted epochs.
inline DescentResult descend(std::size_t dim, const Objective& objective, double base_step,
                             std::size_t epochs,
                             const std::function<double(std::size_t)>& schedule = nullptr) {
  DescentResult res;
  res.w.assign(dim, 0.0);
  res.b = 0.0;

  std::vector<double> grad_w(dim);
  double grad_b = 0.0;
  double loss = objective.eval(res.w, res.b, grad_w, grad_b);
  double shrink = 1.0;

  std::vector<double> trial_w(dim);
  std::vector<double> trial_grad_w(dim);
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    const double epoch_step = schedule ? schedule(epoch) : base_step;
    double step = epoch_step * shrink;
    bool accepted = false;
    for (int attempt = 0; attempt < 60; ++attempt) {
      for (std::size_t i = 0; i < dim; ++i) trial_w[i] = res.w[i] - step * grad_w[i];
      const double trial_b = res.b - step * grad_b;
      double trial_grad_b = 0.0;
      const double trial_loss = objective.eval(trial_w, trial_b, trial_grad_w, trial_grad_b);
      if (std::isfinite(trial_loss) && trial_loss <= loss) {
        res.w.swap(trial_w);
        res.b = trial_b;
        grad_w.swap(trial_grad_w);
        grad_b = trial_grad_b;
        loss = trial_loss;
        shrink = std::min(1.0, (step / epoch_step) * 2.0);
        accepted = true;
        break;
      }
      step *= 0.5;
      shrink *= 0.5;
    }
    res.loss_curve.push_back(loss);
    if (!accepted) {
      // No usable step remains; the curve stays flat for later epochs.
      for (std::size_t rest = epoch + 1; rest < epochs; ++rest) res.loss_curve.push_back(loss);
      break;
    }
  }
  return res;
}

// Mean logistic loss with L2 penalty on the weights (bias unpenalized).
inline Objective logistic_objective(const FeatureMatrix& x, const std::vector<int>& y,
                                    double l2) {
  return {[&x, &y, l2](const std::vector<double>& w, double b, std::vector<double>& grad_w,
                       double& grad_b) {
    const double n = static_cast<double>(x.rows);
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    grad_b = 0.0;
    double loss = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) {
      const double z = margin(x, r, w, b);
      const double ys = y[r] == 1 ? 1.0 : -1.0;
      const double yz = ys * z;
      loss += yz > 0.0 ? std::log1p(std::exp(-yz)) : -yz + std::log1p(std::exp(yz));
      const double coeff = (sigmoid(z) - (y[r] == 1 ? 1.0 : 0.0)) / n;
      const auto row = x.row(r);
      for (std::size_t c = 0; c < row.size(); ++c) grad_w[c] += coeff * row[c];
      grad_b += coeff;
    }
    loss /= n;
    for (std::size_t c = 0; c < grad_w.size(); ++c) {
      loss += 0.5 * l2 * w[c] * w[c];
      grad_w[c] += l2 * w[c];
    }
    return loss;
  }};
}

// Mean hinge loss with L2 penalty (bias unpenalized).
inline Objective hinge_objective(const FeatureMatrix& x, const std::vector<int>& y, double l2) {
  return {[&x, &y, l2](const std::vector<double>& w, double b, std::vector<double>& grad_w,
                       double& grad_b) {
    const double n = static_cast<double>(x.rows);
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    grad_b = 0.0;
    double loss = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) {
      const double ys = y[r] == 1 ? 1.0 : -1.0;
      const double z = margin(x, r, w, b);
      const double hinge = 1.0 - ys * z;
      if (hinge > 0.0) {
        loss += hinge;
        const auto row = x.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) grad_w[c] -= ys * row[c] / n;
        grad_b -= ys / n;
      }
    }
    loss /= n;
    for (std::size_t c = 0; c < grad_w.size(); ++c) {
      loss += 0.5 * l2 * w[c] * w[c];
      grad_w[c] += l2 * w[c];
    }
    return loss;
  }};
}

}  // namespace detail

// Binary logistic regression trained by full-batch gradient descent on the
// mean log loss. No internal feature scaling is applied, so raw feature
// ranges directly shape the optimization landscape; the step safeguard in
// descend() keeps training stable regardless.
inline FitOutput fit_logistic(const ModelSpec& spec, const FeatureMatrix& train) {
  const double lr = num_param(spec.params, "learning_rate");
  const auto epochs = static_cast<std::size_t>(num_param(spec.params, "epochs"));
  const double l2 = num_param(spec.params, "l2");
  const auto objective = detail::logistic_objective(train, train.target, l2);
  auto res = detail::descend(train.cols, objective, lr, epochs);
  FitOutput out;
  out.fitted = std::make_shared<detail::LinearFitted>(std::move(res.w), res.b, true);
  out.loss_curve = std::move(res.loss_curve);
  return out;
}

// Linear SVM: mean hinge loss plus L2, minimized by Pegasos-style
// subgradient descent with a decaying base step and the same safeguard.
inline FitOutput fit_linear_svc(const ModelSpec& spec, const FeatureMatrix& train) {
  const double l2 = num_param(spec.params, "l2");
  const auto epochs = static_cast<std::size_t>(num_param(spec.params, "epochs"));
  const auto objective = detail::hinge_objective(train, train.target, l2);
  const auto schedule = [l2](std::size_t epoch) {
    return 1.0 / (l2 * static_cast<double>(epoch + 2));
  };
  auto res = detail::descend(train.cols, objective, 0.0, epochs, schedule);
  FitOutput out;
  out.fitted = std::make_shared<detail::LinearFitted>(std::move(res.w), res.b, false);
  out.loss_curve = std::move(res.loss_curve);
  return out;
}

// Log-loss SGD with one weight update per sample and a seeded shuffle per
// epoch. Sensitive to feature ranges by design (no scaling).
inline FitOutput fit_sgd(const ModelSpec& spec, const FeatureMatrix& train) {
  const double lr = num_param(spec.params, "learning_rate");
  const auto epochs = static_cast<std::size_t>(num_param(spec.params, "epochs"));
  std::vector<double> w(train.cols, 0.0);
  double b = 0.0;
  Rng rng(spec.seed);
  std::vector<std::size_t> order(train.rows);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t r : order) {
      const double z = detail::margin(train, r, w, b);
      const double coeff = detail::sigmoid(z) - (train.target[r] == 1 ? 1.0 : 0.0);
      const auto row = train.row(r);
      for (std::size_t c = 0; c < row.size(); ++c) w[c] -= lr * coeff * row[c];
      b -= lr * coeff;
    }
  }
  FitOutput out;
  out.fitted = std::make_shared<detail::LinearFitted>(std::move(w), b, true);
  return out;
}

// Rosenblatt perceptron: update on mistakes only, seeded shuffle per epoch.
// Scores are the raw margin w.x + b.
inline FitOutput fit_perceptron(const ModelSpec& spec, const FeatureMatrix& train) {
  const auto epochs = static_cast<std::size_t>(num_param(spec.params, "epochs"));
  std::vector<double> w(train.cols, 0.0);
  double b = 0.0;
  Rng rng(spec.seed);
  std::vector<std::size_t> order(train.rows);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t r : order) {
      const double ys = train.target[r] == 1 ? 1.0 : -1.0;
      if (ys * detail::margin(train, r, w, b) <= 0.0) {
        const auto row = train.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) w[c] += ys * row[c];
        b += ys;
      }
    }
  }
  FitOutput out;
  out.fitted = std::make_shared<detail::LinearFitted>(std::move(w), b, false);
  return out;
}

// Ridge classifier: least squares on +-1 targets via the normal equations
// with an L2 term on the weights, thresholded at 0.
inline FitOutput fit_ridge(const ModelSpec& spec, const FeatureMatrix& train) {
  const double l2 = num_param(spec.params, "l2");
  const std::size_t q = train.cols;
  SqMatrix gram(q + 1);  // augmented with the bias column
  std::vector<double> rhs(q + 1, 0.0);
  for (std::size_t r = 0; r < train.rows; ++r) {
    const auto row = train.row(r);
    const double ys = train.target[r] == 1 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < q; ++i) {
      for (std::size_t j = i; j < q; ++j) gram.at(i, j) += row[i] * row[j];
      gram.at(i, q) += row[i];
      rhs[i] += ys * row[i];
    }
    rhs[q] += ys;
  }
  gram.at(q, q) = static_cast<double>(train.rows);
  for (std::size_t i = 0; i < q + 1; ++i)
    for (std::size_t j = 0; j < i; ++j) gram.at(i, j) = gram.at(j, i);
  for (std::size_t i = 0; i < q; ++i) gram.at(i, i) += l2;  // bias unpenalized
  gram.at(q, q) += 1e-12;

  const std::vector<double> theta = solve(gram, rhs);
  std::vector<double> w(theta.begin(), theta.begin() + q);
  FitOutput out;
  out.fitted = std::make_shared<detail::LinearFitted>(std::move(w), theta[q], false);
  return out;
}

// Passive-aggressive classifier (PA-I): per-sample hinge-driven updates with
// aggressiveness capped at c.
inline FitOutput fit_passive_aggressive(const ModelSpec& spec, const FeatureMatrix& train) {
  const double c = num_param(spec.params, "c");
  const auto epochs = static_cast<std::size_t>(num_param(spec.params, "epochs"));
  std::vector<double> w(train.cols, 0.0);
  double b = 0.0;
  Rng rng(spec.seed);
  std::vector<std::size_t> order(train.rows);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t r : order) {
      const double ys = train.target[r] == 1 ? 1.0 : -1.0;
      const double loss = std::max(0.0, 1.0 - ys * detail::margin(train, r, w, b));
      if (loss == 0.0) continue;
      const auto row = train.row(r);
      double norm2 = 1.0;  // bias contributes a unit coordinate
      for (double v : row) norm2 += v * v;
      const double tau = std::min(c, loss / norm2);
      for (std::size_t cidx = 0; cidx < row.size(); ++cidx) w[cidx] += tau * ys * row[cidx];
      b += tau * ys;
    }
  }
  FitOutput out;
  out.fitted = std::make_shared<detail::LinearFitted>(std::move(w), b, false);
  return out;
}

}  // namespace tabml::models
