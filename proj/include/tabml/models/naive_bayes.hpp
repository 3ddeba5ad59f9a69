#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <span>
#include <vector>

#include "tabml/models/model.hpp"

namespace tabml::models {

namespace detail {

class GaussianNbFitted : public Fitted {
 public:
  std::array<double, 2> log_prior{};
  std::vector<std::array<double, 2>> mean;      // per feature
  std::vector<std::array<double, 2>> variance;  // per feature, smoothed

  std::array<double, 2> log_posteriors(std::span<const double> row) const {
    std::array<double, 2> lp = log_prior;
    for (int c = 0; c < 2; ++c) {
      for (std::size_t f = 0; f < row.size(); ++f) {
        const double var = variance[f][c];
        const double d = row[f] - mean[f][c];
        lp[c] += -0.5 * std::log(2.0 * std::numbers::pi * var) - d * d / (2.0 * var);
      }
    }
    return lp;
  }

  std::vector<int> predict(const FeatureMatrix& x) const override {
    std::vector<int> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) {
      const auto lp = log_posteriors(x.row(r));
      out[r] = lp[1] > lp[0] ? 1 : 0;  // tie predicts class 0
    }
    return out;
  }

  std::vector<double> decision_scores(const FeatureMatrix& x) const override {
    std::vector<double> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) {
      const auto lp = log_posteriors(x.row(r));
      out[r] = sigmoid(lp[1] - lp[0]);  // normalized P(class 1 | x)
    }
    return out;
  }
};

class BernoulliNbFitted : public Fitted {
 public:
  double binarize = 0.0;
  std::array<double, 2> log_prior{};
  std::vector<std::array<double, 2>> log_p1;  // log P(feature > threshold | class)
  std::vector<std::array<double, 2>> log_p0;

  std::array<double, 2> log_posteriors(std::span<const double> row) const {
    std::array<double, 2> lp = log_prior;
    for (int c = 0; c < 2; ++c)
      for (std::size_t f = 0; f < row.size(); ++f)
        lp[c] += row[f] > binarize ? log_p1[f][c] : log_p0[f][c];
    return lp;
  }

  std::vector<int> predict(const FeatureMatrix& x) const override {
    std::vector<int> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) {
      const auto lp = log_posteriors(x.row(r));
      out[r] = lp[1] > lp[0] ? 1 : 0;
    }
    return out;
  }

  std::vector<double> decision_scores(const FeatureMatrix& x) const override {
    std::vector<double> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) {
      const auto lp = log_posteriors(x.row(r));
      out[r] = sigmoid(lp[1] - lp[0]);
    }
    return out;
  }
};

}  // namespace detail

// Gaussian naive Bayes with per-class feature means/variances. Variances are
// smoothed by var_smoothing times the largest overall feature variance so a
// within-class constant feature cannot produce a zero denominator.
inline FitOutput fit_gaussian_nb(const ModelSpec& spec, const FeatureMatrix& train) {
  const double smoothing = num_param(spec.params, "var_smoothing");
  auto fitted = std::make_shared<detail::GaussianNbFitted>();
  const std::size_t q = train.cols;
  const auto counts = detail::class_counts(train.target);

  fitted->mean.assign(q, {0.0, 0.0});
  fitted->variance.assign(q, {0.0, 0.0});
  for (std::size_t r = 0; r < train.rows; ++r) {
    const int c = train.target[r];
    const auto row = train.row(r);
    for (std::size_t f = 0; f < q; ++f) fitted->mean[f][c] += row[f];
  }
  for (std::size_t f = 0; f < q; ++f)
    for (int c = 0; c < 2; ++c) fitted->mean[f][c] /= static_cast<double>(counts[c]);
  for (std::size_t r = 0; r < train.rows; ++r) {
    const int c = train.target[r];
    const auto row = train.row(r);
    for (std::size_t f = 0; f < q; ++f) {
      const double d = row[f] - fitted->mean[f][c];
      fitted->variance[f][c] += d * d;
    }
  }

  double max_overall_var = 0.0;
  for (std::size_t f = 0; f < q; ++f) {
    const auto col = train.column(f);
    const double m = std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(col.size());
    double var = 0.0;
    for (double v : col) var += (v - m) * (v - m);
    var /= static_cast<double>(col.size());
    max_overall_var = std::max(max_overall_var, var);
  }
  const double eps = std::max(smoothing * max_overall_var, 1e-300);

  for (std::size_t f = 0; f < q; ++f)
    for (int c = 0; c < 2; ++c)
      fitted->variance[f][c] = fitted->variance[f][c] / static_cast<double>(counts[c]) + eps;

  const double n = static_cast<double>(train.rows);
  fitted->log_prior = {std::log(static_cast<double>(counts[0]) / n),
                       std::log(static_cast<double>(counts[1]) / n)};
  return {fitted, {}};
}

// Bernoulli naive Bayes over features binarized at the given threshold,
// with Laplace smoothing alpha.
inline FitOutput fit_bernoulli_nb(const ModelSpec& spec, const FeatureMatrix& train) {
  const double alpha = num_param(spec.params, "alpha");
  const double binarize = num_param(spec.params, "binarize");
  auto fitted = std::make_shared<detail::BernoulliNbFitted>();
  fitted->binarize = binarize;
  const std::size_t q = train.cols;
  const auto counts = detail::class_counts(train.target);

  std::vector<std::array<double, 2>> ones(q, {0.0, 0.0});
  for (std::size_t r = 0; r < train.rows; ++r) {
    const int c = train.target[r];
    const auto row = train.row(r);
    for (std::size_t f = 0; f < q; ++f)
      if (row[f] > binarize) ones[f][c] += 1.0;
  }
  fitted->log_p1.assign(q, {0.0, 0.0});
  fitted->log_p0.assign(q, {0.0, 0.0});
  for (std::size_t f = 0; f < q; ++f) {
    for (int c = 0; c < 2; ++c) {
      const double p =
          (ones[f][c] + alpha) / (static_cast<double>(counts[c]) + 2.0 * alpha);
      fitted->log_p1[f][c] = std::log(p);
      fitted->log_p0[f][c] = std::log(1.0 - p);
    }
  }

  const double n = static_cast<double>(train.rows);
  fitted->log_prior = {std::log(static_cast<double>(counts[0]) / n),
                       std::log(static_cast<double>(counts[1]) / n)};
  return {fitted, {}};
}

}  // namespace tabml::models
