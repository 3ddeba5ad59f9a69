#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "tabml/linalg.hpp"
#include "tabml/models/model.hpp"

namespace tabml::models {

namespace detail {

// Linear discriminant: shared covariance, so the log odds are affine.
class LdaFitted : public Fitted {
 public:
  std::vector<double> w;
  double b = 0.0;

  std::vector<int> predict(const FeatureMatrix& x) const override {
    std::vector<int> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) out[r] = margin(x, r, w, b) > 0.0 ? 1 : 0;
    return out;
  }

  // The affine discriminant is the exact log odds, so its sigmoid is the
  // class-1 posterior.
  std::vector<double> decision_scores(const FeatureMatrix& x) const override {
    std::vector<double> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) out[r] = sigmoid(margin(x, r, w, b));
    return out;
  }
};

class QdaFitted : public Fitted {
 public:
  std::array<std::vector<double>, 2> mean;
  std::array<SqMatrix, 2> chol;  // Cholesky factors of class covariances
  std::array<double, 2> log_det{};
  std::array<double, 2> log_prior{};

  double log_odds(std::span<const double> row) const {
    std::array<double, 2> score{};
    for (int c = 0; c < 2; ++c) {
      std::vector<double> d(row.size());
      for (std::size_t i = 0; i < row.size(); ++i) d[i] = row[i] - mean[c][i];
      const auto solved = cholesky_solve(chol[c], d);
      double quad = 0.0;
      for (std::size_t i = 0; i < d.size(); ++i) quad += d[i] * solved[i];
      score[c] = log_prior[c] - 0.5 * log_det[c] - 0.5 * quad;
    }
    return score[1] - score[0];
  }

  std::vector<int> predict(const FeatureMatrix& x) const override {
    std::vector<int> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) out[r] = log_odds(x.row(r)) > 0.0 ? 1 : 0;
    return out;
  }

  std::vector<double> decision_scores(const FeatureMatrix& x) const override {
    std::vector<double> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) out[r] = sigmoid(log_odds(x.row(r)));
    return out;
  }
};

inline std::array<std::vector<double>, 2> class_means(const FeatureMatrix& x) {
  std::array<std::vector<double>, 2> mean{std::vector<double>(x.cols, 0.0),
                                          std::vector<double>(x.cols, 0.0)};
  const auto counts = class_counts(x.target);
  for (std::size_t r = 0; r < x.rows; ++r) {
    auto& m = mean[x.target[r] == 1 ? 1 : 0];
    const auto row = x.row(r);
    for (std::size_t f = 0; f < x.cols; ++f) m[f] += row[f];
  }
  for (int c = 0; c < 2; ++c)
    for (double& v : mean[c]) v /= static_cast<double>(counts[c]);
  return mean;
}

// Ridge regularization keyed to the covariance scale: reg * trace / q on
// the diagonal, with an absolute floor so an all-zero matrix still factors.
inline void regularize(SqMatrix& cov, double reg) {
  const double bump = std::max(reg * cov.trace() / static_cast<double>(cov.n), 1e-12);
  cov.add_diagonal(bump);
}

}  // namespace detail

// Linear discriminant analysis with pooled covariance and diagonal ridge
// regularization, so a singular covariance never aborts the fit.
inline FitOutput fit_lda(const ModelSpec& spec, const FeatureMatrix& train) {
  const double reg = num_param(spec.params, "reg");
  const std::size_t q = train.cols;
  const auto counts = detail::class_counts(train.target);
  const auto mean = detail::class_means(train);

  SqMatrix cov(q);
  for (std::size_t r = 0; r < train.rows; ++r) {
    const auto& m = mean[train.target[r] == 1 ? 1 : 0];
    const auto row = train.row(r);
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t j = i; j < q; ++j)
        cov.at(i, j) += (row[i] - m[i]) * (row[j] - m[j]);
  }
  const std::size_t denom = train.rows > 2 ? train.rows - 2 : 1;
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = i; j < q; ++j) {
      cov.at(i, j) /= static_cast<double>(denom);
      cov.at(j, i) = cov.at(i, j);
    }
  detail::regularize(cov, reg);

  const SqMatrix chol_factor = cholesky(cov);
  std::vector<double> diff(q);
  for (std::size_t i = 0; i < q; ++i) diff[i] = mean[1][i] - mean[0][i];
  const std::vector<double> w = cholesky_solve(chol_factor, diff);

  double b = std::log(static_cast<double>(counts[1]) / static_cast<double>(counts[0]));
  for (std::size_t i = 0; i < q; ++i) b -= 0.5 * (mean[0][i] + mean[1][i]) * w[i];

  auto fitted = std::make_shared<detail::LdaFitted>();
  fitted->w = w;
  fitted->b = b;
  return {fitted, {}};
}

// Quadratic discriminant analysis: per-class covariance with the same
// regularization policy.
inline FitOutput fit_qda(const ModelSpec& spec, const FeatureMatrix& train) {
  const double reg = num_param(spec.params, "reg");
  const std::size_t q = train.cols;
  const auto counts = detail::class_counts(train.target);
  const auto mean = detail::class_means(train);

  auto fitted = std::make_shared<detail::QdaFitted>();
  fitted->mean = mean;
  const double n = static_cast<double>(train.rows);
  fitted->log_prior = {std::log(static_cast<double>(counts[0]) / n),
                       std::log(static_cast<double>(counts[1]) / n)};

  for (int c = 0; c < 2; ++c) {
    SqMatrix cov(q);
    for (std::size_t r = 0; r < train.rows; ++r) {
      if ((train.target[r] == 1 ? 1 : 0) != c) continue;
      const auto row = train.row(r);
      for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = i; j < q; ++j)
          cov.at(i, j) += (row[i] - mean[c][i]) * (row[j] - mean[c][j]);
    }
    const std::size_t denom = counts[c] > 1 ? counts[c] - 1 : 1;
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t j = i; j < q; ++j) {
        cov.at(i, j) /= static_cast<double>(denom);
        cov.at(j, i) = cov.at(i, j);
      }
    detail::regularize(cov, reg);
    fitted->chol[c] = cholesky(cov);
    fitted->log_det[c] = cholesky_logdet(fitted->chol[c]);
  }
  return {fitted, {}};
}

}  // namespace tabml::models
