#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tabml/error.hpp"

namespace tabml {

// 2x2 table of binary prediction outcomes; class 1 is "positive"
// (disease present).
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
};

// A scalar metric together with a flag marking zero-denominator cases,
// which are defined as 0 so report tables stay totally ordered.
struct MetricValue {
  double value = 0.0;
  bool degenerate = false;
};

inline ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size())
    throw InputError("confusion: label vectors have different lengths");
  if (y_true.empty()) throw InputError("confusion: empty label vectors");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i];
    const int p = y_pred[i];
    if ((t != 0 && t != 1) || (p != 0 && p != 1))
      throw InputError("confusion: labels must be 0 or 1");
    if (t == 1 && p == 1) ++cm.tp;
    else if (t == 0 && p == 1) ++cm.fp;
    else if (t == 1 && p == 0) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

inline double accuracy(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw InputError("accuracy: empty confusion matrix");
  return static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
}

inline double error_rate(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw InputError("error_rate: empty confusion matrix");
  return static_cast<double>(cm.fp + cm.fn) / static_cast<double>(cm.total());
}

inline MetricValue precision(const ConfusionMatrix& cm) {
  const std::size_t den = cm.tp + cm.fp;
  if (den == 0) return {0.0, true};
  return {static_cast<double>(cm.tp) / static_cast<double>(den), false};
}

inline MetricValue recall(const ConfusionMatrix& cm) {
  const std::size_t den = cm.tp + cm.fn;
  if (den == 0) return {0.0, true};
  return {static_cast<double>(cm.tp) / static_cast<double>(den), false};
}

inline MetricValue specificity(const ConfusionMatrix& cm) {
  const std::size_t den = cm.tn + cm.fp;
  if (den == 0) return {0.0, true};
  return {static_cast<double>(cm.tn) / static_cast<double>(den), false};
}

// Harmonic mean of precision and recall. The zero-denominator case
// (no true positives anywhere) is defined as 0 and flagged.
inline MetricValue f1(const ConfusionMatrix& cm) {
  const MetricValue p = precision(cm);
  const MetricValue r = recall(cm);
  const double den = p.value + r.value;
  if (den == 0.0) return {0.0, true};
  return {2.0 * p.value * r.value / den, p.degenerate || r.degenerate};
}

// Mean of true-positive and true-negative rates.
inline MetricValue balanced_accuracy(const ConfusionMatrix& cm) {
  const MetricValue r = recall(cm);
  const MetricValue s = specificity(cm);
  return {(r.value + s.value) / 2.0, r.degenerate || s.degenerate};
}

namespace detail {

// Rank-statistic AUC: the probability that a random positive outscores a
// random negative, ties counted one half (Mann-Whitney with mid-ranks).
inline double auc_rank(std::span<const int> y_true, std::span<const double> scores) {
  const std::size_t n = y_true.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double rank_sum_pos = 0.0;
  std::size_t n_pos = 0, n_neg = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double mid_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t) {
      if (y_true[order[t]] == 1) rank_sum_pos += mid_rank;
    }
    i = j;
  }
  for (std::size_t t = 0; t < n; ++t)
    (y_true[t] == 1 ? n_pos : n_neg)++;
  const double np = static_cast<double>(n_pos);
  const double nn = static_cast<double>(n_neg);
  return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

// Trapezoidal AUC over the ROC curve, sweeping thresholds from high to low
// with equal scores grouped.
inline double auc_trapezoid(std::span<const int> y_true, std::span<const double> scores) {
  const std::size_t n = y_true.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  double n_pos = 0.0, n_neg = 0.0;
  for (int t : y_true) (t == 1 ? n_pos : n_neg) += 1.0;

  double area = 0.0;
  double tp = 0.0, fp = 0.0;
  double prev_tpr = 0.0, prev_fpr = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    for (std::size_t t = i; t < j; ++t) {
      if (y_true[order[t]] == 1) tp += 1.0;
      else fp += 1.0;
    }
    const double tpr = tp / n_pos;
    const double fpr = fp / n_neg;
    area += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
    prev_tpr = tpr;
    prev_fpr = fpr;
    i = j;
  }
  return area;
}

}  // namespace detail

// Area under the ROC curve. Computed by two independent routes, the rank
// statistic and trapezoidal integration over all thresholds; they must
// agree to 1e-9 and the rank value is returned.
inline double roc_auc(std::span<const int> y_true, std::span<const double> scores) {
  if (y_true.size() != scores.size()) throw InputError("roc_auc: length mismatch");
  if (y_true.empty()) throw InputError("roc_auc: empty inputs");
  bool has_pos = false, has_neg = false;
  for (int t : y_true) {
    if (t != 0 && t != 1) throw InputError("roc_auc: labels must be 0 or 1");
    (t == 1 ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg)
    throw AucError("roc_auc is undefined when only one class is present");

  const double rank = detail::auc_rank(y_true, scores);
  const double trap = detail::auc_trapezoid(y_true, scores);
  if (std::abs(rank - trap) > 1e-9)
    throw std::logic_error("roc_auc internal disagreement: rank=" + std::to_string(rank) +
                           " trapezoid=" + std::to_string(trap));
  return rank;
}

}  // namespace tabml
