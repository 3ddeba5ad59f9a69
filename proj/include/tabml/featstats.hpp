#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "tabml/dataset.hpp"
#include "tabml/error.hpp"

namespace tabml {

// Symmetric matrix of sample Pearson coefficients over the input features
// with the target appended as the final row/column. Entries touching a
// constant column are NaN (no principled value exists) and are excluded
// from reports.
struct CorrelationMatrix {
  std::size_t size = 0;
  std::vector<double> values;  // row-major, size x size
  std::vector<std::string> names;

  double at(std::size_t i, std::size_t j) const { return values[i * size + j]; }
  double& at(std::size_t i, std::size_t j) { return values[i * size + j]; }
};

// Per-feature ANOVA-F values with the deterministic ranking and selected
// top-k prefix.
struct FeatureScores {
  std::vector<double> f_values;       // per input feature, schema order
  std::vector<std::size_t> ranking;   // feature indices, best first
  std::size_t k = 0;
  std::vector<std::string> selected;  // first k names of the ranking
};

namespace detail {

inline double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

inline double pearson_pair(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
  double r = sxy / std::sqrt(sxx * syy);
  // Guard rounding: keep coefficients inside [-1, 1].
  if (r > 1.0) r = 1.0;
  if (r < -1.0) r = -1.0;
  return r;
}

}  // namespace detail

// Correlation coefficients of the feature matrix, target included as the
// last column. Needs at least two observations.
inline CorrelationMatrix pearson_correlation(const FeatureMatrix& m) {
  if (m.rows < 2)
    throw InsufficientDataError("pearson correlation needs at least 2 rows, got " +
                                std::to_string(m.rows));
  const std::size_t q = m.cols;
  CorrelationMatrix cm;
  cm.size = q + 1;
  cm.names = m.feature_names;
  cm.names.push_back(m.target_name);
  cm.values.assign(cm.size * cm.size, 0.0);

  std::vector<std::vector<double>> cols(q + 1);
  for (std::size_t c = 0; c < q; ++c) cols[c] = m.column(c);
  cols[q].resize(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) cols[q][r] = static_cast<double>(m.target[r]);

  for (std::size_t i = 0; i < cm.size; ++i) {
    for (std::size_t j = i; j < cm.size; ++j) {
      const double r = detail::pearson_pair(cols[i], cols[j]);
      cm.at(i, j) = r;
      cm.at(j, i) = r;
    }
  }
  return cm;
}

// One-way ANOVA F statistic of a feature partitioned by class label:
// the ratio of between-group variance, sum_i j_i (mean_i - mean)^2 / (S-1),
// to within-group variance, sum_i sum_p (x_ip - mean_i)^2 / (N-S).
// Perfect separation (zero within-group variance, distinct means) returns
// +infinity; an all-constant feature returns 0.
inline double anova_f(std::span<const double> feature, std::span<const int> labels) {
  if (feature.size() != labels.size())
    throw ShapeError("anova_f: feature and label lengths differ");
  const std::size_t n = feature.size();

  // Group observations by distinct label value, ascending for determinism.
  std::map<int, std::vector<double>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[labels[i]].push_back(feature[i]);
  const std::size_t s = groups.size();
  if (s < 2) throw GroupingError("anova_f needs at least 2 groups, got " + std::to_string(s));
  if (n < s + 1)
    throw InsufficientDataError("anova_f needs more observations than groups");

  double grand_sum = 0.0;
  for (const auto& [label, values] : groups)
    for (double v : values) grand_sum += v;
  const double grand_mean = grand_sum / static_cast<double>(n);

  double ss_between = 0.0;
  double ss_within = 0.0;
  for (const auto& [label, values] : groups) {
    const double m = detail::mean_of(values);
    const double d = m - grand_mean;
    ss_between += static_cast<double>(values.size()) * d * d;
    for (double v : values) ss_within += (v - m) * (v - m);
  }

  const double msb = ss_between / static_cast<double>(s - 1);
  const double msw = ss_within / static_cast<double>(n - s);
  if (msw == 0.0) {
    if (msb == 0.0) return 0.0;
    return std::numeric_limits<double>::infinity();
  }
  return msb / msw;
}

// Scores every input feature against the binary target with anova_f and
// keeps the k best. Ranking is by descending F, ties broken by ascending
// schema order; non-finite F values (degenerate features) rank last.
inline FeatureScores select_k_best(const FeatureMatrix& m, std::size_t k) {
  const std::size_t q = m.cols;
  if (k < 1 || k > q)
    throw ParameterError("k must lie in [1, " + std::to_string(q) + "], got " + std::to_string(k));

  FeatureScores scores;
  scores.f_values.resize(q);
  for (std::size_t c = 0; c < q; ++c) {
    const std::vector<double> col = m.column(c);
    scores.f_values[c] = anova_f(col, m.target);
  }

  scores.ranking.resize(q);
  std::iota(scores.ranking.begin(), scores.ranking.end(), std::size_t{0});
  std::sort(scores.ranking.begin(), scores.ranking.end(), [&](std::size_t a, std::size_t b) {
    const double fa = scores.f_values[a];
    const double fb = scores.f_values[b];
    const bool ga = std::isfinite(fa);
    const bool gb = std::isfinite(fb);
    if (ga != gb) return ga;          // finite before non-finite
    if (ga && fa != fb) return fa > fb;
    return a < b;                     // ascending schema order on ties
  });

  scores.k = k;
  for (std::size_t i = 0; i < k; ++i)
    scores.selected.push_back(m.feature_names[scores.ranking[i]]);
  return scores;
}

// Restriction of the matrix to the named columns, in the given order.
// The target rides along untouched.
inline FeatureMatrix project(const FeatureMatrix& m, const std::vector<std::string>& names) {
  if (names.empty()) throw ParameterError("project requires at least one feature name");
  std::vector<std::size_t> idx;
  idx.reserve(names.size());
  for (const auto& name : names) idx.push_back(m.column_index(name));

  FeatureMatrix out;
  out.rows = m.rows;
  out.cols = names.size();
  out.feature_names = names;
  out.target_name = m.target_name;
  out.target = m.target;
  out.values.resize(out.rows * out.cols);
  for (std::size_t r = 0; r < out.rows; ++r)
    for (std::size_t c = 0; c < idx.size(); ++c) out.at(r, c) = m.at(r, idx[c]);
  return out;
}

}  // namespace tabml
