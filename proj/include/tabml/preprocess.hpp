#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tabml/dataset.hpp"
#include "tabml/error.hpp"
#include "tabml/rng.hpp"

namespace tabml {

struct SplitPair {
  Dataset train;
  Dataset test;
  std::uint64_t seed = 0;
  double ratio = 0.0;
};

// Keeps exactly the rows with no missing cell, in their original order.
// An all-missing dataset legally shrinks to n = 0.
inline Dataset drop_missing(const Dataset& dataset) {
  std::vector<std::size_t> keep;
  keep.reserve(dataset.n);
  for (std::size_t r = 0; r < dataset.n; ++r)
    if (dataset.row_complete(r)) keep.push_back(r);
  return take_rows(dataset, keep);
}

// Random down-sampling to exact class balance: every minority row is kept
// and an equal-size majority subset is drawn uniformly without replacement.
// The combined rows are then shuffled, all driven by the seed. Requires
// complete data; nulls are dropped before balancing, never after.
inline Dataset downsample_balance(const Dataset& dataset, std::uint64_t seed) {
  if (!dataset.complete())
    throw IncompleteDataError("downsample_balance requires complete data; run drop_missing first");
  const std::vector<int> labels = dataset.target_labels();

  std::vector<std::size_t> class0, class1;
  for (std::size_t r = 0; r < dataset.n; ++r)
    (labels[r] == 1 ? class1 : class0).push_back(r);
  if (class0.empty() || class1.empty())
    throw BalanceError("cannot balance a single-class dataset (" + std::to_string(class0.size()) +
                       " / " + std::to_string(class1.size()) + " rows per class)");

  // The disease class is the minority on ties; with equal counts every row
  // is retained anyway.
  const bool minority_is_1 = class1.size() <= class0.size();
  const auto& minority = minority_is_1 ? class1 : class0;
  const auto& majority = minority_is_1 ? class0 : class1;

  Rng rng(seed);
  std::vector<std::size_t> picked = rng.sample_without_replacement(majority.size(), minority.size());

  std::vector<std::size_t> rows;
  rows.reserve(2 * minority.size());
  rows.insert(rows.end(), minority.begin(), minority.end());
  for (std::size_t p : picked) rows.push_back(majority[p]);
  rng.shuffle(rows);
  return take_rows(dataset, rows);
}

// Per-class split: floor(ratio * class_count) rows to train, the remainder
// to test, rows drawn by seeded shuffle within each class. Train and test
// orders are themselves deterministic shuffles.
inline SplitPair stratified_split(const Dataset& dataset, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0))
    throw ParameterError("split ratio must lie strictly between 0 and 1, got " +
                         std::to_string(ratio));
  const std::vector<int> labels = dataset.target_labels();

  std::vector<std::size_t> class0, class1;
  for (std::size_t r = 0; r < dataset.n; ++r)
    (labels[r] == 1 ? class1 : class0).push_back(r);
  for (const auto* cls : {&class0, &class1}) {
    if (cls->size() < 2)
      throw StratificationError("stratified split needs at least 2 rows per class, got " +
                                std::to_string(cls->size()));
  }

  Rng rng(seed);
  std::vector<std::size_t> train_rows, test_rows;
  for (auto* cls : {&class0, &class1}) {
    rng.shuffle(*cls);
    // Tiny epsilon so that exact products (0.7 * 10) floor correctly.
    const std::size_t take =
        static_cast<std::size_t>(ratio * static_cast<double>(cls->size()) + 1e-9);
    train_rows.insert(train_rows.end(), cls->begin(), cls->begin() + take);
    test_rows.insert(test_rows.end(), cls->begin() + take, cls->end());
  }
  rng.shuffle(train_rows);
  rng.shuffle(test_rows);

  SplitPair pair;
  pair.train = take_rows(dataset, train_rows);
  pair.test = take_rows(dataset, test_rows);
  pair.seed = seed;
  pair.ratio = ratio;
  return pair;
}

}  // namespace tabml
