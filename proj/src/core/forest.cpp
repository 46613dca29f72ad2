// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "core/forest.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace touchbench {
namespace {

struct SplitResult {
  int feature = -1;
  double threshold = 0.0;
  double impurity = 0.0;  // weighted child Gini
};

double gini(std::size_t pos, std::size_t total) {
  if (total == 0) return 0.0;
  const double p = static_cast<double>(pos) / static_cast<double>(total);
  return 2.0 * p * (1.0 - p);
}

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, const std::vector<int>& y, std::size_t mtry, Rng rng)
      : x_(x), y_(y), mtry_(mtry), rng_(rng) {}

  RandomForest::Tree build(std::vector<std::size_t> rows) {
    tree_.clear();
    grow(std::move(rows));
    return std::move(tree_);
  }

 private:
  int grow(std::vector<std::size_t> rows) {
    std::size_t pos = 0;
    for (std::size_t r : rows)
      if (y_[r] == 1) ++pos;

    const int id = static_cast<int>(tree_.size());
    tree_.emplace_back();
    tree_[id].positive_frac = static_cast<double>(pos) / static_cast<double>(rows.size());

    if (pos == 0 || pos == rows.size()) return id;  // pure leaf

    const SplitResult split = best_split(rows, gini(pos, rows.size()));
    if (split.feature < 0) return id;

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : rows) {
      if (x_[r][static_cast<std::size_t>(split.feature)] <= split.threshold)
        left_rows.push_back(r);
      else
        right_rows.push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    tree_[id].feature = split.feature;
    tree_[id].threshold = split.threshold;
    const int left = grow(std::move(left_rows));
    tree_[id].left = left;
    const int right = grow(std::move(right_rows));
    tree_[id].right = right;
    return id;
  }

  SplitResult best_split(const std::vector<std::size_t>& rows, double parent_gini) {
    const std::size_t d = x_.front().size();
    auto feats = rng_.sample_indices(d, mtry_);
    std::sort(feats.begin(), feats.end());  // stable candidate order

    SplitResult best;
    best.impurity = parent_gini;
    const std::size_t n = rows.size();

    std::vector<std::pair<double, int>> vals(n);  // (value, label)
    for (std::size_t f : feats) {
      for (std::size_t i = 0; i < n; ++i)
        vals[i] = {x_[rows[i]][f], y_[rows[i]]};
      std::sort(vals.begin(), vals.end());
      if (vals.front().first == vals.back().first) continue;  // constant feature

      std::size_t left_pos = 0, left_n = 0;
      std::size_t total_pos = 0;
      for (const auto& [v, label] : vals)
        if (label == 1) ++total_pos;

      for (std::size_t i = 0; i + 1 < n; ++i) {
        if (vals[i].second == 1) ++left_pos;
        ++left_n;
        if (vals[i].first == vals[i + 1].first) continue;
        const std::size_t right_n = n - left_n;
        const double w =
            (static_cast<double>(left_n) * gini(left_pos, left_n) +
             static_cast<double>(right_n) * gini(total_pos - left_pos, right_n)) /
            static_cast<double>(n);
        if (w < best.impurity - 1e-12) {
          best.impurity = w;
          best.feature = static_cast<int>(f);
          best.threshold = (vals[i].first + vals[i + 1].first) / 2.0;
        }
      }
    }
    return best;
  }

  const Matrix& x_;
  const std::vector<int>& y_;
  std::size_t mtry_;
  Rng rng_;
  RandomForest::Tree tree_;
};

double tree_leaf_frac(const RandomForest::Tree& tree, const std::vector<double>& x) {
  int node = 0;
  while (tree[static_cast<std::size_t>(node)].feature >= 0) {
    const auto& nd = tree[static_cast<std::size_t>(node)];
    node = x[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
  }
  return tree[static_cast<std::size_t>(node)].positive_frac;
}

}  // namespace

RandomForest RandomForest::train(const Matrix& x, const std::vector<int>& y,
                                 const ForestParams& params, const Rng& rng) {
  const std::size_t n = x.size();
  if (n == 0 || y.size() != n)
    throw PreconditionError("forest: empty or inconsistent training set");
  bool has_pos = false, has_neg = false;
  for (int label : y) (label == 1 ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg) throw PreconditionError("SingleClassTraining");
  for (const auto& row : x)
    for (double v : row)
      if (!std::isfinite(v)) throw DataError("NonFiniteFeature in forest training set");

  const std::size_t d = x.front().size();
  const std::size_t mtry =
      params.max_features > 0
          ? std::min(params.max_features, d)
          : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))));

  RandomForest model;
  model.dim_ = d;
  model.trees_.resize(params.n_trees);
  for (std::size_t t = 0; t < params.n_trees; ++t) {
    Rng tree_rng = rng.fork(t);
    std::vector<std::size_t> rows(n);
    for (auto& r : rows) r = static_cast<std::size_t>(tree_rng.below(n));  // bootstrap
    TreeBuilder builder(x, y, mtry, tree_rng.fork("splits"));
    model.trees_[t] = builder.build(std::move(rows));
  }
  return model;
}

double RandomForest::score(const std::vector<double>& x) const {
  if (x.size() != dim_) throw PreconditionError("DimensionMismatch in forest score");
  std::size_t votes = 0;
  for (const auto& tree : trees_)
    if (tree_leaf_frac(tree, x) >= 0.5) ++votes;
  return static_cast<double>(votes) / static_cast<double>(trees_.size());
}

std::vector<double> RandomForest::score(const Matrix& x) const {
  std::vector<double> out;
  out.reserve(x.size());
  for (const auto& row : x) out.push_back(score(row));
  return out;
}

}  // namespace touchbench
