// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "core/knn.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace touchbench {

Knn Knn::train(const Matrix& x, const std::vector<int>& y, std::size_t k) {
  if (x.empty() || y.size() != x.size())
    throw PreconditionError("knn: empty or inconsistent training set");
  bool has_pos = false, has_neg = false;
  for (int label : y) (label == 1 ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg) throw PreconditionError("SingleClassTraining");
  for (const auto& row : x)
    for (double v : row)
      if (!std::isfinite(v)) throw DataError("NonFiniteFeature in knn training set");
  Knn model;
  model.x_ = x;
  model.y_ = y;
  model.k_ = std::min(k, x.size());
  if (model.k_ == 0) model.k_ = 1;
  return model;
}

double Knn::score(const std::vector<double>& q) const {
  if (q.size() != x_.front().size()) throw PreconditionError("DimensionMismatch in knn score");
  std::vector<std::pair<double, std::size_t>> d(x_.size());
  for (std::size_t i = 0; i < x_.size(); ++i) {
    double d2 = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
      const double diff = x_[i][j] - q[j];
      d2 += diff * diff;
    }
    d[i] = {d2, i};
  }
  std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k_), d.end());
  std::size_t genuine = 0;
  for (std::size_t i = 0; i < k_; ++i)
    if (y_[d[i].second] == 1) ++genuine;
  return static_cast<double>(genuine) / static_cast<double>(k_);
}

std::vector<double> Knn::score(const Matrix& x) const {
  std::vector<double> out;
  out.reserve(x.size());
  for (const auto& row : x) out.push_back(score(row));
  return out;
}

}  // namespace touchbench
