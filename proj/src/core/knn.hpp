// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef TOUCHBENCH_CORE_KNN_HPP_
#define TOUCHBENCH_CORE_KNN_HPP_

#include <vector>

#include "core/features.hpp"

namespace touchbench {

// k-nearest-neighbour scorer: fraction of genuine labels among the k
// Euclidean-nearest stored samples. Distance ties break on the lower
// training index.
class Knn {
 public:
  static Knn train(const Matrix& x, const std::vector<int>& y, std::size_t k);

  double score(const std::vector<double>& x) const;
  std::vector<double> score(const Matrix& x) const;

  Matrix x_;
  std::vector<int> y_;
  std::size_t k_ = 18;  // clamped to the training size
};

}  // namespace touchbench

#endif  // TOUCHBENCH_CORE_KNN_HPP_
