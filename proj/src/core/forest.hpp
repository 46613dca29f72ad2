// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef TOUCHBENCH_CORE_FOREST_HPP_
#define TOUCHBENCH_CORE_FOREST_HPP_

#include <vector>

#include "core/features.hpp"
#include "core/rng.hpp"

namespace touchbench {

struct ForestParams {
  std::size_t n_trees = 100;
  std::size_t max_features = 0;  // 0 -> ceil(sqrt(d))
};

// Bagged Gini trees, unlimited depth, per-split feature subsample.
// Per-tree RNG streams are derived from the seed and the tree index, so
// results do not depend on training parallelism.
class RandomForest {
 public:
  static RandomForest train(const Matrix& x, const std::vector<int>& y, const ForestParams& params,
                            const Rng& rng);

  // Fraction of trees voting genuine, in [0,1].
  double score(const std::vector<double>& x) const;
  std::vector<double> score(const Matrix& x) const;

  struct Node {
    int feature = -1;          // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double positive_frac = 0.0;
  };
  using Tree = std::vector<Node>;

  std::vector<Tree> trees_;
  std::size_t dim_ = 0;
};

}  // namespace touchbench

#endif  // TOUCHBENCH_CORE_FOREST_HPP_
