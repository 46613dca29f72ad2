// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef TOUCHBENCH_CORE_MLP_HPP_
#define TOUCHBENCH_CORE_MLP_HPP_

#include <cstdint>
#include <vector>

#include "core/features.hpp"
#include "core/rng.hpp"

namespace touchbench {

struct MlpParams {
  std::vector<std::size_t> hidden = {30, 30, 15};
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  std::size_t epochs = 50;
  std::size_t batch_size = 32;
  double dropout = 0.3;
  double bn_momentum = 0.9;
  double bn_eps = 1e-5;
};

// Feed-forward binary scorer: per hidden layer Linear -> BatchNorm -> ReLU
// -> Dropout, then Linear -> sigmoid. Trained with Adam on binary
// cross-entropy.
class Mlp {
 public:
  static Mlp train(const Matrix& x, const std::vector<int>& y, const MlpParams& params,
                   const Rng& rng);

  // Sigmoid output in (0,1); inference mode (running BN stats, no dropout).
  double score(const std::vector<double>& x) const;
  std::vector<double> score(const Matrix& x) const;

  // Mean BCE loss over (x, y) in inference mode, plus its gradient with
  // respect to every trainable parameter. Used by the finite-difference
  // check; dropout off, batch norm on running statistics.
  double loss_eval_mode(const Matrix& x, const std::vector<int>& y) const;
  std::vector<double> grad_eval_mode(const Matrix& x, const std::vector<int>& y) const;

  // Flat views over all trainable parameters (weights, biases, BN
  // gamma/beta), in a fixed order matching grad_eval_mode.
  std::size_t parameter_count() const;
  double get_parameter(std::size_t i) const;
  void set_parameter(std::size_t i, double v);

  struct Layer {
    std::size_t in = 0, out = 0;
    std::vector<double> w;  // out x in, row-major
    std::vector<double> b;
    // Batch norm state; unused on the output layer.
    bool has_bn = false;
    std::vector<double> gamma, beta;
    std::vector<double> run_mean, run_var;
  };

  std::vector<Layer> layers_;
  MlpParams params_;
  std::size_t dim_ = 0;

 private:
  std::vector<double*> parameter_ptrs();
  std::vector<const double*> parameter_ptrs() const;
};

}  // namespace touchbench

#endif  // TOUCHBENCH_CORE_MLP_HPP_
