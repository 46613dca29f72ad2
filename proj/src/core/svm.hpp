// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef TOUCHBENCH_CORE_SVM_HPP_
#define TOUCHBENCH_CORE_SVM_HPP_

#include <vector>

#include "core/features.hpp"

namespace touchbench {

struct SvmParams {
  double c = 1.0;
  double gamma = 0.0;  // 0 -> 1 / (d * mean feature variance)
  double kkt_tol = 1e-3;
  std::size_t max_iter = 200000;
  // When set, the dual objective is appended once per SMO iteration
  // (test instrumentation; quadratic cost per iteration).
  std::vector<double>* objective_trace = nullptr;
};

// C-SVM with RBF kernel, trained by SMO on the maximal violating pair.
class RbfSvm {
 public:
  static RbfSvm train(const Matrix& x, const std::vector<int>& y, const SvmParams& params);

  // Signed kernel decision value; positive means the +1 class.
  double decision(const std::vector<double>& x) const;
  std::vector<double> decision(const Matrix& x) const;

  double bias() const { return bias_; }
  double gamma() const { return gamma_; }
  std::size_t support_count() const { return support_.size(); }

  // Raw training-set multipliers, for KKT verification.
  const std::vector<double>& alphas() const { return train_alpha_; }

  Matrix support_;                 // support vectors
  std::vector<double> coef_;       // alpha_i * y_i per support vector
  double bias_ = 0.0;
  double gamma_ = 1.0;
  std::size_t dim_ = 0;

 private:
  std::vector<double> train_alpha_;  // all alphas incl. zeros, training order
};

// gamma = 1 / (d * mean per-feature population variance); 1/d when the
// variance vanishes.
double scale_gamma(const Matrix& x);

double rbf_kernel(const std::vector<double>& a, const std::vector<double>& b, double gamma);

}  // namespace touchbench

#endif  // TOUCHBENCH_CORE_SVM_HPP_
