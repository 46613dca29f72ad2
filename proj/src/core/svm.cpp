// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "core/svm.hpp"

#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace touchbench {

double rbf_kernel(const std::vector<double>& a, const std::vector<double>& b, double gamma) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    d2 += diff * diff;
  }
  return std::exp(-gamma * d2);
}

double scale_gamma(const Matrix& x) {
  const std::size_t n = x.size();
  const std::size_t d = x.front().size();
  double total_var = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (const auto& row : x) mean += row[j];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (const auto& row : x) var += (row[j] - mean) * (row[j] - mean);
    total_var += var / static_cast<double>(n);
  }
  const double mean_var = total_var / static_cast<double>(d);
  if (mean_var <= 0.0) return 1.0 / static_cast<double>(d);
  return 1.0 / (static_cast<double>(d) * mean_var);
}

RbfSvm RbfSvm::train(const Matrix& x, const std::vector<int>& y, const SvmParams& params) {
  const std::size_t n = x.size();
  if (n == 0 || y.size() != n) throw PreconditionError("SVM: empty or inconsistent training set");
  bool has_pos = false, has_neg = false;
  for (int label : y) {
    if (label == 1) has_pos = true;
    else if (label == -1) has_neg = true;
    else throw PreconditionError("SVM: labels must be +1/-1");
  }
  if (!has_pos || !has_neg) throw PreconditionError("SingleClassTraining");
  for (const auto& row : x)
    for (double v : row)
      if (!std::isfinite(v)) throw DataError("NonFiniteFeature in SVM training set");

  const double gamma = params.gamma > 0.0 ? params.gamma : scale_gamma(x);
  const double c = params.c;

  // Full kernel matrix; training sets here are small (hundreds of rows).
  std::vector<double> kmat(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    kmat[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double k = rbf_kernel(x[i], x[j], gamma);
      kmat[i * n + j] = k;
      kmat[j * n + i] = k;
    }
  }

  std::vector<double> alpha(n, 0.0);
  // v_i = y_i - f_i with f_i = sum_t alpha_t y_t K(t,i); the KKT gap is
  // max over I_up of v minus min over I_low of v.
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>(y[i]);

  auto dual_objective = [&]() {
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (alpha[i] == 0.0) continue;
      obj += alpha[i];
      for (std::size_t j = 0; j < n; ++j)
        obj -= 0.5 * alpha[i] * alpha[j] * y[i] * y[j] * kmat[i * n + j];
    }
    return obj;
  };

  double m_up = 0.0, m_low = 0.0;
  for (std::size_t iter = 0; iter < params.max_iter; ++iter) {
    if (params.objective_trace) params.objective_trace->push_back(dual_objective());
    std::size_t bi = n, bj = n;
    m_up = -std::numeric_limits<double>::infinity();
    m_low = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      const bool in_up = (y[k] == 1 && alpha[k] < c) || (y[k] == -1 && alpha[k] > 0.0);
      const bool in_low = (y[k] == 1 && alpha[k] > 0.0) || (y[k] == -1 && alpha[k] < c);
      if (in_up && v[k] > m_up) {
        m_up = v[k];
        bi = k;
      }
      if (in_low && v[k] < m_low) {
        m_low = v[k];
        bj = k;
      }
    }
    if (bi == n || bj == n || m_up - m_low <= params.kkt_tol) break;

    // Two-variable analytic step along the equality constraint.
    const double eta = kmat[bi * n + bi] + kmat[bj * n + bj] - 2.0 * kmat[bi * n + bj];
    double lambda = (m_up - m_low) / std::max(eta, 1e-12);
    const double cap_i = y[bi] == 1 ? c - alpha[bi] : alpha[bi];
    const double cap_j = y[bj] == 1 ? alpha[bj] : c - alpha[bj];
    lambda = std::min(lambda, std::min(cap_i, cap_j));
    if (lambda <= 0.0) break;

    alpha[bi] += y[bi] * lambda;
    alpha[bj] -= y[bj] * lambda;
    for (std::size_t k = 0; k < n; ++k)
      v[k] -= lambda * (kmat[bi * n + k] - kmat[bj * n + k]);
  }

  RbfSvm model;
  model.gamma_ = gamma;
  model.dim_ = x.front().size();
  model.bias_ = (m_up + m_low) / 2.0;
  model.train_alpha_ = alpha;
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] > 0.0) {
      model.support_.push_back(x[i]);
      model.coef_.push_back(alpha[i] * y[i]);
    }
  }
  return model;
}

double RbfSvm::decision(const std::vector<double>& x) const {
  if (x.size() != dim_) throw PreconditionError("DimensionMismatch in SVM decision");
  double f = bias_;
  for (std::size_t i = 0; i < support_.size(); ++i)
    f += coef_[i] * rbf_kernel(support_[i], x, gamma_);
  return f;
}

std::vector<double> RbfSvm::decision(const Matrix& x) const {
  std::vector<double> out;
  out.reserve(x.size());
  for (const auto& row : x) out.push_back(decision(row));
  return out;
}

}  // namespace touchbench
