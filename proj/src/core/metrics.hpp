// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef TOUCHBENCH_CORE_METRICS_HPP_
#define TOUCHBENCH_CORE_METRICS_HPP_

#include <vector>

namespace touchbench {

struct RocPoint {
  double threshold = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
};

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
};

struct EerSummary {
  std::vector<double> per_user_eer;
  double mean = 0.0;
  double stddev = 0.0;      // population std of per-user EERs
  double ci95 = 0.0;        // 1.96 * stddev / sqrt(n)
  std::size_t n_users = 0;
};

EerSummary summarize_eers(std::vector<double> per_user_eer);

// Accept rule: score >= threshold. FAR(t) = fraction of impostor scores >= t,
// FRR(t) = fraction of genuine scores < t. The crossing of the two piecewise
// curves is found over all distinct scores plus boundary sentinels and
// linearly interpolated.
EerResult eer(const std::vector<double>& genuine, const std::vector<double>& impostor);

// (FAR, FRR) at a fixed threshold under the same accept rule.
std::pair<double, double> far_frr_at(const std::vector<double>& genuine,
                                     const std::vector<double>& impostor, double threshold);

// Full threshold sweep, one point per distinct score plus sentinels,
// ordered by increasing FPR.
std::vector<RocPoint> roc(const std::vector<double>& genuine, const std::vector<double>& impostor);

// Default grid: 512 log-spaced points in [1e-3, 1] plus 0.
std::vector<double> default_fpr_grid();

// TPR of one user's sweep interpolated onto a shared FPR grid (vertical
// averaging); conservative step interpolation between sweep points.
std::vector<double> tpr_on_grid(const std::vector<RocPoint>& curve,
                                const std::vector<double>& fpr_grid);

struct MeanRoc {
  std::vector<double> fpr;
  std::vector<double> tpr_mean;
  std::vector<double> tpr_ci_low;
  std::vector<double> tpr_ci_high;
};

MeanRoc mean_roc(const std::vector<std::vector<RocPoint>>& per_user,
                 const std::vector<double>& fpr_grid);

// Two-sided Welch's t-test p-value (Welch-Satterthwaite dof, t CDF via the
// regularized incomplete beta function).
double welch_t(const std::vector<double>& a, const std::vector<double>& b);

// Regularized incomplete beta I_x(a, b); exposed for the quadrature
// cross-check in the tests.
double reg_incomplete_beta(double a, double b, double x);

// P1 footnote rescaling: sigma_hat = (mu_m / mu_ref) * sigma_ref.
double extrapolate_std(double mu_m, double mu_ref, double sigma_ref);

}  // namespace touchbench

#endif  // TOUCHBENCH_CORE_METRICS_HPP_
