// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "core/metrics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "core/error.hpp"

namespace touchbench {
namespace {

// FAR(t): fraction of impostor scores >= t. `sorted` ascending.
double frac_ge(const std::vector<double>& sorted, double t) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), t);
  return static_cast<double>(sorted.end() - it) / static_cast<double>(sorted.size());
}

// FRR(t): fraction of genuine scores < t.
double frac_lt(const std::vector<double>& sorted, double t) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), t);
  return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

std::vector<double> sweep_thresholds(const std::vector<double>& genuine,
                                     const std::vector<double>& impostor) {
  std::vector<double> t;
  t.reserve(genuine.size() + impostor.size() + 2);
  t.insert(t.end(), genuine.begin(), genuine.end());
  t.insert(t.end(), impostor.begin(), impostor.end());
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  t.insert(t.begin(), t.front() - 1.0);  // everything accepted
  t.push_back(t.back() + 1.0);           // everything rejected
  return t;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_var(const std::vector<double>& v, double m) {
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double betacf(double a, double b, double x) {
  // Continued fraction for the incomplete beta function (modified Lentz).
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double reg_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_bt =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double bt = std::exp(ln_bt);
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
  return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

EerResult eer(const std::vector<double>& genuine, const std::vector<double>& impostor) {
  if (genuine.empty() || impostor.empty()) throw PreconditionError("EmptyScoreList");
  std::vector<double> g = genuine, im = impostor;
  std::sort(g.begin(), g.end());
  std::sort(im.begin(), im.end());
  const auto thresholds = sweep_thresholds(g, im);

  double prev_far = 1.0, prev_frr = 0.0, prev_t = thresholds.front();
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    const double t = thresholds[k];
    const double far = frac_ge(im, t);
    const double frr = frac_lt(g, t);
    assert(k == 0 || far <= prev_far + 1e-15);
    assert(k == 0 || frr + 1e-15 >= prev_frr);
    if (frr >= far) {
      if (k == 0) return {far, t};
      const double d_prev = prev_far - prev_frr;  // > 0 before the crossing
      const double d_cur = far - frr;             // <= 0 here
      const double denom = d_prev - d_cur;
      const double alpha = denom > 0.0 ? d_prev / denom : 0.0;
      EerResult r;
      r.eer = prev_far + alpha * (far - prev_far);
      r.threshold = prev_t + alpha * (t - prev_t);
      return r;
    }
    prev_far = far;
    prev_frr = frr;
    prev_t = t;
  }
  return {prev_far, prev_t};  // unreachable: the upper sentinel has FRR=1 >= FAR=0
}

std::pair<double, double> far_frr_at(const std::vector<double>& genuine,
                                     const std::vector<double>& impostor, double threshold) {
  if (genuine.empty() || impostor.empty()) throw PreconditionError("EmptyScoreList");
  std::vector<double> g = genuine, im = impostor;
  std::sort(g.begin(), g.end());
  std::sort(im.begin(), im.end());
  return {frac_ge(im, threshold), frac_lt(g, threshold)};
}

std::vector<RocPoint> roc(const std::vector<double>& genuine, const std::vector<double>& impostor) {
  if (genuine.empty() || impostor.empty()) throw PreconditionError("EmptyScoreList");
  std::vector<double> g = genuine, im = impostor;
  std::sort(g.begin(), g.end());
  std::sort(im.begin(), im.end());
  auto thresholds = sweep_thresholds(g, im);
  std::vector<RocPoint> out;
  out.reserve(thresholds.size());
  // Descending threshold gives ascending FPR.
  for (auto it = thresholds.rbegin(); it != thresholds.rend(); ++it) {
    RocPoint p;
    p.threshold = *it;
    p.fpr = frac_ge(im, *it);
    p.tpr = frac_ge(g, *it);
    out.push_back(p);
  }
  return out;
}

std::vector<double> default_fpr_grid() {
  std::vector<double> grid;
  grid.push_back(0.0);
  constexpr int kPoints = 512;
  const double lo = std::log10(1e-3);
  const double hi = std::log10(1.0);
  for (int i = 0; i < kPoints; ++i) {
    const double e = lo + (hi - lo) * static_cast<double>(i) / (kPoints - 1);
    grid.push_back(std::pow(10.0, e));
  }
  return grid;
}

std::vector<double> tpr_on_grid(const std::vector<RocPoint>& curve,
                                const std::vector<double>& fpr_grid) {
  // Highest TPR attainable at FPR <= g (step interpolation of the staircase).
  std::vector<double> out;
  out.reserve(fpr_grid.size());
  for (double g : fpr_grid) {
    double best = 0.0;
    for (const auto& p : curve)
      if (p.fpr <= g) best = std::max(best, p.tpr);
    out.push_back(best);
  }
  return out;
}

MeanRoc mean_roc(const std::vector<std::vector<RocPoint>>& per_user,
                 const std::vector<double>& fpr_grid) {
  if (per_user.empty()) throw PreconditionError("EmptyScoreList: no users");
  const std::size_t m = fpr_grid.size();
  const double n = static_cast<double>(per_user.size());
  MeanRoc out;
  out.fpr = fpr_grid;
  out.tpr_mean.assign(m, 0.0);
  out.tpr_ci_low.assign(m, 0.0);
  out.tpr_ci_high.assign(m, 0.0);
  std::vector<std::vector<double>> grids;
  grids.reserve(per_user.size());
  for (const auto& c : per_user) grids.push_back(tpr_on_grid(c, fpr_grid));
  for (std::size_t j = 0; j < m; ++j) {
    double s = 0.0;
    for (const auto& g : grids) s += g[j];
    const double mean = s / n;
    double var = 0.0;
    for (const auto& g : grids) var += (g[j] - mean) * (g[j] - mean);
    const double sd = std::sqrt(var / n);
    const double half = per_user.size() > 1 ? 1.96 * sd / std::sqrt(n) : 0.0;
    out.tpr_mean[j] = mean;
    out.tpr_ci_low[j] = std::max(0.0, mean - half);
    out.tpr_ci_high[j] = std::min(1.0, mean + half);
  }
  return out;
}

EerSummary summarize_eers(std::vector<double> per_user_eer) {
  if (per_user_eer.empty()) throw PreconditionError("EmptyScoreList: no per-user EERs");
  EerSummary s;
  s.n_users = per_user_eer.size();
  s.mean = mean_of(per_user_eer);
  double var = 0.0;
  for (double e : per_user_eer) var += (e - s.mean) * (e - s.mean);
  s.stddev = std::sqrt(var / static_cast<double>(s.n_users));
  s.ci95 = 1.96 * s.stddev / std::sqrt(static_cast<double>(s.n_users));
  s.per_user_eer = std::move(per_user_eer);
  return s;
}

double welch_t(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2)
    throw PreconditionError("DegenerateSample: need at least 2 values per sample");
  const double ma = mean_of(a), mb = mean_of(b);
  const double va = sample_var(a, ma), vb = sample_var(b, mb);
  if (va == 0.0 && vb == 0.0) {
    if (ma == mb) throw PreconditionError("DegenerateSample: zero variance in both samples");
    return 0.0;  // deterministic separation
  }
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double se2 = va / na + vb / nb;
  const double t = (ma - mb) / std::sqrt(se2);
  const double dof = se2 * se2 / ((va / na) * (va / na) / (na - 1.0) + (vb / nb) * (vb / nb) / (nb - 1.0));
  if (t == 0.0) return 1.0;
  return reg_incomplete_beta(dof / 2.0, 0.5, dof / (dof + t * t));
}

double extrapolate_std(double mu_m, double mu_ref, double sigma_ref) {
  if (mu_ref <= 0.0) throw PreconditionError("ZeroReferenceMean");
  return (mu_m / mu_ref) * sigma_ref;
}

}  // namespace touchbench
