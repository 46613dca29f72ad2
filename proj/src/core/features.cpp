// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "core/features.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace touchbench {

const std::array<const char*, kFeatureCount> kFeatureNames = {
    "inter_stroke_time",
    "duration",
    "start_x",
    "start_y",
    "stop_x",
    "stop_y",
    "end_to_end_distance",
    "mean_resultant_length",
    "end_to_end_direction",
    "velocity_p20",
    "velocity_p50",
    "velocity_p80",
    "accel_p20",
    "accel_p50",
    "accel_p80",
    "median_velocity_last3",
    "max_line_deviation",
    "deviation_p20",
    "deviation_p50",
    "deviation_p80",
    "mean_pair_direction",
    "trajectory_length",
    "distance_ratio",
    "mean_velocity",
    "median_accel_first5",
    "mid_pressure",
    "mid_area",
};

double percentile(std::vector<double> v, double p) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double idx = p * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(idx));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(idx));
  if (lo == hi) return v[lo];
  const double frac = idx - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

namespace {

double median(std::vector<double> v) { return percentile(std::move(v), 0.5); }

}  // namespace

FeatureVector extract(const Stroke& s, std::optional<std::int64_t> prev_stroke_end) {
  const std::size_t n = s.points.size();
  if (n < 2) throw PreconditionError("DegenerateStroke: fewer than 2 points");
  const double w = static_cast<double>(s.device.screen_width);
  const double h = static_cast<double>(s.device.screen_height);

  // Normalized coordinates and relative timestamps.
  std::vector<double> xs(n), ys(n);
  std::vector<std::int64_t> ts(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = static_cast<double>(s.points[i].x) / w;
    ys[i] = static_cast<double>(s.points[i].y) / h;
    ts[i] = s.points[i].timestamp_ms;
  }

  bool all_coincident = true;
  for (std::size_t i = 1; i < n && all_coincident; ++i)
    if (xs[i] != xs[0] || ys[i] != ys[0]) all_coincident = false;
  if (all_coincident) throw PreconditionError("DegenerateStroke: all points coincident");

  std::vector<double> vel;  // per consecutive pair, normalized px/ms
  std::vector<double> dir_cos, dir_sin;
  double traj = 0.0;
  vel.reserve(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    const double dx = xs[i] - xs[i - 1];
    const double dy = ys[i] - ys[i - 1];
    const double d = std::sqrt(dx * dx + dy * dy);
    const double dt = static_cast<double>(ts[i] - ts[i - 1]);
    traj += d;
    vel.push_back(d / dt);
    const double ang = std::atan2(dy, dx);
    dir_cos.push_back(std::cos(ang));
    dir_sin.push_back(std::sin(ang));
  }

  // Velocity deltas over the later pair's time step.
  std::vector<double> acc;
  if (n >= 3) {
    acc.reserve(n - 2);
    for (std::size_t i = 0; i + 1 < vel.size(); ++i) {
      const double dt = static_cast<double>(ts[i + 2] - ts[i + 1]);
      acc.push_back((vel[i + 1] - vel[i]) / dt);
    }
  }

  // Perpendicular distances to the start->end chord.
  const double cx = xs[n - 1] - xs[0];
  const double cy = ys[n - 1] - ys[0];
  const double chord = std::sqrt(cx * cx + cy * cy);
  std::vector<double> dev(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double px = xs[i] - xs[0];
    const double py = ys[i] - ys[0];
    if (chord > 0.0) {
      dev[i] = std::abs(cx * py - cy * px) / chord;
    } else {
      // Closed stroke: chord degenerates, fall back to distance from start.
      dev[i] = std::sqrt(px * px + py * py);
    }
  }

  double mean_cos = 0.0, mean_sin = 0.0;
  for (std::size_t i = 0; i < dir_cos.size(); ++i) {
    mean_cos += dir_cos[i];
    mean_sin += dir_sin[i];
  }
  mean_cos /= static_cast<double>(dir_cos.size());
  mean_sin /= static_cast<double>(dir_sin.size());

  const double duration = static_cast<double>(ts[n - 1] - ts[0]);
  const std::size_t mid = (n - 1) / 2;

  std::vector<double> last3(vel.end() - static_cast<std::ptrdiff_t>(std::min<std::size_t>(3, vel.size())),
                            vel.end());
  std::vector<double> first5_acc(acc.begin(),
                                 acc.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(4, acc.size())));

  FeatureVector f{};
  f[kInterStrokeTime] =
      prev_stroke_end ? static_cast<double>(ts[0] - *prev_stroke_end) : 0.0;
  f[kDuration] = duration;
  f[kStartX] = xs[0];
  f[kStartY] = ys[0];
  f[kStopX] = xs[n - 1];
  f[kStopY] = ys[n - 1];
  f[kEndToEndDistance] = chord;
  f[kMeanResultantLength] = std::sqrt(mean_cos * mean_cos + mean_sin * mean_sin);
  f[kEndToEndDirection] = std::atan2(cy, cx);
  f[kVelocityP20] = percentile(vel, 0.2);
  f[kVelocityP50] = percentile(vel, 0.5);
  f[kVelocityP80] = percentile(vel, 0.8);
  f[kAccelP20] = percentile(acc, 0.2);
  f[kAccelP50] = percentile(acc, 0.5);
  f[kAccelP80] = percentile(acc, 0.8);
  f[kMedianVelocityLast3] = median(last3);
  f[kMaxLineDeviation] = *std::max_element(dev.begin(), dev.end());
  f[kDeviationP20] = percentile(dev, 0.2);
  f[kDeviationP50] = percentile(dev, 0.5);
  f[kDeviationP80] = percentile(dev, 0.8);
  f[kMeanPairDirection] = std::atan2(mean_sin, mean_cos);
  f[kTrajectoryLength] = traj;
  f[kDistanceRatio] = traj > 0.0 ? std::min(chord / traj, 1.0) : 0.0;
  f[kMeanVelocity] = traj / duration;
  f[kMedianAccelFirst5] = median(first5_acc);
  f[kMidPressure] = s.points[mid].pressure;
  f[kMidArea] = s.points[mid].area;

  for (double v : f)
    if (!std::isfinite(v)) throw DataError("NonFiniteFeature in stroke of user " + s.user_id);
  return f;
}

Scaler fit_scaler(const Matrix& train) {
  if (train.empty()) throw PreconditionError("EmptyTrainingSet");
  const std::size_t d = train.front().size();
  Scaler sc;
  sc.mean.assign(d, 0.0);
  sc.stddev.assign(d, 0.0);
  for (const auto& row : train)
    for (std::size_t j = 0; j < d; ++j) sc.mean[j] += row[j];
  const double n = static_cast<double>(train.size());
  for (std::size_t j = 0; j < d; ++j) sc.mean[j] /= n;
  for (const auto& row : train)
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = row[j] - sc.mean[j];
      sc.stddev[j] += diff * diff;
    }
  for (std::size_t j = 0; j < d; ++j) {
    sc.stddev[j] = std::sqrt(sc.stddev[j] / n);
    if (sc.stddev[j] == 0.0) sc.stddev[j] = 1.0;
  }
  return sc;
}

void apply_scaler_in_place(const Scaler& sc, Matrix& m) {
  for (auto& row : m) {
    if (row.size() != sc.mean.size()) throw PreconditionError("DimensionMismatch in scaler");
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = (row[j] - sc.mean[j]) / sc.stddev[j];
  }
}

Matrix apply_scaler(const Scaler& sc, const Matrix& m) {
  Matrix out = m;
  apply_scaler_in_place(sc, out);
  return out;
}

}  // namespace touchbench
