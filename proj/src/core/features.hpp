// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef TOUCHBENCH_CORE_FEATURES_HPP_
#define TOUCHBENCH_CORE_FEATURES_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace touchbench {

// Canonical per-stroke descriptor. Column names are frozen for
// cross-implementation diffing; order matters.
inline constexpr std::size_t kFeatureCount = 27;

extern const std::array<const char*, kFeatureCount> kFeatureNames;

using FeatureVector = std::array<double, kFeatureCount>;

enum FeatureIndex : std::size_t {
  kInterStrokeTime = 0,
  kDuration,
  kStartX,
  kStartY,
  kStopX,
  kStopY,
  kEndToEndDistance,
  kMeanResultantLength,
  kEndToEndDirection,
  kVelocityP20,
  kVelocityP50,
  kVelocityP80,
  kAccelP20,
  kAccelP50,
  kAccelP80,
  kMedianVelocityLast3,
  kMaxLineDeviation,
  kDeviationP20,
  kDeviationP50,
  kDeviationP80,
  kMeanPairDirection,
  kTrajectoryLength,
  kDistanceRatio,
  kMeanVelocity,
  kMedianAccelFirst5,
  kMidPressure,
  kMidArea,
};

// Percentile by linear interpolation between closest ranks (index p*(n-1)).
double percentile(std::vector<double> v, double p);

// Extracts the descriptor of a filtered, time-deduplicated stroke.
// Coordinates are divided by (screen width, screen height) before any
// geometry. inter_stroke_time is start - prev_stroke_end, 0 when absent.
FeatureVector extract(const Stroke& s, std::optional<std::int64_t> prev_stroke_end);

using Matrix = std::vector<std::vector<double>>;

// Train-fitted standardization. A zero std is recorded as 1.
struct Scaler {
  std::vector<double> mean;
  std::vector<double> stddev;
};

Scaler fit_scaler(const Matrix& train);
Matrix apply_scaler(const Scaler& sc, const Matrix& m);
void apply_scaler_in_place(const Scaler& sc, Matrix& m);

}  // namespace touchbench

#endif  // TOUCHBENCH_CORE_FEATURES_HPP_
