// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "core/features.hpp"
#include "core/rng.hpp"

using namespace touchbench;

namespace {

Stroke mk(std::vector<std::array<std::int64_t, 3>> txy, int w = 100, int h = 100) {
  Stroke s;
  s.user_id = "u";
  s.device = {"dev", w, h, 5.0, 300};
  for (std::size_t i = 0; i < txy.size(); ++i) {
    TouchPoint p;
    p.timestamp_ms = txy[i][0];
    p.x = static_cast<int>(txy[i][1]);
    p.y = static_cast<int>(txy[i][2]);
    p.pressure = 0.5;
    p.area = 0.2;
    p.action = i == 0 ? Action::kFingerDown
                      : (i + 1 == txy.size() ? Action::kFingerUp : Action::kMove);
    s.points.push_back(p);
  }
  return s;
}

}  // namespace

TEST_CASE("percentile interpolates between closest ranks") {
  CHECK(percentile({1, 2, 3, 4}, 0.5) == doctest::Approx(2.5));
  CHECK(percentile({3, 1, 2}, 0.0) == doctest::Approx(1.0));
  CHECK(percentile({3, 1, 2}, 1.0) == doctest::Approx(3.0));
  CHECK(percentile({0, 10}, 0.25) == doctest::Approx(2.5));
  CHECK(percentile({7}, 0.8) == doctest::Approx(7.0));
  CHECK(percentile({}, 0.5) == 0.0);
}

TEST_CASE("percentile matches a brute-force oracle on random inputs") {
  Rng r(4);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 1 + r.below(40);
    std::vector<double> v(n);
    for (auto& x : v) x = r.normal();
    const double p = static_cast<double>(r.below(101)) / 100.0;
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    const double idx = p * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(idx);
    const double frac = idx - static_cast<double>(lo);
    const double expect =
        frac == 0.0 ? sorted[lo] : sorted[lo] * (1 - frac) + sorted[lo + 1] * frac;
    CHECK(percentile(v, p) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("two-point stroke hand computation") {
  // (0,0)@0ms to (30,40)@10ms on a 100x100 screen.
  Stroke s = mk({{0, 0, 0}, {10, 30, 40}});
  FeatureVector f = extract(s, std::nullopt);
  CHECK(f[kInterStrokeTime] == 0.0);
  CHECK(f[kDuration] == doctest::Approx(10.0));
  CHECK(f[kStartX] == doctest::Approx(0.0));
  CHECK(f[kStopX] == doctest::Approx(0.3));
  CHECK(f[kStopY] == doctest::Approx(0.4));
  CHECK(f[kEndToEndDistance] == doctest::Approx(0.5));
  CHECK(f[kTrajectoryLength] == doctest::Approx(0.5));
  CHECK(f[kDistanceRatio] == doctest::Approx(1.0));
  CHECK(f[kMeanVelocity] == doctest::Approx(0.05));
  CHECK(f[kVelocityP50] == doctest::Approx(0.05));
  CHECK(f[kMeanResultantLength] == doctest::Approx(1.0));
  CHECK(f[kEndToEndDirection] == doctest::Approx(std::atan2(0.4, 0.3)));
  CHECK(f[kMaxLineDeviation] == doctest::Approx(0.0));
  // No pair triples: accelerations default to 0.
  CHECK(f[kAccelP50] == 0.0);
  CHECK(f[kMedianAccelFirst5] == 0.0);
  CHECK(f[kMidPressure] == doctest::Approx(0.5));
  CHECK(f[kMidArea] == doctest::Approx(0.2));
}

TEST_CASE("collinear stroke has zero deviation and straight ratio") {
  Stroke s = mk({{0, 0, 0}, {10, 10, 0}, {20, 30, 0}});
  FeatureVector f = extract(s, std::nullopt);
  CHECK(f[kMaxLineDeviation] == doctest::Approx(0.0));
  CHECK(f[kDeviationP80] == doctest::Approx(0.0));
  CHECK(f[kDistanceRatio] == doctest::Approx(1.0));
  CHECK(f[kMeanResultantLength] == doctest::Approx(1.0));
  CHECK(f[kMeanPairDirection] == doctest::Approx(0.0));
  // vel = {0.01, 0.02} per pair; single accel = (0.02-0.01)/10.
  CHECK(f[kVelocityP50] == doctest::Approx(0.015));
  CHECK(f[kAccelP50] == doctest::Approx(0.001));
  CHECK(f[kMedianVelocityLast3] == doctest::Approx(0.015));
}

TEST_CASE("inter stroke time uses the previous stroke end") {
  Stroke s = mk({{1000, 0, 0}, {1010, 30, 40}});
  FeatureVector f = extract(s, 940);
  CHECK(f[kInterStrokeTime] == doctest::Approx(60.0));
}

TEST_CASE("features are invariant to uniform screen scaling") {
  Stroke a = mk({{0, 10, 20}, {15, 40, 25}, {40, 80, 90}});
  Stroke b = mk({{0, 30, 60}, {15, 120, 75}, {40, 240, 270}}, 300, 300);
  FeatureVector fa = extract(a, std::nullopt);
  FeatureVector fb = extract(b, std::nullopt);
  for (std::size_t i = 0; i < kFeatureCount; ++i)
    CHECK(fa[i] == doctest::Approx(fb[i]).epsilon(1e-12));
}

TEST_CASE("features are invariant to a global time shift") {
  Stroke a = mk({{0, 10, 20}, {15, 40, 25}, {40, 80, 90}});
  Stroke b = a;
  for (auto& p : b.points) p.timestamp_ms += 100000;
  FeatureVector fa = extract(a, 10);
  FeatureVector fb = extract(b, 100010);
  for (std::size_t i = 0; i < kFeatureCount; ++i)
    CHECK(fa[i] == doctest::Approx(fb[i]).epsilon(1e-12));
}

TEST_CASE("degenerate strokes are rejected") {
  CHECK_THROWS_AS(extract(mk({{0, 5, 5}}), std::nullopt), PreconditionError);
  CHECK_THROWS_AS(extract(mk({{0, 5, 5}, {10, 5, 5}}), std::nullopt), PreconditionError);
}

TEST_CASE("feature name table has distinct frozen names") {
  CHECK(kFeatureNames.size() == kFeatureCount);
  CHECK(std::string(kFeatureNames[0]) == "inter_stroke_time");
  CHECK(std::string(kFeatureNames[kMidArea]) == "mid_area");
  std::set<std::string> uniq(kFeatureNames.begin(), kFeatureNames.end());
  CHECK(uniq.size() == kFeatureCount);
}

TEST_CASE("scaler standardizes train columns to mean 0 std 1") {
  Rng r(9);
  Matrix m(50, std::vector<double>(4));
  for (auto& row : m)
    for (auto& v : row) v = 3.0 + 2.0 * r.normal();
  Scaler sc = fit_scaler(m);
  Matrix z = apply_scaler(sc, m);
  for (std::size_t j = 0; j < 4; ++j) {
    double mu = 0, s2 = 0;
    for (const auto& row : z) mu += row[j];
    mu /= static_cast<double>(z.size());
    for (const auto& row : z) s2 += (row[j] - mu) * (row[j] - mu);
    s2 /= static_cast<double>(z.size());
    CHECK(std::abs(mu) < 1e-12);
    CHECK(std::abs(s2 - 1.0) < 1e-12);
  }
}

TEST_CASE("scaler handles constant columns and single rows") {
  Matrix m = {{1.0, 5.0}, {1.0, 7.0}};
  Scaler sc = fit_scaler(m);
  CHECK(sc.stddev[0] == 1.0);  // zero spread recorded as 1
  Matrix z = apply_scaler(sc, m);
  CHECK(z[0][0] == 0.0);
  CHECK(z[1][0] == 0.0);

  Matrix one = {{3.0, 4.0}};
  Scaler sc1 = fit_scaler(one);
  Matrix z1 = apply_scaler(sc1, one);
  CHECK(z1[0][0] == 0.0);
  CHECK(z1[0][1] == 0.0);

  CHECK_THROWS_AS(fit_scaler({}), PreconditionError);
  Matrix bad = {{1.0}};
  CHECK_THROWS_AS(apply_scaler(sc, bad), PreconditionError);
}
