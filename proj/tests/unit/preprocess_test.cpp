// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include <doctest.h>

#include "core/preprocess.hpp"

using namespace touchbench;

namespace {

TouchPoint pt(std::int64_t t, int x, int y, Action a) {
  TouchPoint p;
  p.timestamp_ms = t;
  p.x = x;
  p.y = y;
  p.pressure = 0.5;
  p.area = 0.2;
  p.action = a;
  return p;
}

SessionRecord session(std::vector<TouchPoint> pts) {
  SessionRecord s;
  s.session_id = "s0";
  s.ordinal = 0;
  s.device = {"iPhone 7", 750, 1334, 4.7, 326};
  s.points = std::move(pts);
  return s;
}

}  // namespace

TEST_CASE("one DOWN..UP span is one stroke") {
  std::vector<TouchPoint> pts;
  pts.push_back(pt(0, 100, 100, Action::kFingerDown));
  for (int i = 1; i <= 7; ++i) pts.push_back(pt(i * 10, 100 + i * 10, 100, Action::kMove));
  pts.push_back(pt(80, 180, 100, Action::kFingerUp));
  auto strokes = segment(session(pts), "u");
  REQUIRE(strokes.size() == 1);
  CHECK(strokes[0].points.size() == 9);
  CHECK(strokes[0].start_index_in_session == 0);
}

TEST_CASE("empty session segments to nothing") {
  CHECK(segment(session({}), "u").empty());
}

TEST_CASE("DOWN restart discards the unterminated span") {
  // DOWN,MOVE,DOWN,MOVE,UP: first span has no UP, second is a 3-point stroke.
  std::vector<TouchPoint> pts = {
      pt(0, 10, 10, Action::kFingerDown),  pt(10, 20, 10, Action::kMove),
      pt(20, 30, 10, Action::kFingerDown), pt(30, 40, 10, Action::kMove),
      pt(40, 50, 10, Action::kFingerUp),
  };
  SegmentStats stats;
  auto strokes = segment(session(pts), "u", &stats);
  REQUIRE(strokes.size() == 1);
  CHECK(strokes[0].points.size() == 3);
  CHECK(strokes[0].points.front().timestamp_ms == 20);
  CHECK(stats.unterminated == 1);
}

TEST_CASE("orphan points outside spans are discarded and counted") {
  std::vector<TouchPoint> pts = {
      pt(0, 10, 10, Action::kMove),       pt(5, 11, 10, Action::kFingerUp),
      pt(10, 10, 10, Action::kFingerDown), pt(20, 30, 10, Action::kMove),
      pt(30, 40, 10, Action::kFingerUp),
  };
  SegmentStats stats;
  auto strokes = segment(session(pts), "u", &stats);
  REQUIRE(strokes.size() == 1);
  CHECK(stats.orphan_points == 2);
}

TEST_CASE("trailing unterminated span is dropped") {
  std::vector<TouchPoint> pts = {
      pt(0, 10, 10, Action::kFingerDown),
      pt(10, 20, 10, Action::kMove),
  };
  SegmentStats stats;
  auto strokes = segment(session(pts), "u", &stats);
  CHECK(strokes.empty());
  CHECK(stats.unterminated == 1);
}

TEST_CASE("duplicate timestamps keep the last point of the group") {
  std::vector<TouchPoint> pts = {
      pt(0, 10, 10, Action::kFingerDown),
      pt(10, 20, 10, Action::kMove),
      pt(10, 25, 10, Action::kMove),  // same timestamp, supersedes previous
      pt(20, 30, 10, Action::kFingerUp),
  };
  SegmentStats stats;
  auto strokes = segment(session(pts), "u", &stats);
  REQUIRE(strokes.size() == 1);
  REQUIRE(strokes[0].points.size() == 3);
  CHECK(strokes[0].points[1].x == 25);
  CHECK(stats.nonmonotonic_dropped == 1);
  for (std::size_t i = 1; i < strokes[0].points.size(); ++i)
    CHECK(strokes[0].points[i].timestamp_ms > strokes[0].points[i - 1].timestamp_ms);
}

TEST_CASE("segmentation conserves points across strokes and discards") {
  std::vector<TouchPoint> pts = {
      pt(0, 10, 10, Action::kMove),  // orphan
      pt(10, 10, 10, Action::kFingerDown),
      pt(20, 30, 10, Action::kMove),
      pt(30, 40, 10, Action::kFingerUp),
      pt(40, 10, 10, Action::kFingerDown),  // unterminated
      pt(50, 20, 10, Action::kMove),
  };
  SegmentStats stats;
  auto strokes = segment(session(pts), "u", &stats);
  std::size_t in_strokes = 0;
  for (const auto& s : strokes) in_strokes += s.points.size();
  // 2 points in the unterminated span are part of the discard count jointly
  // with the orphan; nothing vanishes unaccounted.
  CHECK(in_strokes == 3);
  CHECK(stats.orphan_points == 1);
  CHECK(stats.unterminated == 1);
}

TEST_CASE("filter removes short strokes and taps") {
  auto mk = [](std::vector<TouchPoint> pts) {
    Stroke s;
    s.points = std::move(pts);
    s.device = {"iPhone 7", 750, 1334, 4.7, 326};
    return s;
  };
  // 2 points: removed.
  Stroke two = mk({pt(0, 0, 0, Action::kFingerDown), pt(10, 100, 0, Action::kFingerUp)});
  // 10 points all within 4 px: removed.
  std::vector<TouchPoint> tap_pts;
  tap_pts.push_back(pt(0, 100, 100, Action::kFingerDown));
  for (int i = 1; i < 9; ++i)
    tap_pts.push_back(pt(i * 10, 100 + (i % 2 ? 3 : -3), 100, Action::kMove));
  tap_pts.push_back(pt(90, 101, 102, Action::kFingerUp));
  Stroke tap = mk(tap_pts);
  // 3 points moving 100 px: kept.
  Stroke ok = mk({pt(0, 0, 0, Action::kFingerDown), pt(10, 50, 0, Action::kMove),
                  pt(20, 100, 0, Action::kFingerUp)});

  auto kept = filter_strokes({two, tap, ok});
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].points.size() == 3);

  // Idempotence.
  auto again = filter_strokes(kept);
  CHECK(again.size() == kept.size());
}

TEST_CASE("direction labels: dominant axis, ties horizontal") {
  auto mk = [](int dx, int dy) {
    Stroke s;
    s.points = {pt(0, 500, 500, Action::kFingerDown), pt(10, 500 + dx / 2, 500 + dy / 2, Action::kMove),
                pt(20, 500 + dx, 500 + dy, Action::kFingerUp)};
    return s;
  };
  CHECK(label_direction(mk(-200, 10)) == Direction::kLeft);
  CHECK(label_direction(mk(200, 10)) == Direction::kRight);
  CHECK(label_direction(mk(0, 150)) == Direction::kDown);
  CHECK(label_direction(mk(0, -150)) == Direction::kUp);
  CHECK(label_direction(mk(50, -50)) == Direction::kRight);   // tie -> horizontal
  CHECK(label_direction(mk(-50, 50)) == Direction::kLeft);    // tie -> horizontal
  CHECK(label_direction(mk(-50, -50)) == Direction::kLeft);
  CHECK(label_direction(mk(50, 50)) == Direction::kRight);
}
