// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "core/preprocess.hpp"

#include <cmath>
#include <cstdlib>

namespace touchbench {
namespace {

// Strictly increasing timestamps; keep the last point of each
// duplicate-timestamp group, drop points that go backwards.
std::vector<TouchPoint> dedup_time(const std::vector<TouchPoint>& pts, std::size_t* dropped) {
  std::vector<TouchPoint> out;
  out.reserve(pts.size());
  for (const auto& p : pts) {
    if (!out.empty() && p.timestamp_ms <= out.back().timestamp_ms) {
      if (p.timestamp_ms == out.back().timestamp_ms) {
        out.back() = p;  // keep the later sample of the duplicate group
      }
      if (dropped) ++*dropped;
      continue;
    }
    out.push_back(p);
  }
  return out;
}

double dist(const TouchPoint& a, const TouchPoint& b) {
  const double dx = static_cast<double>(a.x) - b.x;
  const double dy = static_cast<double>(a.y) - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

std::vector<Stroke> segment(const SessionRecord& session, const std::string& user_id,
                            SegmentStats* stats) {
  std::vector<Stroke> out;
  std::vector<TouchPoint> span;
  bool in_span = false;
  int start_index = 0;
  for (std::size_t i = 0; i < session.points.size(); ++i) {
    const TouchPoint& p = session.points[i];
    switch (p.action) {
      case Action::kFingerDown:
        if (in_span && stats) ++stats->unterminated;
        span.clear();
        span.push_back(p);
        in_span = true;
        start_index = static_cast<int>(i);
        break;
      case Action::kMove:
        if (in_span) {
          span.push_back(p);
        } else if (stats) {
          ++stats->orphan_points;
        }
        break;
      case Action::kFingerUp:
        if (in_span) {
          span.push_back(p);
          Stroke s;
          std::size_t dropped = 0;
          s.points = dedup_time(span, &dropped);
          if (stats) stats->nonmonotonic_dropped += dropped;
          s.user_id = user_id;
          s.session_ordinal = session.ordinal;
          s.device = session.device;
          s.start_index_in_session = start_index;
          out.push_back(std::move(s));
          if (stats) ++stats->strokes;
          in_span = false;
        } else if (stats) {
          ++stats->orphan_points;
        }
        break;
    }
  }
  // A trailing DOWN span at session end is dropped, not auto-closed.
  if (in_span && stats) ++stats->unterminated;
  return out;
}

std::vector<Stroke> filter_strokes(std::vector<Stroke> strokes) {
  std::vector<Stroke> out;
  out.reserve(strokes.size());
  for (auto& s : strokes) {
    if (s.points.size() < 3) continue;
    double max_dev = 0.0;
    for (const auto& p : s.points) max_dev = std::max(max_dev, dist(s.points.front(), p));
    if (max_dev <= 5.0) continue;
    s.direction = label_direction(s);
    out.push_back(std::move(s));
  }
  return out;
}

Direction label_direction(const Stroke& s) {
  const double dx = static_cast<double>(s.points.back().x) - s.points.front().x;
  const double dy = static_cast<double>(s.points.back().y) - s.points.front().y;
  if (std::abs(dx) >= std::abs(dy)) return dx < 0 ? Direction::kLeft : Direction::kRight;
  return dy < 0 ? Direction::kUp : Direction::kDown;
}

std::vector<PreprocessedUser> preprocess_dataset(const Dataset& d, SegmentStats* stats) {
  std::vector<PreprocessedUser> out;
  out.reserve(d.users.size());
  for (const auto& [user, sessions] : d.users) {
    PreprocessedUser pu;
    pu.user_id = user;
    for (const auto& session : sessions) {
      auto strokes = filter_strokes(segment(session, user, stats));
      for (auto& s : strokes) pu.strokes.push_back(std::move(s));
    }
    out.push_back(std::move(pu));
  }
  return out;
}

std::vector<Stroke> filter_direction(const std::vector<Stroke>& strokes, Direction dir) {
  std::vector<Stroke> out;
  for (const auto& s : strokes)
    if (s.direction == dir) out.push_back(s);
  return out;
}

}  // namespace touchbench
