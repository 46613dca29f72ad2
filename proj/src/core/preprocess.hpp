// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef TOUCHBENCH_CORE_PREPROCESS_HPP_
#define TOUCHBENCH_CORE_PREPROCESS_HPP_

#include <string>
#include <vector>

#include "core/types.hpp"

namespace touchbench {

struct SegmentStats {
  std::size_t strokes = 0;
  std::size_t unterminated = 0;      // DOWN span without UP, discarded
  std::size_t orphan_points = 0;     // MOVE/UP outside a span, discarded
  std::size_t nonmonotonic_dropped = 0;  // non-increasing timestamps inside a stroke
};

// One stroke per FINGER_DOWN..FINGER_UP span. Inside a stroke, points with
// non-increasing timestamps are dropped keeping the last point of a
// duplicate-timestamp group, so timestamps are strictly increasing afterwards.
std::vector<Stroke> segment(const SessionRecord& session, const std::string& user_id,
                            SegmentStats* stats = nullptr);

// Tap removal: keep strokes with >= 3 points and max Euclidean deviation
// from the start point > 5 pixels.
std::vector<Stroke> filter_strokes(std::vector<Stroke> strokes);

// Dominant-axis rule; |dx| == |dy| ties go to the horizontal axis.
Direction label_direction(const Stroke& s);

// Full pipeline over a dataset: segment, filter, label. Strokes come back
// grouped per user in chronological order (session ordinal, then start index).
struct PreprocessedUser {
  std::string user_id;
  std::vector<Stroke> strokes;
};

std::vector<PreprocessedUser> preprocess_dataset(const Dataset& d, SegmentStats* stats = nullptr);

std::vector<Stroke> filter_direction(const std::vector<Stroke>& strokes, Direction dir);

}  // namespace touchbench

#endif  // TOUCHBENCH_CORE_PREPROCESS_HPP_
