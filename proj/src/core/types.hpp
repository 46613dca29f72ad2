// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef TOUCHBENCH_CORE_TYPES_HPP_
#define TOUCHBENCH_CORE_TYPES_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace touchbench {

enum class Action { kFingerDown, kMove, kFingerUp };

enum class Task { kSocialFeed, kGallery };

enum class Direction { kUp, kDown, kLeft, kRight };

const char* to_string(Action a);
const char* to_string(Task t);
const char* to_string(Direction d);
Action action_from_string(const std::string& s);
Task task_from_string(const std::string& s);
Direction direction_from_string(const std::string& s);

struct TouchPoint {
  std::int64_t timestamp_ms = 0;
  int x = 0;  // pixels
  int y = 0;  // pixels
  double pressure = 0.0;  // [0,1]
  double area = 0.0;      // [0,1]
  Action action = Action::kMove;
};

struct DeviceSpec {
  std::string model_name;
  int screen_width = 0;
  int screen_height = 0;
  double diagonal_in = 0.0;
  double ppi = 0.0;
};

struct SessionRecord {
  std::string session_id;
  int ordinal = 0;  // chronological index per user, 0-based
  Task task = Task::kGallery;
  DeviceSpec device;
  std::vector<TouchPoint> points;  // sorted by timestamp, non-decreasing
};

enum class Provenance { kIngested, kSynthetic };

struct Dataset {
  // Sessions per user, ordered by ordinal.
  std::map<std::string, std::vector<SessionRecord>> users;
  Provenance provenance = Provenance::kIngested;

  std::size_t user_count() const { return users.size(); }
  std::size_t session_count() const;
  std::size_t point_count() const;
  std::vector<std::string> user_ids() const;
};

// One finger-down..finger-up trajectory, post segmentation.
struct Stroke {
  std::vector<TouchPoint> points;
  std::string user_id;
  int session_ordinal = 0;
  DeviceSpec device;
  Direction direction = Direction::kLeft;
  int start_index_in_session = 0;  // preserves chronological order
};

}  // namespace touchbench

#endif  // TOUCHBENCH_CORE_TYPES_HPP_
