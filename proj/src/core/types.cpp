// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "core/types.hpp"

#include "core/error.hpp"

namespace touchbench {

const char* to_string(Action a) {
  switch (a) {
    case Action::kFingerDown: return "DOWN";
    case Action::kMove: return "MOVE";
    case Action::kFingerUp: return "UP";
  }
  return "?";
}

const char* to_string(Task t) {
  switch (t) {
    case Task::kSocialFeed: return "SOCIAL_FEED";
    case Task::kGallery: return "GALLERY";
  }
  return "?";
}

const char* to_string(Direction d) {
  switch (d) {
    case Direction::kUp: return "UP";
    case Direction::kDown: return "DOWN";
    case Direction::kLeft: return "LEFT";
    case Direction::kRight: return "RIGHT";
  }
  return "?";
}

Action action_from_string(const std::string& s) {
  if (s == "DOWN") return Action::kFingerDown;
  if (s == "MOVE") return Action::kMove;
  if (s == "UP") return Action::kFingerUp;
  throw DataError("unknown action: '" + s + "'");
}

Task task_from_string(const std::string& s) {
  if (s == "SOCIAL_FEED") return Task::kSocialFeed;
  if (s == "GALLERY") return Task::kGallery;
  throw DataError("unknown task: '" + s + "'");
}

Direction direction_from_string(const std::string& s) {
  if (s == "UP") return Direction::kUp;
  if (s == "DOWN") return Direction::kDown;
  if (s == "LEFT") return Direction::kLeft;
  if (s == "RIGHT") return Direction::kRight;
  throw DataError("unknown direction: '" + s + "'");
}

std::size_t Dataset::session_count() const {
  std::size_t n = 0;
  for (const auto& [id, sessions] : users) n += sessions.size();
  return n;
}

std::size_t Dataset::point_count() const {
  std::size_t n = 0;
  for (const auto& [id, sessions] : users)
    for (const auto& s : sessions) n += s.points.size();
  return n;
}

std::vector<std::string> Dataset::user_ids() const {
  std::vector<std::string> ids;
  ids.reserve(users.size());
  for (const auto& [id, sessions] : users) ids.push_back(id);
  return ids;
}

}  // namespace touchbench
