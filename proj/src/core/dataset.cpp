// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "core/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "core/error.hpp"

namespace touchbench {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::int64_t parse_i64(const std::string& s, const std::string& where) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw DataError("MalformedRow: bad integer '" + s + "' in " + where);
  return v;
}

double parse_f64(const std::string& s, const std::string& where) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError("MalformedRow: bad number '" + s + "' in " + where);
  }
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

constexpr const char* kDataHeader =
    "user_id,session_id,device_model,task,timestamp_ms,x_px,y_px,pressure,area,action";
constexpr const char* kCatalogHeader = "model_name,width_px,height_px,diagonal_in,ppi";

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::vector<DeviceSpec> read_device_catalog(std::istream& in, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line)) throw DataError(origin + ": empty device catalog");
  strip_cr(line);
  if (line != kCatalogHeader)
    throw DataError(origin + ": bad catalog header, expected '" + kCatalogHeader + "'");
  std::vector<DeviceSpec> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    auto cols = split_csv(line);
    const std::string where = origin + ":" + std::to_string(lineno);
    if (cols.size() != 5) throw DataError("MalformedRow: " + where + ": expected 5 columns");
    DeviceSpec d;
    d.model_name = cols[0];
    d.screen_width = static_cast<int>(parse_i64(cols[1], where));
    d.screen_height = static_cast<int>(parse_i64(cols[2], where));
    d.diagonal_in = parse_f64(cols[3], where);
    d.ppi = parse_f64(cols[4], where);
    if (d.screen_width <= 0 || d.screen_height <= 0 || d.ppi <= 0)
      throw DataError("MalformedRow: " + where + ": dimensions and ppi must be positive");
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<DeviceSpec> load_device_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open device catalog '" + path + "'");
  return read_device_catalog(in, path);
}

void write_device_catalog(const std::vector<DeviceSpec>& catalog, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write device catalog '" + path + "'");
  out << kCatalogHeader << "\n";
  for (const auto& d : catalog)
    out << d.model_name << ',' << d.screen_width << ',' << d.screen_height << ','
        << fmt_double(d.diagonal_in) << ',' << fmt_double(d.ppi) << "\n";
}

std::vector<DeviceSpec> builtin_device_catalog() {
  return {
      {"iPhone 6S", 750, 1334, 4.7, 326},       {"iPhone 6S Plus", 1080, 1920, 5.5, 401},
      {"iPhone 7", 750, 1334, 4.7, 326},        {"iPhone 7 Plus", 1080, 1920, 5.5, 401},
      {"iPhone 8", 750, 1334, 4.7, 326},        {"iPhone 8 Plus", 1080, 1920, 5.5, 401},
      {"iPhone X", 1125, 2436, 5.8, 458},       {"iPhone XS", 1125, 2436, 5.8, 458},
      {"iPhone XS Max", 1242, 2688, 6.5, 458},  {"OnePlus 5", 1080, 1920, 5.5, 401},
      {"BLU VIVO 6", 1080, 1920, 5.5, 401},     {"MOTO G 3", 720, 1280, 5.0, 294},
  };
}

Dataset ingest_stream(std::istream& in, const std::vector<DeviceSpec>& catalog,
                      const std::string& origin, IngestReport* report) {
  std::map<std::string, const DeviceSpec*> devices;
  for (const auto& d : catalog) devices[d.model_name] = &d;

  std::string line;
  if (!std::getline(in, line)) {
    // Empty file: zero users.
    Dataset d;
    return d;
  }
  strip_cr(line);
  if (line != kDataHeader)
    throw DataError(origin + ": bad header, expected '" + std::string(kDataHeader) + "'");

  struct SessionKey {
    std::string user;
    std::string session;
    bool operator<(const SessionKey& o) const {
      return user < o.user || (user == o.user && session < o.session);
    }
  };
  std::map<SessionKey, SessionRecord> sessions;

  std::size_t lineno = 1;
  std::size_t points = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    auto cols = split_csv(line);
    const std::string where = origin + ":" + std::to_string(lineno);
    if (cols.size() != 10) throw DataError("MalformedRow: " + where + ": expected 10 columns");

    auto dev_it = devices.find(cols[2]);
    if (dev_it == devices.end())
      throw DataError("UnknownDevice: " + where + ": '" + cols[2] + "'");
    const DeviceSpec& dev = *dev_it->second;

    TouchPoint p;
    p.timestamp_ms = parse_i64(cols[4], where);
    p.x = static_cast<int>(parse_i64(cols[5], where));
    p.y = static_cast<int>(parse_i64(cols[6], where));
    p.pressure = parse_f64(cols[7], where);
    p.area = parse_f64(cols[8], where);
    p.action = action_from_string(cols[9]);
    if (p.pressure < 0.0 || p.pressure > 1.0)
      throw DataError("MalformedRow: " + where + ": pressure out of [0,1]");
    if (p.area < 0.0 || p.area > 1.0)
      throw DataError("MalformedRow: " + where + ": area out of [0,1]");
    if (p.x < 0 || p.x >= dev.screen_width)
      throw DataError("MalformedRow: " + where + ": x outside screen");
    if (p.y < 0 || p.y >= dev.screen_height)
      throw DataError("MalformedRow: " + where + ": y outside screen");

    SessionKey key{cols[0], cols[1]};
    auto [it, inserted] = sessions.try_emplace(key);
    SessionRecord& rec = it->second;
    if (inserted) {
      rec.session_id = cols[1];
      rec.task = task_from_string(cols[3]);
      rec.device = dev;
    } else {
      if (rec.device.model_name != dev.model_name)
        throw DataError("MalformedRow: " + where + ": session '" + cols[1] +
                        "' spans two device models");
      if (rec.task != task_from_string(cols[3]))
        throw DataError("MalformedRow: " + where + ": session '" + cols[1] +
                        "' spans two tasks");
    }
    rec.points.push_back(p);
    ++points;
  }

  Dataset d;
  d.provenance = Provenance::kIngested;
  for (auto& [key, rec] : sessions) {
    std::stable_sort(rec.points.begin(), rec.points.end(),
                     [](const TouchPoint& a, const TouchPoint& b) {
                       return a.timestamp_ms < b.timestamp_ms;
                     });
    d.users[key.user].push_back(std::move(rec));
  }
  // Ordinals: chronological by minimum timestamp, session_id as tie-break.
  for (auto& [user, recs] : d.users) {
    std::stable_sort(recs.begin(), recs.end(), [](const SessionRecord& a, const SessionRecord& b) {
      std::int64_t ta = a.points.empty() ? std::numeric_limits<std::int64_t>::max()
                                         : a.points.front().timestamp_ms;
      std::int64_t tb = b.points.empty() ? std::numeric_limits<std::int64_t>::max()
                                         : b.points.front().timestamp_ms;
      return ta < tb || (ta == tb && a.session_id < b.session_id);
    });
    for (std::size_t i = 0; i < recs.size(); ++i) recs[i].ordinal = static_cast<int>(i);
  }
  if (report) {
    report->rows = lineno - 1;
    report->points = points;
  }
  return d;
}

Dataset ingest(const std::string& path, const std::vector<DeviceSpec>& catalog,
               IngestReport* report) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return ingest_stream(in, catalog, path, report);
}

void write_csv_stream(const Dataset& d, std::ostream& out) {
  out << kDataHeader << "\n";
  for (const auto& [user, sessions] : d.users) {
    for (const auto& s : sessions) {
      for (const auto& p : s.points) {
        out << user << ',' << s.session_id << ',' << s.device.model_name << ','
            << to_string(s.task) << ',' << p.timestamp_ms << ',' << p.x << ',' << p.y << ','
            << fmt_double(p.pressure) << ',' << fmt_double(p.area) << ',' << to_string(p.action)
            << "\n";
      }
    }
  }
}

void write_csv(const Dataset& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  write_csv_stream(d, out);
}

std::map<std::string, Dataset> partition_by_device(const Dataset& d) {
  std::map<std::string, Dataset> out;
  for (const auto& [user, sessions] : d.users) {
    for (const auto& s : sessions) {
      Dataset& part = out[s.device.model_name];
      part.provenance = d.provenance;
      part.users[user].push_back(s);
    }
  }
  // Ordinals must stay contiguous from 0 inside each partition.
  for (auto& [model, part] : out)
    for (auto& [user, sessions] : part.users)
      for (std::size_t i = 0; i < sessions.size(); ++i)
        sessions[i].ordinal = static_cast<int>(i);
  return out;
}

Dataset subsample_users(const Dataset& d, std::size_t n, Rng& rng) {
  auto ids = d.user_ids();
  if (n > ids.size())
    throw PreconditionError("NotEnoughUsers: requested " + std::to_string(n) + " of " +
                            std::to_string(ids.size()));
  auto picks = rng.sample_indices(ids.size(), n);
  std::vector<std::string> keep;
  keep.reserve(n);
  for (std::size_t i : picks) keep.push_back(ids[i]);
  return filter_users(d, keep);
}

Dataset filter_users(const Dataset& d, const std::vector<std::string>& keep) {
  Dataset out;
  out.provenance = d.provenance;
  for (const auto& id : keep) {
    auto it = d.users.find(id);
    if (it == d.users.end()) throw PreconditionError("unknown user '" + id + "'");
    out.users[id] = it->second;
  }
  return out;
}

Dataset filter_sessions(const Dataset& d, int min_ordinal, int max_ordinal) {
  Dataset out;
  out.provenance = d.provenance;
  for (const auto& [user, sessions] : d.users) {
    std::vector<SessionRecord> kept;
    for (const auto& s : sessions)
      if (s.ordinal >= min_ordinal && s.ordinal <= max_ordinal) kept.push_back(s);
    if (kept.empty()) continue;
    for (std::size_t i = 0; i < kept.size(); ++i) kept[i].ordinal = static_cast<int>(i);
    out.users[user] = std::move(kept);
  }
  return out;
}

}  // namespace touchbench
