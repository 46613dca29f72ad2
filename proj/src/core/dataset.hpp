// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef TOUCHBENCH_CORE_DATASET_HPP_
#define TOUCHBENCH_CORE_DATASET_HPP_

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "core/rng.hpp"
#include "core/types.hpp"

namespace touchbench {

// `model_name,width_px,height_px,diagonal_in,ppi`
std::vector<DeviceSpec> load_device_catalog(const std::string& path);
std::vector<DeviceSpec> read_device_catalog(std::istream& in, const std::string& origin);
void write_device_catalog(const std::vector<DeviceSpec>& catalog, const std::string& path);

// The twelve devices of the published collection, usable without a catalog file.
std::vector<DeviceSpec> builtin_device_catalog();

struct IngestReport {
  std::size_t rows = 0;
  std::size_t points = 0;
  std::vector<std::string> warnings;
};

// Reads the touch-event CSV (header:
// `user_id,session_id,device_model,task,timestamp_ms,x_px,y_px,pressure,area,action`).
// Throws DataError on malformed rows or unknown device models. Points are
// grouped by (user, session); session ordinals are assigned by minimum
// timestamp per session; points within a session are stably time-sorted.
Dataset ingest(const std::string& path, const std::vector<DeviceSpec>& catalog,
               IngestReport* report = nullptr);
Dataset ingest_stream(std::istream& in, const std::vector<DeviceSpec>& catalog,
                      const std::string& origin, IngestReport* report = nullptr);

void write_csv(const Dataset& d, const std::string& path);
void write_csv_stream(const Dataset& d, std::ostream& out);

// One partition per device model; a user active on several devices appears
// in each partition with that device's sessions only (ordinals reassigned
// contiguously within the partition).
std::map<std::string, Dataset> partition_by_device(const Dataset& d);

// Exactly n users drawn uniformly without replacement. Throws
// PreconditionError("NotEnoughUsers...") when n exceeds the user count.
Dataset subsample_users(const Dataset& d, std::size_t n, Rng& rng);

// Restriction helpers used by the experiment variants.
Dataset filter_users(const Dataset& d, const std::vector<std::string>& keep);
Dataset filter_sessions(const Dataset& d, int min_ordinal, int max_ordinal);  // inclusive range

}  // namespace touchbench

#endif  // TOUCHBENCH_CORE_DATASET_HPP_
