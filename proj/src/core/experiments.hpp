// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef TOUCHBENCH_CORE_EXPERIMENTS_HPP_
#define TOUCHBENCH_CORE_EXPERIMENTS_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/dataset.hpp"
#include "core/protocol.hpp"

namespace touchbench {

enum class Variant {
  kBaseline,
  kP1SampleSize,
  kP1Sessions,
  kP2DeviceMixing,
  kP2DeviceIdentify,
  kP3Splits,
  kP4Attacker,
  kP5Aggregation,
  kCumulative,
  kThresholdTransfer,
  kPartialWindow,
};

const char* to_string(Variant v);
Variant variant_from_string(const std::string& s);
std::vector<std::string> variant_names();

// A named analysis over one dataset. Grids and rep counts left at zero or
// empty are filled with desk-scale defaults by with_defaults(); full-scale
// runs are configuration, not code.
struct ExperimentSpec {
  Variant variant = Variant::kBaseline;
  ProtocolConfig base;
  std::vector<std::size_t> n_grid;  // user-subsample sizes (P1, P4, CUMULATIVE)
  std::vector<std::size_t> s_grid;  // session counts (P1_SESSIONS)
  std::vector<std::size_t> w_grid;  // aggregation windows (P5)
  std::size_t reps = 0;
  std::size_t window = 10;                      // PARTIAL_WINDOW size
  std::size_t full_session_count = 0;           // P1_SESSIONS; 0 = max observed
  std::size_t identify_max_rows_per_class = 300;  // P2_IDENTIFY training cap
  std::uint64_t seed = 0;
};

ExperimentSpec with_defaults(ExperimentSpec spec);

// One JSON-lines record. Fields: schema_version, variant, record (the
// record kind within the variant), seed, params, payload. Wall time is
// deliberately absent so reruns are byte-identical.
using ResultRecord = nlohmann::ordered_json;

// Executes the variant; one record per parameter tuple (aggregated over
// reps), plus variant-specific extra records. `jobs` threads the per-user
// evaluations; output is independent of the worker count.
std::vector<ResultRecord> run(const ExperimentSpec& spec, const Dataset& data,
                              std::size_t jobs = 1);

void write_jsonl(const std::vector<ResultRecord>& records, std::ostream& out);
std::vector<ResultRecord> read_jsonl(std::istream& in);

}  // namespace touchbench

#endif  // TOUCHBENCH_CORE_EXPERIMENTS_HPP_
