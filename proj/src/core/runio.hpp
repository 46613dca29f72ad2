// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef TOUCHBENCH_CORE_RUNIO_HPP_
#define TOUCHBENCH_CORE_RUNIO_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>

#include "core/dataset.hpp"
#include "core/experiments.hpp"

namespace touchbench {

const char* tool_version();

// FNV-1a over the canonical CSV serialization.
std::uint64_t dataset_hash(const Dataset& d);

// Executes a spec into out_dir. manifest.json is written before any
// computation and pins everything needed for an exact rerun; results.jsonl
// carries the records and contains no timing, so reruns are byte-identical
// whatever the job count. Wall time lands in stats.json.
struct RunOutputs {
  std::string manifest_path;
  std::string results_path;
  std::string stats_path;
};
RunOutputs run_to_dir(const Dataset& data, const ExperimentSpec& spec,
                      const std::string& out_dir, std::size_t jobs,
                      const std::string& command);

// results.jsonl -> summary.csv (long format: variant,record,params,metric,
// value) and roc.csv (fpr,tpr_mean,tpr_ci_low,tpr_ci_high) when a ROC
// record is present.
void report_to_dir(const std::string& results_path, const std::string& out_dir);

// Per-stroke feature matrix, all directions, frozen column order.
void dump_features_csv(const Dataset& d, std::ostream& out);

}  // namespace touchbench

#endif  // TOUCHBENCH_CORE_RUNIO_HPP_
