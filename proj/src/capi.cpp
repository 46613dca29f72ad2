// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "touchbench.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "core/config.hpp"
#include "core/dataset.hpp"
#include "core/error.hpp"
#include "core/runio.hpp"
#include "core/synthgen.hpp"

namespace {

thread_local std::string g_last_error;

struct DatasetHandle {
  touchbench::Dataset data;
  touchbench::IngestReport report;
};

tb_status set_error(int code, const std::string& msg) {
  g_last_error = msg;
  switch (code) {
    case 1: return TB_USAGE_ERROR;
    case 2: return TB_DATA_ERROR;
    case 3: return TB_PRECONDITION_ERROR;
    default: return TB_INTERNAL_ERROR;
  }
}

template <typename Fn>
tb_status guarded(Fn&& fn) {
  try {
    fn();
    return TB_OK;
  } catch (const touchbench::Error& e) {
    return set_error(e.code(), e.what());
  } catch (const std::exception& e) {
    return set_error(0, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const touchbench::Dataset& deref(const tb_dataset* d) {
  if (!d) throw touchbench::UsageError("null dataset handle");
  return reinterpret_cast<const DatasetHandle*>(d)->data;
}

}  // namespace

extern "C" {

const char* tb_version(void) { return touchbench::tool_version(); }

const char* tb_last_error(void) { return g_last_error.c_str(); }

void tb_string_free(char* s) { std::free(s); }

tb_status tb_dataset_open(const char* csv_path, const char* catalog_path, tb_dataset** out) {
  return guarded([&] {
    if (!csv_path || !out) throw touchbench::UsageError("null argument");
    auto* h = new DatasetHandle;
    try {
      const auto catalog = catalog_path ? touchbench::load_device_catalog(catalog_path)
                                        : touchbench::builtin_device_catalog();
      h->data = touchbench::ingest(csv_path, catalog, &h->report);
    } catch (...) {
      delete h;
      throw;
    }
    *out = reinterpret_cast<tb_dataset*>(h);
  });
}

tb_status tb_dataset_from_synth(const char* config_text, tb_dataset** out) {
  return guarded([&] {
    if (!out) throw touchbench::UsageError("null argument");
    const touchbench::SynthConfig cfg =
        touchbench::synth_from_config_text(config_text ? config_text : "");
    auto* h = new DatasetHandle;
    try {
      h->data = touchbench::generate(cfg);
    } catch (...) {
      delete h;
      throw;
    }
    *out = reinterpret_cast<tb_dataset*>(h);
  });
}

tb_status tb_dataset_save(const tb_dataset* d, const char* csv_path) {
  return guarded([&] {
    if (!csv_path) throw touchbench::UsageError("null argument");
    touchbench::write_csv(deref(d), csv_path);
  });
}

tb_status tb_dataset_validate_info(const tb_dataset* d, char** json_out) {
  return guarded([&] {
    if (!json_out) throw touchbench::UsageError("null argument");
    const auto* h = reinterpret_cast<const DatasetHandle*>(d);
    if (!h) throw touchbench::UsageError("null dataset handle");
    nlohmann::ordered_json j;
    j["users"] = h->data.user_count();
    j["sessions"] = h->data.session_count();
    j["points"] = h->data.point_count();
    j["warnings"] = h->report.warnings;
    *json_out = dup_string(j.dump());
  });
}

void tb_dataset_free(tb_dataset* d) { delete reinterpret_cast<DatasetHandle*>(d); }

tb_status tb_features_dump(const tb_dataset* d, const char* csv_path) {
  return guarded([&] {
    if (!csv_path) throw touchbench::UsageError("null argument");
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw touchbench::DataError(std::string("cannot write ") + csv_path);
    touchbench::dump_features_csv(deref(d), out);
    if (!out.flush()) throw touchbench::DataError(std::string("write failed: ") + csv_path);
  });
}

tb_status tb_run(const tb_dataset* d, const char* spec_text, const char* out_dir,
                 unsigned jobs, const char* command) {
  return guarded([&] {
    if (!out_dir) throw touchbench::UsageError("null argument");
    if (jobs == 0) throw touchbench::UsageError("jobs must be >= 1");
    const touchbench::ExperimentSpec spec =
        touchbench::spec_from_config_text(spec_text ? spec_text : "");
    touchbench::run_to_dir(deref(d), spec, out_dir, jobs, command ? command : "");
  });
}

tb_status tb_report(const char* results_jsonl_path, const char* out_dir) {
  return guarded([&] {
    if (!results_jsonl_path || !out_dir) throw touchbench::UsageError("null argument");
    touchbench::report_to_dir(results_jsonl_path, out_dir);
  });
}

tb_status tb_print_spec_config(const char* spec_text, char** text_out) {
  return guarded([&] {
    if (!text_out) throw touchbench::UsageError("null argument");
    const touchbench::ExperimentSpec spec = touchbench::with_defaults(
        touchbench::spec_from_config_text(spec_text ? spec_text : ""));
    *text_out = dup_string(touchbench::print_spec_config(spec));
  });
}

tb_status tb_print_synth_config(const char* config_text, char** text_out) {
  return guarded([&] {
    if (!text_out) throw touchbench::UsageError("null argument");
    const touchbench::SynthConfig cfg =
        touchbench::synth_from_config_text(config_text ? config_text : "");
    *text_out = dup_string(touchbench::print_synth_config(cfg));
  });
}

}  // extern "C"
