// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "core/runio.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "core/config.hpp"
#include "core/error.hpp"
#include "core/features.hpp"
#include "core/preprocess.hpp"
#include "core/rng.hpp"

namespace touchbench {

using nlohmann::ordered_json;

const char* tool_version() { return "0.1.0"; }

std::uint64_t dataset_hash(const Dataset& d) {
  std::ostringstream os;
  write_csv_stream(d, os);
  return fnv1a64(os.str());
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << content;
  if (!out.flush()) throw DataError("write failed: " + path);
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// `k=v;k=v` rendering of a flat params object.
std::string params_key(const ordered_json& params) {
  std::string out;
  for (auto it = params.begin(); it != params.end(); ++it) {
    if (!out.empty()) out += ";";
    out += it.key() + "=";
    if (it->is_string()) out += it->get<std::string>();
    else out += it->dump();
  }
  return out;
}

void flatten_scalars(const ordered_json& j, const std::string& prefix,
                     std::vector<std::pair<std::string, double>>& out) {
  if (j.is_number()) {
    out.emplace_back(prefix, j.get<double>());
  } else if (j.is_boolean()) {
    out.emplace_back(prefix, j.get<bool>() ? 1.0 : 0.0);
  } else if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten_scalars(*it, prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  }
  // Arrays and strings are left to the JSONL; the CSV is for scalar summaries.
}

}  // namespace

RunOutputs run_to_dir(const Dataset& data, const ExperimentSpec& raw_spec,
                      const std::string& out_dir, std::size_t jobs,
                      const std::string& command) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw DataError("cannot create output directory " + out_dir);

  const ExperimentSpec spec = with_defaults(raw_spec);
  RunOutputs paths;
  paths.manifest_path = (fs::path(out_dir) / "manifest.json").string();
  paths.results_path = (fs::path(out_dir) / "results.jsonl").string();
  paths.stats_path = (fs::path(out_dir) / "stats.json").string();

  ordered_json manifest;
  manifest["schema_version"] = 1;
  manifest["tool_version"] = tool_version();
  manifest["command"] = command;
  manifest["seed"] = spec.seed;
  manifest["config"] = print_spec_config(spec);
  manifest["input"] = ordered_json{{"dataset_hash", hex64(dataset_hash(data))},
                                   {"users", data.user_count()},
                                   {"sessions", data.session_count()},
                                   {"points", data.point_count()}};
  manifest["outputs"] = ordered_json::array({"results.jsonl"});
  write_file(paths.manifest_path, manifest.dump(2) + "\n");

  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<ResultRecord> records = run(spec, data, jobs);
  const auto t1 = std::chrono::steady_clock::now();

  std::ostringstream rs;
  write_jsonl(records, rs);
  write_file(paths.results_path, rs.str());

  ordered_json stats;
  stats["wall_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  stats["jobs"] = jobs;
  write_file(paths.stats_path, stats.dump(2) + "\n");
  return paths;
}

void report_to_dir(const std::string& results_path, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::ifstream in(results_path, std::ios::binary);
  if (!in) throw DataError("cannot read " + results_path);
  const std::vector<ResultRecord> records = read_jsonl(in);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw DataError("cannot create output directory " + out_dir);

  std::ostringstream sum;
  sum << "variant,record,params,metric,value\n";
  std::optional<ordered_json> roc_payload;
  for (const auto& r : records) {
    const std::string variant = r.value("variant", std::string("?"));
    const std::string kind = r.value("record", std::string("?"));
    if (kind == "roc" && !roc_payload) roc_payload = r.at("payload");
    std::vector<std::pair<std::string, double>> scalars;
    if (r.contains("payload")) flatten_scalars(r.at("payload"), "", scalars);
    const std::string pk = r.contains("params") ? params_key(r.at("params")) : "";
    for (const auto& [metric, value] : scalars)
      sum << variant << "," << kind << "," << pk << "," << metric << ","
          << fmt_double(value) << "\n";
  }
  write_file((fs::path(out_dir) / "summary.csv").string(), sum.str());

  if (roc_payload) {
    const auto& p = *roc_payload;
    const auto& fpr = p.at("fpr");
    const auto& tm = p.at("tpr_mean");
    const auto& lo = p.at("tpr_ci_low");
    const auto& hi = p.at("tpr_ci_high");
    std::ostringstream os;
    os << "fpr,tpr_mean,tpr_ci_low,tpr_ci_high\n";
    for (std::size_t i = 0; i < fpr.size(); ++i)
      os << fmt_double(fpr[i].get<double>()) << "," << fmt_double(tm[i].get<double>()) << ","
         << fmt_double(lo[i].get<double>()) << "," << fmt_double(hi[i].get<double>()) << "\n";
    write_file((fs::path(out_dir) / "roc.csv").string(), os.str());
  }
}

void dump_features_csv(const Dataset& d, std::ostream& out) {
  out << "user_id,session_ordinal,stroke_start_ms,direction";
  for (const char* name : kFeatureNames) out << "," << name;
  out << "\n";
  for (const auto& pu : preprocess_dataset(d)) {
    std::optional<std::int64_t> prev_end;
    int prev_session = -1;
    for (const auto& s : pu.strokes) {
      if (s.session_ordinal != prev_session) {
        prev_end.reset();
        prev_session = s.session_ordinal;
      }
      const FeatureVector f = extract(s, prev_end);
      prev_end = s.points.back().timestamp_ms;
      out << pu.user_id << "," << s.session_ordinal << "," << s.points.front().timestamp_ms
          << "," << to_string(s.direction);
      for (double v : f) out << "," << fmt_double(v);
      out << "\n";
    }
  }
}

}  // namespace touchbench
