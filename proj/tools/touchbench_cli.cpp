// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

// Command-line front end. Talks to the core library exclusively through the
// C API in touchbench.h; every error surfaces as exit code 1 (usage),
// 2 (data) or 3 (precondition).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "touchbench.h"

namespace {

int fail(tb_status st) {
  std::cerr << "error: " << tb_last_error() << "\n";
  return static_cast<int>(st);
}

std::string read_file_or_die(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read config file " << path << "\n";
    std::exit(2);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Config text layering: file first, then explicit flag overrides; the last
// occurrence of a key wins.
struct ConfigText {
  std::string text;

  void add_file(const std::string& path) {
    if (!path.empty()) text += read_file_or_die(path) + "\n";
  }
  void add(const std::string& key, const std::string& value) {
    text += key + "=" + value + "\n";
  }
};

std::string join_argv(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out += " ";
    out += argv[i];
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"touch-dynamics authentication evaluation harness"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tb_version()));

  // ingest / validate
  std::string in_csv, catalog, out_path;
  auto* ingest = app.add_subcommand("ingest", "read raw CSV, write canonical CSV");
  ingest->add_option("input", in_csv, "touch-event CSV")->required();
  ingest->add_option("--catalog", catalog, "device catalog CSV (default: built-in)");
  ingest->add_option("-o,--output", out_path, "canonical CSV output")->required();

  std::string v_csv, v_catalog;
  auto* validate = app.add_subcommand("validate", "check a CSV and print counts");
  validate->add_option("input", v_csv, "touch-event CSV")->required();
  validate->add_option("--catalog", v_catalog, "device catalog CSV (default: built-in)");

  // synth
  std::string sy_config, sy_out;
  bool sy_print = false;
  std::vector<std::pair<std::string, std::string>> sy_over;
  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  synth->add_option("--config", sy_config, "key=value config file");
  synth->add_option("-o,--output", sy_out, "output CSV");
  synth->add_flag("--print-config", sy_print, "print the effective config and exit");
  auto add_sy = [&](const char* flag, const char* key, const char* help) {
    synth
        ->add_option_function<std::string>(
            flag, [&sy_over, key](const std::string& v) { sy_over.emplace_back(key, v); },
            help)
        ->expected(1);
  };
  add_sy("--users", "users", "number of users");
  add_sy("--sessions", "sessions_per_user", "sessions per user");
  add_sy("--strokes", "strokes_per_session", "strokes per session");
  add_sy("--devices", "devices", "comma-separated device models");
  add_sy("--delta-dev", "delta_dev", "device offset scale");
  add_sy("--sigma-between", "sigma_between", "between-user spread");
  add_sy("--sigma-within", "sigma_within", "within-user spread");
  add_sy("--sigma-sess", "sigma_sess", "session drift");
  add_sy("--rate", "sampling_rate_hz", "sampling rate in Hz");
  add_sy("--seed", "seed", "generator seed");

  // features
  std::string f_csv, f_catalog, f_out;
  auto* features = app.add_subcommand("features", "dump the per-stroke feature matrix");
  features->add_option("input", f_csv, "touch-event CSV")->required();
  features->add_option("--catalog", f_catalog, "device catalog CSV (default: built-in)");
  features->add_option("-o,--output", f_out, "feature CSV output")->required();

  // run
  std::string r_variant, r_data, r_catalog, r_config, r_out;
  unsigned r_jobs = 1;
  bool r_print = false;
  std::vector<std::pair<std::string, std::string>> r_over;
  auto* runc = app.add_subcommand("run", "execute an experiment variant");
  runc->add_option("variant", r_variant, "experiment variant name")->required();
  runc->add_option("--data", r_data, "touch-event CSV");
  runc->add_option("--catalog", r_catalog, "device catalog CSV (default: built-in)");
  runc->add_option("--config", r_config, "key=value config file");
  runc->add_option("-o,--out", r_out, "output directory");
  runc->add_option("-j,--jobs", r_jobs, "worker threads")->check(CLI::PositiveNumber);
  runc->add_flag("--print-config", r_print, "print the effective config and exit");
  auto add_r = [&](const char* flag, const char* key, const char* help) {
    runc->add_option_function<std::string>(
            flag, [&r_over, key](const std::string& v) { r_over.emplace_back(key, v); },
            help)
        ->expected(1);
  };
  add_r("--split", "split", "train/test split strategy");
  add_r("--attacker", "attacker", "attacker mode (exclude|include)");
  add_r("--f-train", "f_train", "training fraction");
  add_r("--aggregation-window", "aggregation_window", "score aggregation window");
  add_r("--direction", "direction", "swipe direction filter");
  add_r("--classifier", "classifier", "svm|forest|mlp|knn");
  add_r("--reps", "reps", "repetitions per parameter tuple");
  add_r("--n-grid", "n_grid", "comma-separated user-sample sizes");
  add_r("--s-grid", "s_grid", "comma-separated session counts");
  add_r("--w-grid", "w_grid", "comma-separated aggregation windows");
  add_r("--window", "window", "partial-window size");
  add_r("--seed", "seed", "experiment seed");

  // report
  std::string rp_results, rp_out;
  auto* report = app.add_subcommand("report", "results.jsonl to CSV tables");
  report->add_option("results", rp_results, "results.jsonl path")->required();
  report->add_option("-o,--out", rp_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (*ingest || *validate) {
    const bool save = ingest->parsed();
    const std::string& csv = save ? in_csv : v_csv;
    const std::string& cat = save ? catalog : v_catalog;
    tb_dataset* d = nullptr;
    tb_status st = tb_dataset_open(csv.c_str(), cat.empty() ? nullptr : cat.c_str(), &d);
    if (st != TB_OK) return fail(st);
    char* info = nullptr;
    st = tb_dataset_validate_info(d, &info);
    if (st == TB_OK) {
      std::cout << info << "\n";
      tb_string_free(info);
      if (save) st = tb_dataset_save(d, out_path.c_str());
    }
    tb_dataset_free(d);
    return st == TB_OK ? 0 : fail(st);
  }

  if (*synth) {
    ConfigText cfg;
    cfg.add_file(sy_config);
    for (const auto& [k, v] : sy_over) cfg.add(k, v);
    if (sy_print) {
      char* text = nullptr;
      const tb_status st = tb_print_synth_config(cfg.text.c_str(), &text);
      if (st != TB_OK) return fail(st);
      std::cout << text;
      tb_string_free(text);
      return 0;
    }
    if (sy_out.empty()) {
      std::cerr << "error: synth needs --output (or --print-config)\n";
      return 1;
    }
    tb_dataset* d = nullptr;
    tb_status st = tb_dataset_from_synth(cfg.text.c_str(), &d);
    if (st != TB_OK) return fail(st);
    st = tb_dataset_save(d, sy_out.c_str());
    tb_dataset_free(d);
    return st == TB_OK ? 0 : fail(st);
  }

  if (*features) {
    tb_dataset* d = nullptr;
    tb_status st =
        tb_dataset_open(f_csv.c_str(), f_catalog.empty() ? nullptr : f_catalog.c_str(), &d);
    if (st != TB_OK) return fail(st);
    st = tb_features_dump(d, f_out.c_str());
    tb_dataset_free(d);
    return st == TB_OK ? 0 : fail(st);
  }

  if (*runc) {
    ConfigText cfg;
    cfg.add_file(r_config);
    cfg.add("variant", r_variant);
    for (const auto& [k, v] : r_over) cfg.add(k, v);
    if (r_print) {
      char* text = nullptr;
      const tb_status st = tb_print_spec_config(cfg.text.c_str(), &text);
      if (st != TB_OK) return fail(st);
      std::cout << text;
      tb_string_free(text);
      return 0;
    }
    if (r_data.empty() || r_out.empty()) {
      std::cerr << "error: run needs --data and --out (or --print-config)\n";
      return 1;
    }
    tb_dataset* d = nullptr;
    tb_status st =
        tb_dataset_open(r_data.c_str(), r_catalog.empty() ? nullptr : r_catalog.c_str(), &d);
    if (st != TB_OK) return fail(st);
    const std::string cmd = join_argv(argc, argv);
    st = tb_run(d, cfg.text.c_str(), r_out.c_str(), r_jobs, cmd.c_str());
    tb_dataset_free(d);
    return st == TB_OK ? 0 : fail(st);
  }

  if (*report) {
    const tb_status st = tb_report(rp_results.c_str(), rp_out.c_str());
    return st == TB_OK ? 0 : fail(st);
  }

  return 1;
}
