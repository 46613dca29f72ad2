// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "core/config.hpp"

#include <cstdlib>
#include <sstream>
#include <vector>

#include "core/dataset.hpp"
#include "core/error.hpp"

namespace touchbench {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw UsageError("config key '" + key + "': not a number: '" + v + "'");
  return x;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    throw UsageError("config key '" + key + "': not an integer: '" + v + "'");
  return x;
}

std::size_t to_size(const std::string& key, const std::string& v) {
  return static_cast<std::size_t>(to_u64(key, v));
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::size_t> to_size_list(const std::string& key, const std::string& v) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(v)) out.push_back(to_size(key, item));
  return out;
}

template <typename T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ",";
    os << v[i];
  }
  return os.str();
}

}  // namespace

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  std::size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(ln) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw UsageError("config line " + std::to_string(ln) + ": empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

void apply_spec_config(const std::map<std::string, std::string>& kv, ExperimentSpec& spec) {
  for (const auto& [key, v] : kv) {
    if (key == "variant") spec.variant = variant_from_string(v);
    else if (key == "split") spec.base.split_strategy = split_strategy_from_string(v);
    else if (key == "attacker") spec.base.attacker_mode = attacker_mode_from_string(v);
    else if (key == "f_train") spec.base.f_train = to_double(key, v);
    else if (key == "aggregation_window") spec.base.aggregation_window = to_size(key, v);
    else if (key == "direction") spec.base.direction_filter = direction_from_string(v);
    else if (key == "classifier") spec.base.classifier = classifier_from_string(v);
    else if (key == "svm_c") spec.base.hp.svm.c = to_double(key, v);
    else if (key == "svm_gamma") spec.base.hp.svm.gamma = to_double(key, v);
    else if (key == "knn_k") spec.base.hp.knn_k = to_size(key, v);
    else if (key == "forest_trees") spec.base.hp.forest.n_trees = to_size(key, v);
    else if (key == "forest_max_features") spec.base.hp.forest.max_features = to_size(key, v);
    else if (key == "mlp_epochs") spec.base.hp.mlp.epochs = to_size(key, v);
    else if (key == "mlp_learning_rate") spec.base.hp.mlp.learning_rate = to_double(key, v);
    else if (key == "mlp_batch_size") spec.base.hp.mlp.batch_size = to_size(key, v);
    else if (key == "mlp_dropout") spec.base.hp.mlp.dropout = to_double(key, v);
    else if (key == "n_grid") spec.n_grid = to_size_list(key, v);
    else if (key == "s_grid") spec.s_grid = to_size_list(key, v);
    else if (key == "w_grid") spec.w_grid = to_size_list(key, v);
    else if (key == "reps") spec.reps = to_size(key, v);
    else if (key == "window") spec.window = to_size(key, v);
    else if (key == "full_session_count") spec.full_session_count = to_size(key, v);
    else if (key == "identify_max_rows_per_class")
      spec.identify_max_rows_per_class = to_size(key, v);
    else if (key == "seed") spec.seed = to_u64(key, v);
    else throw UsageError("unknown config key '" + key + "'");
  }
}

void apply_synth_config(const std::map<std::string, std::string>& kv, SynthConfig& cfg) {
  for (const auto& [key, v] : kv) {
    if (key == "users") cfg.n_users = to_size(key, v);
    else if (key == "sessions_per_user") cfg.sessions_per_user = to_size(key, v);
    else if (key == "strokes_per_session") cfg.strokes_per_session = to_size(key, v);
    else if (key == "devices") {
      cfg.devices.clear();
      const auto catalog = builtin_device_catalog();
      for (const auto& name : split_list(v)) {
        bool found = false;
        for (const auto& d : catalog)
          if (d.model_name == name) {
            cfg.devices.push_back(d);
            found = true;
            break;
          }
        if (!found) throw UsageError("devices: unknown model '" + name + "'");
      }
    } else if (key == "delta_dev") cfg.delta_dev = to_double(key, v);
    else if (key == "sigma_between") cfg.sigma_between = to_double(key, v);
    else if (key == "sigma_within") cfg.sigma_within = to_double(key, v);
    else if (key == "sigma_sess") cfg.sigma_sess = to_double(key, v);
    else if (key == "sampling_rate_hz") cfg.sampling_rate_hz = to_double(key, v);
    else if (key == "seed") cfg.seed = to_u64(key, v);
    else throw UsageError("unknown config key '" + key + "'");
  }
}

std::string print_spec_config(const ExperimentSpec& spec) {
  std::ostringstream os;
  os << "variant=" << to_string(spec.variant) << "\n";
  os << "split=" << to_string(spec.base.split_strategy) << "\n";
  os << "attacker=" << to_string(spec.base.attacker_mode) << "\n";
  os << "f_train=" << spec.base.f_train << "\n";
  os << "aggregation_window=" << spec.base.aggregation_window << "\n";
  os << "direction=" << to_string(spec.base.direction_filter) << "\n";
  os << "classifier=" << to_string(spec.base.classifier) << "\n";
  os << "svm_c=" << spec.base.hp.svm.c << "\n";
  os << "svm_gamma=" << spec.base.hp.svm.gamma << "\n";
  os << "knn_k=" << spec.base.hp.knn_k << "\n";
  os << "forest_trees=" << spec.base.hp.forest.n_trees << "\n";
  os << "forest_max_features=" << spec.base.hp.forest.max_features << "\n";
  os << "mlp_epochs=" << spec.base.hp.mlp.epochs << "\n";
  os << "mlp_learning_rate=" << spec.base.hp.mlp.learning_rate << "\n";
  os << "mlp_batch_size=" << spec.base.hp.mlp.batch_size << "\n";
  os << "mlp_dropout=" << spec.base.hp.mlp.dropout << "\n";
  os << "n_grid=" << join(spec.n_grid) << "\n";
  os << "s_grid=" << join(spec.s_grid) << "\n";
  os << "w_grid=" << join(spec.w_grid) << "\n";
  os << "reps=" << spec.reps << "\n";
  os << "window=" << spec.window << "\n";
  os << "full_session_count=" << spec.full_session_count << "\n";
  os << "identify_max_rows_per_class=" << spec.identify_max_rows_per_class << "\n";
  os << "seed=" << spec.seed << "\n";
  return os.str();
}

std::string print_synth_config(const SynthConfig& cfg) {
  std::vector<std::string> names;
  for (const auto& d : cfg.devices) names.push_back(d.model_name);
  std::ostringstream os;
  os << "users=" << cfg.n_users << "\n";
  os << "sessions_per_user=" << cfg.sessions_per_user << "\n";
  os << "strokes_per_session=" << cfg.strokes_per_session << "\n";
  os << "devices=" << join(names) << "\n";
  os << "delta_dev=" << cfg.delta_dev << "\n";
  os << "sigma_between=" << cfg.sigma_between << "\n";
  os << "sigma_within=" << cfg.sigma_within << "\n";
  os << "sigma_sess=" << cfg.sigma_sess << "\n";
  os << "sampling_rate_hz=" << cfg.sampling_rate_hz << "\n";
  os << "seed=" << cfg.seed << "\n";
  return os.str();
}

ExperimentSpec spec_from_config_text(const std::string& text) {
  ExperimentSpec spec;
  apply_spec_config(parse_config_text(text), spec);
  return spec;
}

SynthConfig synth_from_config_text(const std::string& text) {
  SynthConfig cfg;
  apply_synth_config(parse_config_text(text), cfg);
  return cfg;
}

}  // namespace touchbench
