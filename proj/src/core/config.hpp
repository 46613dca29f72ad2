// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef TOUCHBENCH_CORE_CONFIG_HPP_
#define TOUCHBENCH_CORE_CONFIG_HPP_

#include <map>
#include <string>

#include "core/experiments.hpp"
#include "core/synthgen.hpp"

namespace touchbench {

// Flat `key=value` configuration, one pair per line, '#' comments. The key
// set is frozen; unknown keys are usage errors so typos cannot silently
// fall back to defaults.
std::map<std::string, std::string> parse_config_text(const std::string& text);

// Applies pairs on top of the given spec (later callers may apply CLI
// overrides the same way).
void apply_spec_config(const std::map<std::string, std::string>& kv, ExperimentSpec& spec);
void apply_synth_config(const std::map<std::string, std::string>& kv, SynthConfig& cfg);

// Every knob with its effective value, parseable by parse_config_text.
std::string print_spec_config(const ExperimentSpec& spec);
std::string print_synth_config(const SynthConfig& cfg);

ExperimentSpec spec_from_config_text(const std::string& text);
SynthConfig synth_from_config_text(const std::string& text);

}  // namespace touchbench

#endif  // TOUCHBENCH_CORE_CONFIG_HPP_
