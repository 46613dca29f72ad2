// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef TOUCHBENCH_CORE_SYNTHGEN_HPP_
#define TOUCHBENCH_CORE_SYNTHGEN_HPP_

#include <cstdint>
#include <vector>

#include "core/types.hpp"

namespace touchbench {

// Controls for the synthetic touch-data generator. The generator is a test
// instrument: each knob injects one effect (user identity, session drift,
// device offset) so that the evaluation pitfalls are demonstrable on
// desk-scale data.
struct SynthConfig {
  std::size_t n_users = 60;
  std::size_t sessions_per_user = 6;
  std::size_t strokes_per_session = 20;
  std::vector<DeviceSpec> devices;  // empty -> iPhone 7 only
  double delta_dev = 0.0;      // per-device kinematic offset scale
  double sigma_between = 1.0;  // between-user spread of latent behavior
  double sigma_within = 0.3;   // within-user, per-stroke spread
  double sigma_sess = 0.0;     // per-session drift
  double sampling_rate_hz = 60.0;
  std::uint64_t seed = 0;
};

// Latent behavior vector per user, drift offset per session, kinematic
// parameters per stroke, rendered as jittered quadratic curves at the
// sampling rate. Output always passes ingest validation and the tap filter.
Dataset generate(const SynthConfig& cfg);

}  // namespace touchbench

#endif  // TOUCHBENCH_CORE_SYNTHGEN_HPP_
