// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef TOUCHBENCH_CORE_PROTOCOL_HPP_
#define TOUCHBENCH_CORE_PROTOCOL_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/classify.hpp"
#include "core/dataset.hpp"
#include "core/features.hpp"
#include "core/metrics.hpp"
#include "core/preprocess.hpp"
#include "core/rng.hpp"
#include "core/types.hpp"

namespace touchbench {

enum class SplitStrategy {
  kRandom,
  kContiguous,
  kDedicatedSessionsContig,
  kDedicatedSessionsRandom,
  kIntraSession,
};

enum class AttackerMode { kExcludeAtk, kIncludeAtk };

const char* to_string(SplitStrategy s);
const char* to_string(AttackerMode m);
SplitStrategy split_strategy_from_string(const std::string& s);
AttackerMode attacker_mode_from_string(const std::string& s);

struct ProtocolConfig {
  SplitStrategy split_strategy = SplitStrategy::kContiguous;
  AttackerMode attacker_mode = AttackerMode::kExcludeAtk;
  double f_train = 0.8;
  std::size_t aggregation_window = 1;
  Direction direction_filter = Direction::kLeft;
  ClassifierKind classifier = ClassifierKind::kSvmRbf;
  Hyperparams hp;
  std::uint64_t seed = 0;
};

// Feature rows of one user's direction-filtered strokes, chronological.
struct UserData {
  std::string user_id;
  Matrix features;
  std::vector<int> session_of;            // session ordinal per row
  std::vector<std::int64_t> start_ts_of;  // stroke start timestamp per row
};

// Preprocess + extract for every user; strokes not matching `dir` are
// dropped, inter-stroke time resets at session boundaries.
std::vector<UserData> build_user_data(const Dataset& d, Direction dir);

struct SplitIndices {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
};

// Train/test row split for one user. Rows must be chronological; DEDICATED
// strategies need >= 2 sessions; INTRA operates on the longest session and
// confines both sides to it.
SplitIndices split_strokes(const std::vector<int>& session_of, SplitStrategy strategy,
                           double f_train, Rng& rng);

struct PlanEntry {
  std::vector<std::string> pool;       // negative-pool users (U1 / co-half)
  std::vector<std::string> attackers;  // scored as impostors (U2 / co-half)
};

struct AttackerPlan {
  std::map<std::string, PlanEntry> entries;  // per target user
};

// EXCLUDE: per target, the remaining users are split into U1 (training
// negatives) and U2 (test attackers), sizes differing by at most one.
// INCLUDE: the full pool is halved once; a target's negatives and test
// attackers are both its co-half members.
AttackerPlan plan_attackers(const std::vector<std::string>& users, AttackerMode mode, Rng& rng);

// Negative rows for one target: total equals the positive count, spread
// evenly over the pool (floor quota + remainder to random distinct pool
// users; shortfalls redistribute to users with spare rows).
// pool_rows maps pool user id -> rows available for negatives.
TrainSet assemble_training(const Matrix& target_train_rows,
                           const std::map<std::string, const Matrix*>& pool_rows, Rng& rng);

// Non-overlapping means of w consecutive scores; trailing remainder dropped.
std::vector<double> aggregate(const std::vector<double>& scores, std::size_t w);

struct UserEval {
  std::string user_id;
  std::vector<double> genuine_scores;                // aggregated
  std::vector<std::vector<double>> impostor_scores;  // aggregated, per attacker
  std::vector<double> impostor_flat() const;
  double eer_value = 0.0;
  double eer_threshold = 0.0;
  // Raw (pre-aggregation) score sequences.
  std::vector<double> raw_genuine;
  std::vector<std::vector<double>> raw_impostor;
  // Filled on request: scores of the model on its own training rows.
  std::vector<double> train_genuine;
  std::vector<double> train_impostor;
};

struct EvalOptions {
  bool want_train_scores = false;
};

// Full per-target pipeline: split -> assemble -> scale -> train -> score ->
// aggregate -> EER. The RNG stream is derived from cfg.seed and the target
// id, so evaluations are schedule independent.
UserEval evaluate_user(const std::string& target,
                       const std::map<std::string, const UserData*>& data,
                       const ProtocolConfig& cfg, const AttackerPlan& plan,
                       const EvalOptions& opts = {});

struct EvalRun {
  std::vector<UserEval> users;
  EerSummary summary;
};

// Evaluates every planned target; `jobs` controls worker threads, results
// are independent of the thread count.
EvalRun evaluate_all(const std::vector<UserData>& data, const ProtocolConfig& cfg,
                     std::size_t jobs = 1, const EvalOptions& opts = {});

}  // namespace touchbench

#endif  // TOUCHBENCH_CORE_PROTOCOL_HPP_
