// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "core/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "core/error.hpp"

namespace touchbench {

const char* to_string(SplitStrategy s) {
  switch (s) {
    case SplitStrategy::kRandom: return "random";
    case SplitStrategy::kContiguous: return "contiguous";
    case SplitStrategy::kDedicatedSessionsContig: return "dedicated_contig";
    case SplitStrategy::kDedicatedSessionsRandom: return "dedicated_random";
    case SplitStrategy::kIntraSession: return "intra_session";
  }
  return "?";
}

const char* to_string(AttackerMode m) {
  return m == AttackerMode::kExcludeAtk ? "exclude" : "include";
}

SplitStrategy split_strategy_from_string(const std::string& s) {
  if (s == "random") return SplitStrategy::kRandom;
  if (s == "contiguous") return SplitStrategy::kContiguous;
  if (s == "dedicated_contig") return SplitStrategy::kDedicatedSessionsContig;
  if (s == "dedicated_random") return SplitStrategy::kDedicatedSessionsRandom;
  if (s == "intra_session") return SplitStrategy::kIntraSession;
  throw UsageError("unknown split strategy '" + s +
                   "' (random|contiguous|dedicated_contig|dedicated_random|intra_session)");
}

AttackerMode attacker_mode_from_string(const std::string& s) {
  if (s == "exclude") return AttackerMode::kExcludeAtk;
  if (s == "include") return AttackerMode::kIncludeAtk;
  throw UsageError("unknown attacker mode '" + s + "' (exclude|include)");
}

std::vector<UserData> build_user_data(const Dataset& d, Direction dir) {
  std::vector<UserData> out;
  for (const auto& pu : preprocess_dataset(d)) {
    UserData ud;
    ud.user_id = pu.user_id;
    std::optional<std::int64_t> prev_end;
    int prev_session = -1;
    for (const auto& s : pu.strokes) {
      if (s.session_ordinal != prev_session) {
        prev_end.reset();  // inter-stroke time resets at session boundaries
        prev_session = s.session_ordinal;
      }
      FeatureVector f = extract(s, prev_end);
      prev_end = s.points.back().timestamp_ms;
      if (s.direction != dir) continue;
      ud.features.emplace_back(f.begin(), f.end());
      ud.session_of.push_back(s.session_ordinal);
      ud.start_ts_of.push_back(s.points.front().timestamp_ms);
    }
    out.push_back(std::move(ud));
  }
  return out;
}

SplitIndices split_strokes(const std::vector<int>& session_of, SplitStrategy strategy,
                           double f_train, Rng& rng) {
  const std::size_t n = session_of.size();
  if (n < 2) throw PreconditionError("TooFewStrokes: need at least 2, have " + std::to_string(n));
  if (f_train <= 0.0 || f_train >= 1.0) throw UsageError("f_train must be in (0,1)");

  SplitIndices out;
  const std::size_t n_train =
      std::max<std::size_t>(1, static_cast<std::size_t>(static_cast<double>(n) * f_train));

  switch (strategy) {
    case SplitStrategy::kRandom: {
      auto picks = rng.sample_indices(n, std::min(n_train, n - 1));
      std::vector<bool> is_train(n, false);
      for (std::size_t i : picks) is_train[i] = true;
      for (std::size_t i = 0; i < n; ++i) (is_train[i] ? out.train : out.test).push_back(i);
      break;
    }
    case SplitStrategy::kContiguous: {
      const std::size_t cut = std::min(n_train, n - 1);
      for (std::size_t i = 0; i < n; ++i) (i < cut ? out.train : out.test).push_back(i);
      break;
    }
    case SplitStrategy::kDedicatedSessionsContig:
    case SplitStrategy::kDedicatedSessionsRandom: {
      // Rows of one session are contiguous; collect per-session row ranges.
      std::vector<int> ordinals;
      std::map<int, std::vector<std::size_t>> rows_of;
      for (std::size_t i = 0; i < n; ++i) {
        if (rows_of.find(session_of[i]) == rows_of.end()) ordinals.push_back(session_of[i]);
        rows_of[session_of[i]].push_back(i);
      }
      if (ordinals.size() < 2)
        throw PreconditionError("TooFewSessions: dedicated split needs >= 2 sessions");
      std::sort(ordinals.begin(), ordinals.end());
      if (strategy == SplitStrategy::kDedicatedSessionsRandom) rng.shuffle(ordinals);

      const double target = static_cast<double>(n) * f_train;
      std::size_t cum = 0;
      std::size_t train_sessions = 0;
      for (std::size_t k = 0; k < ordinals.size(); ++k) {
        cum += rows_of[ordinals[k]].size();
        ++train_sessions;
        if (static_cast<double>(cum) >= target) break;
      }
      if (train_sessions == ordinals.size())
        throw PreconditionError("TooFewSessions: no session left for testing");
      std::vector<bool> train_flag(n, false);
      for (std::size_t k = 0; k < train_sessions; ++k)
        for (std::size_t i : rows_of[ordinals[k]]) train_flag[i] = true;
      for (std::size_t i = 0; i < n; ++i) (train_flag[i] ? out.train : out.test).push_back(i);
      break;
    }
    case SplitStrategy::kIntraSession: {
      // Longest session; ties resolve to the lowest ordinal.
      std::map<int, std::size_t> count_of;
      for (int s : session_of) ++count_of[s];
      int best = session_of.front();
      std::size_t best_n = 0;
      for (const auto& [ord, cnt] : count_of)
        if (cnt > best_n) {
          best = ord;
          best_n = cnt;
        }
      if (best_n < 2) throw PreconditionError("TooFewStrokes: longest session has < 2 strokes");
      std::vector<std::size_t> rows;
      for (std::size_t i = 0; i < n; ++i)
        if (session_of[i] == best) rows.push_back(i);
      const std::size_t half = rows.size() / 2;
      for (std::size_t k = 0; k < rows.size(); ++k)
        (k < half ? out.train : out.test).push_back(rows[k]);
      break;
    }
  }
  return out;
}

AttackerPlan plan_attackers(const std::vector<std::string>& users, AttackerMode mode, Rng& rng) {
  if (users.size() < 3)
    throw PreconditionError("TooFewUsers: attacker planning needs >= 3 users, have " +
                            std::to_string(users.size()));
  std::vector<std::string> sorted = users;
  std::sort(sorted.begin(), sorted.end());

  AttackerPlan plan;
  if (mode == AttackerMode::kExcludeAtk) {
    for (const auto& target : sorted) {
      std::vector<std::string> others;
      for (const auto& u : sorted)
        if (u != target) others.push_back(u);
      Rng r = rng.fork("exclude:" + target);
      r.shuffle(others);
      const std::size_t half = others.size() / 2;
      PlanEntry e;
      e.pool.assign(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(half));
      e.attackers.assign(others.begin() + static_cast<std::ptrdiff_t>(half), others.end());
      std::sort(e.pool.begin(), e.pool.end());
      std::sort(e.attackers.begin(), e.attackers.end());
      plan.entries[target] = std::move(e);
    }
  } else {
    std::vector<std::string> shuffled = sorted;
    Rng r = rng.fork("include");
    r.shuffle(shuffled);
    const std::size_t half = (shuffled.size() + 1) / 2;
    std::vector<std::vector<std::string>> halves(2);
    halves[0].assign(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(half));
    halves[1].assign(shuffled.begin() + static_cast<std::ptrdiff_t>(half), shuffled.end());
    for (const auto& h : halves) {
      if (h.size() < 2) continue;  // a singleton half has no attackers
      for (const auto& target : h) {
        PlanEntry e;
        for (const auto& u : h)
          if (u != target) e.pool.push_back(u);
        e.attackers = e.pool;  // same co-half members are scored as impostors
        std::sort(e.pool.begin(), e.pool.end());
        std::sort(e.attackers.begin(), e.attackers.end());
        plan.entries[target] = std::move(e);
      }
    }
    if (plan.entries.empty())
      throw PreconditionError("TooFewUsers: include-mode halves have no attackers");
  }
  return plan;
}

TrainSet assemble_training(const Matrix& target_train_rows,
                           const std::map<std::string, const Matrix*>& pool_rows, Rng& rng) {
  if (target_train_rows.empty()) throw PreconditionError("TooFewStrokes: empty training positives");
  if (pool_rows.empty()) throw PreconditionError("TooFewUsers: empty negative pool");
  const std::size_t wanted = target_train_rows.size();

  std::vector<std::string> pool_ids;
  std::size_t total_avail = 0;
  for (const auto& [id, rows] : pool_rows) {
    pool_ids.push_back(id);
    total_avail += rows->size();
  }
  if (total_avail < wanted)
    throw PreconditionError("InsufficientNegativePool: need " + std::to_string(wanted) +
                            " negatives, pool has " + std::to_string(total_avail));

  const std::size_t m = pool_ids.size();
  std::vector<std::size_t> quota(m, wanted / m);
  // Remainder: +1 to `rem` random distinct pool users.
  const std::size_t rem = wanted % m;
  if (rem > 0) {
    auto extra = rng.fork("remainder").sample_indices(m, rem);
    for (std::size_t i : extra) ++quota[i];
  }
  // Cap by availability, then redistribute shortfall to users with spare rows.
  std::vector<std::size_t> take(m);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < m; ++i) {
    take[i] = std::min(quota[i], pool_rows.at(pool_ids[i])->size());
    assigned += take[i];
  }
  Rng redis = rng.fork("redistribute");
  while (assigned < wanted) {
    std::vector<std::size_t> spare;
    for (std::size_t i = 0; i < m; ++i)
      if (take[i] < pool_rows.at(pool_ids[i])->size()) spare.push_back(i);
    // total_avail >= wanted guarantees spare is non-empty here
    const std::size_t pick = spare[static_cast<std::size_t>(redis.below(spare.size()))];
    ++take[pick];
    ++assigned;
  }

  TrainSet ts;
  ts.x = target_train_rows;
  ts.y.assign(target_train_rows.size(), 1);
  for (std::size_t i = 0; i < m; ++i) {
    const Matrix& rows = *pool_rows.at(pool_ids[i]);
    auto picks = rng.fork("neg:" + pool_ids[i]).sample_indices(rows.size(), take[i]);
    std::sort(picks.begin(), picks.end());  // keep the attacker's chronology
    for (std::size_t p : picks) {
      ts.x.push_back(rows[p]);
      ts.y.push_back(-1);
    }
  }
  return ts;
}

std::vector<double> aggregate(const std::vector<double>& scores, std::size_t w) {
  if (w == 0) throw UsageError("aggregation window must be >= 1");
  if (w == 1) return scores;
  std::vector<double> out;
  out.reserve(scores.size() / w);
  for (std::size_t start = 0; start + w <= scores.size(); start += w) {
    double s = 0.0;
    for (std::size_t i = 0; i < w; ++i) s += scores[start + i];
    out.push_back(s / static_cast<double>(w));
  }
  return out;
}

std::vector<double> UserEval::impostor_flat() const {
  std::vector<double> out;
  for (const auto& seq : impostor_scores) out.insert(out.end(), seq.begin(), seq.end());
  return out;
}

namespace {

Matrix take_rows(const Matrix& m, const std::vector<std::size_t>& idx) {
  Matrix out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(m[i]);
  return out;
}

}  // namespace

UserEval evaluate_user(const std::string& target,
                       const std::map<std::string, const UserData*>& data,
                       const ProtocolConfig& cfg, const AttackerPlan& plan,
                       const EvalOptions& opts) {
  const auto plan_it = plan.entries.find(target);
  if (plan_it == plan.entries.end())
    throw PreconditionError("no attacker plan entry for user '" + target + "'");
  const PlanEntry& entry = plan_it->second;

  const UserData& td = *data.at(target);
  Rng rng = Rng(cfg.seed).fork("user:" + target);

  Rng split_rng = rng.fork("split");
  const SplitIndices tsplit = split_strokes(td.session_of, cfg.split_strategy, cfg.f_train,
                                            split_rng);

  // Splits of pool/attacker users, only where the mode needs them.
  std::map<std::string, SplitIndices> other_splits;
  auto split_of = [&](const std::string& uid) -> const SplitIndices& {
    auto it = other_splits.find(uid);
    if (it == other_splits.end()) {
      Rng r = rng.fork("split:" + uid);
      it = other_splits
               .emplace(uid, split_strokes(data.at(uid)->session_of, cfg.split_strategy,
                                           cfg.f_train, r))
               .first;
    }
    return it->second;
  };

  // Negative pool rows: the pool user's full data in exclude mode, their
  // own training portion in include mode.
  std::map<std::string, Matrix> pool_storage;
  std::map<std::string, const Matrix*> pool_rows;
  for (const auto& uid : entry.pool) {
    if (uid == target) throw PreconditionError("attacker plan contains the target itself");
    if (cfg.attacker_mode == AttackerMode::kExcludeAtk) {
      pool_rows[uid] = &data.at(uid)->features;
    } else {
      pool_storage[uid] = take_rows(data.at(uid)->features, split_of(uid).train);
      pool_rows[uid] = &pool_storage[uid];
    }
  }

  Rng assemble_rng = rng.fork("assemble");
  const Matrix target_train = take_rows(td.features, tsplit.train);
  TrainSet ts = assemble_training(target_train, pool_rows, assemble_rng);

  const Scaler scaler = fit_scaler(ts.x);
  apply_scaler_in_place(scaler, ts.x);

  const Model model = Model::train(cfg.classifier, ts, cfg.hp, rng.fork("train"));

  UserEval ev;
  ev.user_id = target;
  ev.raw_genuine = model.score(apply_scaler(scaler, take_rows(td.features, tsplit.test)));
  for (const auto& uid : entry.attackers) {
    if (uid == target) throw PreconditionError("attacker plan contains the target itself");
    const Matrix atk = take_rows(data.at(uid)->features, split_of(uid).test);
    ev.raw_impostor.push_back(model.score(apply_scaler(scaler, atk)));
  }

  ev.genuine_scores = aggregate(ev.raw_genuine, cfg.aggregation_window);
  for (const auto& seq : ev.raw_impostor)
    ev.impostor_scores.push_back(aggregate(seq, cfg.aggregation_window));

  const auto flat = ev.impostor_flat();
  const EerResult r = eer(ev.genuine_scores, flat);
  ev.eer_value = r.eer;
  ev.eer_threshold = r.threshold;

  if (opts.want_train_scores) {
    const std::size_t n_pos = target_train.size();
    Matrix scaled_train = ts.x;  // already scaled, positives first
    const auto scores = model.score(scaled_train);
    ev.train_genuine.assign(scores.begin(), scores.begin() + static_cast<std::ptrdiff_t>(n_pos));
    ev.train_impostor.assign(scores.begin() + static_cast<std::ptrdiff_t>(n_pos), scores.end());
  }
  return ev;
}

EvalRun evaluate_all(const std::vector<UserData>& data, const ProtocolConfig& cfg,
                     std::size_t jobs, const EvalOptions& opts) {
  std::map<std::string, const UserData*> index;
  std::vector<std::string> ids;
  for (const auto& ud : data) {
    index[ud.user_id] = &ud;
    ids.push_back(ud.user_id);
  }
  Rng plan_rng = Rng(cfg.seed).fork("plan");
  const AttackerPlan plan = plan_attackers(ids, cfg.attacker_mode, plan_rng);

  std::vector<std::string> targets;
  for (const auto& [uid, entry] : plan.entries) targets.push_back(uid);

  EvalRun run;
  run.users.resize(targets.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= targets.size()) return;
      try {
        run.users[i] = evaluate_user(targets[i], index, cfg, plan, opts);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  const std::size_t n_workers = std::max<std::size_t>(1, std::min(jobs, targets.size()));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  std::vector<double> eers;
  eers.reserve(run.users.size());
  for (const auto& u : run.users) eers.push_back(u.eer_value);
  run.summary = summarize_eers(std::move(eers));
  return run;
}

}  // namespace touchbench
