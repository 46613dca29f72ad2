// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "core/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <utility>

#include "core/classify.hpp"
#include "core/error.hpp"
#include "core/metrics.hpp"

namespace touchbench {

using nlohmann::ordered_json;

namespace {

struct VariantName {
  Variant v;
  const char* name;
};

constexpr VariantName kVariantNames[] = {
    {Variant::kBaseline, "baseline"},
    {Variant::kP1SampleSize, "p1_sample_size"},
    {Variant::kP1Sessions, "p1_sessions"},
    {Variant::kP2DeviceMixing, "p2_device_mixing"},
    {Variant::kP2DeviceIdentify, "p2_device_identify"},
    {Variant::kP3Splits, "p3_splits"},
    {Variant::kP4Attacker, "p4_attacker"},
    {Variant::kP5Aggregation, "p5_aggregation"},
    {Variant::kCumulative, "cumulative"},
    {Variant::kThresholdTransfer, "threshold_transfer"},
    {Variant::kPartialWindow, "partial_window"},
};

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double pop_std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

std::size_t min_users_for(AttackerMode m) {
  return m == AttackerMode::kIncludeAtk ? 4 : 3;
}

[[noreturn]] void variant_fail(const std::string& why) {
  throw PreconditionError("VariantPreconditionFailed: " + why);
}

std::size_t distinct_sessions(const UserData& u) {
  std::set<int> s(u.session_of.begin(), u.session_of.end());
  return s.size();
}

bool needs_two_sessions(SplitStrategy s) {
  return s == SplitStrategy::kDedicatedSessionsContig ||
         s == SplitStrategy::kDedicatedSessionsRandom;
}

// Drops users that cannot be split or modeled at all.
std::vector<UserData> eligible_users(std::vector<UserData> all, bool two_sessions) {
  std::vector<UserData> out;
  for (auto& u : all) {
    if (u.features.size() < 2) continue;
    if (two_sessions && distinct_sessions(u) < 2) continue;
    out.push_back(std::move(u));
  }
  return out;
}

std::vector<UserData> select(const std::vector<UserData>& all, std::vector<std::size_t> idx) {
  std::sort(idx.begin(), idx.end());
  std::vector<UserData> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(all[i]);
  return out;
}

std::uint64_t rep_eval_seed(const ExperimentSpec& spec, std::uint64_t a, std::uint64_t b) {
  return Rng(spec.seed).fork("rep").fork(a).fork(b).next_u64();
}

ResultRecord make_record(const ExperimentSpec& spec, const char* kind, ordered_json params,
                         ordered_json payload) {
  ResultRecord r;
  r["schema_version"] = 1;
  r["variant"] = to_string(spec.variant);
  r["record"] = kind;
  r["seed"] = spec.seed;
  r["params"] = std::move(params);
  r["payload"] = std::move(payload);
  return r;
}

// Aggregate of repeated evaluations; shared by every eval-shaped variant so
// that comparable records are field-identical.
ordered_json eval_payload(const std::vector<EerSummary>& reps) {
  std::vector<double> means, stds, cis;
  for (const auto& s : reps) {
    means.push_back(s.mean);
    stds.push_back(s.stddev);
    cis.push_back(s.ci95);
  }
  ordered_json p;
  p["reps"] = reps.size();
  p["n_users"] = reps.empty() ? 0 : reps.front().n_users;
  p["per_rep_mean_eer"] = means;
  p["mean_eer"] = mean_of(means);
  p["std_over_reps"] = pop_std_of(means);
  p["mean_user_std"] = mean_of(stds);
  p["mean_ci95"] = mean_of(cis);
  return p;
}

ordered_json roc_payload(const std::vector<UserEval>& users) {
  std::vector<std::vector<RocPoint>> curves;
  for (const auto& u : users) curves.push_back(roc(u.genuine_scores, u.impostor_flat()));
  const MeanRoc mr = mean_roc(curves, default_fpr_grid());
  ordered_json p;
  p["fpr"] = mr.fpr;
  p["tpr_mean"] = mr.tpr_mean;
  p["tpr_ci_low"] = mr.tpr_ci_low;
  p["tpr_ci_high"] = mr.tpr_ci_high;
  return p;
}

// Welch with a guard for fully degenerate pairs.
double safe_welch(const std::vector<double>& a, const std::vector<double>& b) {
  if (pop_std_of(a) == 0.0 && pop_std_of(b) == 0.0)
    return mean_of(a) == mean_of(b) ? 1.0 : 0.0;
  return welch_t(a, b);
}

std::vector<ResultRecord> run_baseline(const ExperimentSpec& spec,
                                       const std::vector<UserData>& all, std::size_t jobs) {
  if (all.size() < min_users_for(spec.base.attacker_mode))
    variant_fail("NotEnoughUsers: baseline needs at least " +
                 std::to_string(min_users_for(spec.base.attacker_mode)) + " eligible users");
  std::vector<EerSummary> sums;
  std::vector<UserEval> first_rep;
  for (std::size_t r = 0; r < spec.reps; ++r) {
    ProtocolConfig cfg = spec.base;
    cfg.seed = rep_eval_seed(spec, 0, r);
    EvalRun run = evaluate_all(all, cfg, jobs);
    sums.push_back(run.summary);
    if (r == 0) first_rep = std::move(run.users);
  }
  std::vector<ResultRecord> out;
  out.push_back(make_record(spec, "summary", ordered_json::object(), eval_payload(sums)));
  out.push_back(make_record(spec, "roc", ordered_json::object(), roc_payload(first_rep)));
  return out;
}

std::vector<ResultRecord> run_p1_sample_size(const ExperimentSpec& spec,
                                             const std::vector<UserData>& all,
                                             std::size_t jobs) {
  struct PerN {
    std::size_t n;
    std::vector<EerSummary> sums;
  };
  std::vector<PerN> grid;
  for (std::size_t n : spec.n_grid) {
    if (n > all.size())
      variant_fail("NotEnoughUsers: n=" + std::to_string(n) + " exceeds eligible pool of " +
                   std::to_string(all.size()));
    if (n < min_users_for(spec.base.attacker_mode))
      variant_fail("NotEnoughUsers: n=" + std::to_string(n) + " below protocol minimum");
    PerN pn{n, {}};
    for (std::size_t r = 0; r < spec.reps; ++r) {
      Rng sub = Rng(spec.seed).fork("sub").fork(n).fork(r);
      const std::vector<UserData> subset = select(all, sub.sample_indices(all.size(), n));
      ProtocolConfig cfg = spec.base;
      cfg.seed = rep_eval_seed(spec, n, r);
      pn.sums.push_back(evaluate_all(subset, cfg, jobs).summary);
    }
    grid.push_back(std::move(pn));
  }
  // Reference point for the footnote extrapolation: the smallest grid n.
  std::vector<double> mu(grid.size()), user_std(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<double> means, stds;
    for (const auto& s : grid[i].sums) {
      means.push_back(s.mean);
      stds.push_back(s.stddev);
    }
    mu[i] = mean_of(means);
    user_std[i] = mean_of(stds);
  }
  std::vector<ResultRecord> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ordered_json p = eval_payload(grid[i].sums);
    p["ref_n"] = grid.front().n;
    p["sigma_hat"] = mu.front() > 0.0 ? extrapolate_std(mu[i], mu.front(), user_std.front())
                                      : 0.0;
    out.push_back(make_record(spec, "summary", ordered_json{{"n", grid[i].n}}, std::move(p)));
  }
  return out;
}

std::vector<ResultRecord> run_p1_sessions(const ExperimentSpec& spec, const Dataset& data,
                                          std::size_t jobs) {
  std::size_t full = spec.full_session_count;
  if (full == 0)
    for (const auto& [uid, sess] : data.users) full = std::max(full, sess.size());
  if (full < 1) variant_fail("EmptyDataset: no sessions at all");

  std::vector<std::string> keep;
  for (const auto& [uid, sess] : data.users)
    if (sess.size() >= full) keep.push_back(uid);
  if (keep.size() < min_users_for(spec.base.attacker_mode))
    variant_fail("NotEnoughUsers: only " + std::to_string(keep.size()) + " users have " +
                 std::to_string(full) + " sessions");
  const Dataset base_data = filter_users(data, keep);

  auto eval_on = [&](const Dataset& d, std::uint64_t tag, std::size_t r) {
    std::vector<UserData> ud =
        eligible_users(build_user_data(d, spec.base.direction_filter),
                       needs_two_sessions(spec.base.split_strategy));
    if (ud.size() < min_users_for(spec.base.attacker_mode))
      variant_fail("NotEnoughUsers after session restriction");
    ProtocolConfig cfg = spec.base;
    cfg.seed = rep_eval_seed(spec, tag, r);
    return evaluate_all(ud, cfg, jobs);
  };

  std::vector<ResultRecord> out;
  std::vector<std::size_t> curve_s;
  std::vector<double> curve_eer;
  for (std::size_t s : spec.s_grid) {
    if (s < 1 || s > full)
      variant_fail("BadSessionCount: s=" + std::to_string(s) + " outside 1.." +
                   std::to_string(full));
    const Dataset early = filter_sessions(base_data, 0, static_cast<int>(s) - 1);
    const Dataset late =
        filter_sessions(base_data, static_cast<int>(full - s), static_cast<int>(full) - 1);
    std::vector<EerSummary> early_sums, late_sums;
    for (std::size_t r = 0; r < spec.reps; ++r) {
      early_sums.push_back(eval_on(early, 2 * s, r).summary);
      late_sums.push_back(eval_on(late, 2 * s + 1, r).summary);
    }
    ordered_json p;
    p["early"] = eval_payload(early_sums);
    p["late"] = eval_payload(late_sums);
    out.push_back(make_record(spec, "early_late", ordered_json{{"s", s}}, std::move(p)));
    std::vector<double> early_means;
    for (const auto& e : early_sums) early_means.push_back(e.mean);
    curve_s.push_back(s);
    curve_eer.push_back(mean_of(early_means));
  }
  out.push_back(make_record(
      spec, "session_count_curve", ordered_json::object(),
      ordered_json{{"s", curve_s}, {"mean_eer_early", curve_eer}}));

  // Per-user swipe-count scatter on the unrestricted session range.
  EvalRun full_run = eval_on(base_data, 1, 0);
  std::vector<UserData> full_ud =
      eligible_users(build_user_data(base_data, spec.base.direction_filter),
                     needs_two_sessions(spec.base.split_strategy));
  std::map<std::string, std::size_t> rows_of;
  for (const auto& u : full_ud) rows_of[u.user_id] = u.features.size();
  ordered_json scatter = ordered_json::array();
  for (const auto& u : full_run.users)
    scatter.push_back(ordered_json{
        {"user", u.user_id}, {"swipes", rows_of[u.user_id]}, {"eer", u.eer_value}});
  out.push_back(make_record(spec, "scatter", ordered_json::object(),
                            ordered_json{{"users", std::move(scatter)}}));
  return out;
}

std::vector<ResultRecord> run_p2_mixing(const ExperimentSpec& spec, const Dataset& data,
                                        std::size_t jobs) {
  const std::map<std::string, Dataset> parts = partition_by_device(data);
  if (parts.size() < 2) variant_fail("NeedTwoDevices: dataset has a single device model");

  const bool two = needs_two_sessions(spec.base.split_strategy);
  std::vector<std::pair<std::string, std::vector<UserData>>> per_device;
  std::size_t n = SIZE_MAX;
  for (const auto& [name, part] : parts) {
    auto ud = eligible_users(build_user_data(part, spec.base.direction_filter), two);
    n = std::min(n, ud.size());
    per_device.emplace_back(name, std::move(ud));
  }
  const std::vector<UserData> combined =
      eligible_users(build_user_data(data, spec.base.direction_filter), two);
  if (n < min_users_for(spec.base.attacker_mode))
    variant_fail("NotEnoughUsers: smallest device pool has " + std::to_string(n) + " users");

  auto run_subset = [&](const std::vector<UserData>& pool, std::uint64_t tag, std::size_t r) {
    Rng sub = Rng(spec.seed).fork("sub").fork(tag).fork(r);
    const std::vector<UserData> subset = select(pool, sub.sample_indices(pool.size(), n));
    ProtocolConfig cfg = spec.base;
    cfg.seed = rep_eval_seed(spec, tag, r);
    return evaluate_all(subset, cfg, jobs).summary;
  };

  std::vector<EerSummary> combined_sums;
  for (std::size_t r = 0; r < spec.reps; ++r)
    combined_sums.push_back(run_subset(combined, per_device.size(), r));
  std::vector<double> combined_pool;
  for (const auto& s : combined_sums)
    combined_pool.insert(combined_pool.end(), s.per_user_eer.begin(), s.per_user_eer.end());

  std::vector<ResultRecord> out;
  for (std::size_t di = 0; di < per_device.size(); ++di) {
    std::vector<EerSummary> dev_sums;
    for (std::size_t r = 0; r < spec.reps; ++r)
      dev_sums.push_back(run_subset(per_device[di].second, di, r));
    std::vector<double> dev_pool;
    for (const auto& s : dev_sums)
      dev_pool.insert(dev_pool.end(), s.per_user_eer.begin(), s.per_user_eer.end());
    ordered_json p;
    p["device"] = eval_payload(dev_sums);
    p["combined"] = eval_payload(combined_sums);
    p["p_welch"] = safe_welch(dev_pool, combined_pool);
    out.push_back(make_record(spec, "device",
                              ordered_json{{"device", per_device[di].first}, {"n", n}},
                              std::move(p)));
  }
  return out;
}

std::vector<ResultRecord> run_p2_identify(const ExperimentSpec& spec, const Dataset& data,
                                          std::size_t jobs) {
  (void)jobs;
  const std::map<std::string, Dataset> parts = partition_by_device(data);
  const std::size_t k = parts.size();
  if (k < 2) variant_fail("NeedTwoDevices: dataset has a single device model");

  std::vector<std::string> device_names;
  std::vector<std::vector<UserData>> classes;
  for (const auto& [name, part] : parts) {
    auto ud = eligible_users(build_user_data(part, spec.base.direction_filter), false);
    if (ud.size() < 2)
      variant_fail("NeedTwoUsersPerDevice: device " + name + " has " +
                   std::to_string(ud.size()) + " eligible users");
    device_names.push_back(name);
    classes.push_back(std::move(ud));
  }

  std::vector<double> accuracies;
  std::vector<std::vector<std::size_t>> confusion(k, std::vector<std::size_t>(k, 0));
  std::size_t test_rows_total = 0;
  for (std::size_t r = 0; r < spec.reps; ++r) {
    Rng rng = Rng(spec.seed).fork("identify").fork(r);
    // User-disjoint 80/20 split per class, then row balancing.
    std::vector<Matrix> train_rows(k), test_rows(k);
    for (std::size_t c = 0; c < k; ++c) {
      std::vector<std::size_t> order(classes[c].size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      Rng urng = rng.fork("users:" + device_names[c]);
      urng.shuffle(order);
      std::size_t n_train = static_cast<std::size_t>(
          std::floor(0.8 * static_cast<double>(order.size())));
      n_train = std::max<std::size_t>(1, std::min(order.size() - 1, n_train));
      for (std::size_t i = 0; i < order.size(); ++i) {
        const Matrix& rows = classes[c][order[i]].features;
        Matrix& dst = i < n_train ? train_rows[c] : test_rows[c];
        dst.insert(dst.end(), rows.begin(), rows.end());
      }
      if (train_rows[c].empty() || test_rows[c].empty())
        variant_fail("EmptySplit: device " + device_names[c] + " yields no train or test rows");
    }
    std::size_t m_train = spec.identify_max_rows_per_class, m_test = SIZE_MAX;
    for (std::size_t c = 0; c < k; ++c) {
      m_train = std::min(m_train, train_rows[c].size());
      m_test = std::min(m_test, test_rows[c].size());
    }
    Matrix xtr, xte;
    std::vector<int> ytr, yte;
    for (std::size_t c = 0; c < k; ++c) {
      Rng brng = rng.fork("bal:" + device_names[c]);
      for (std::size_t i : brng.sample_indices(train_rows[c].size(), m_train)) {
        xtr.push_back(train_rows[c][i]);
        ytr.push_back(static_cast<int>(c));
      }
      for (std::size_t i : brng.sample_indices(test_rows[c].size(), m_test)) {
        xte.push_back(test_rows[c][i]);
        yte.push_back(static_cast<int>(c));
      }
    }
    const Scaler sc = fit_scaler(xtr);
    apply_scaler_in_place(sc, xtr);
    apply_scaler_in_place(sc, xte);
    const MulticlassModel m = MulticlassModel::train(xtr, ytr, spec.base.hp, rng);
    const std::vector<int> pred = m.predict(xte);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      if (pred[i] == yte[i]) ++hits;
      ++confusion[static_cast<std::size_t>(yte[i])][static_cast<std::size_t>(pred[i])];
    }
    accuracies.push_back(static_cast<double>(hits) / static_cast<double>(pred.size()));
    test_rows_total += pred.size();
  }

  ordered_json p;
  p["reps"] = spec.reps;
  p["k"] = k;
  p["devices"] = device_names;
  p["chance"] = 1.0 / static_cast<double>(k);
  p["accuracy_per_rep"] = accuracies;
  p["accuracy_mean"] = mean_of(accuracies);
  p["test_rows_total"] = test_rows_total;
  p["confusion"] = confusion;
  std::vector<ResultRecord> out;
  out.push_back(make_record(spec, "identify", ordered_json::object(), std::move(p)));
  return out;
}

std::vector<ResultRecord> run_p3_splits(const ExperimentSpec& spec,
                                        const std::vector<UserData>& raw, std::size_t jobs) {
  // The session-based strategies only make sense for multi-session users;
  // the same restriction is applied to every arm for comparability.
  std::vector<UserData> all;
  for (const auto& u : raw)
    if (distinct_sessions(u) >= 2) all.push_back(u);
  if (all.size() < min_users_for(spec.base.attacker_mode))
    variant_fail("TooFewSessions: fewer than " +
                 std::to_string(min_users_for(spec.base.attacker_mode)) +
                 " users have two or more sessions");

  constexpr SplitStrategy kStrategies[] = {
      SplitStrategy::kRandom, SplitStrategy::kContiguous,
      SplitStrategy::kDedicatedSessionsContig, SplitStrategy::kDedicatedSessionsRandom,
      SplitStrategy::kIntraSession};
  std::vector<ResultRecord> out;
  for (SplitStrategy st : kStrategies) {
    std::vector<EerSummary> sums;
    for (std::size_t r = 0; r < spec.reps; ++r) {
      ProtocolConfig cfg = spec.base;
      cfg.split_strategy = st;
      cfg.seed = rep_eval_seed(spec, 0, r);  // shared across arms: paired design
      sums.push_back(evaluate_all(all, cfg, jobs).summary);
    }
    out.push_back(make_record(spec, "summary", ordered_json{{"split", to_string(st)}},
                              eval_payload(sums)));
  }
  return out;
}

std::vector<ResultRecord> run_p4_attacker(const ExperimentSpec& spec,
                                          const std::vector<UserData>& all, std::size_t jobs) {
  std::vector<ResultRecord> out;
  for (std::size_t n : spec.n_grid) {
    if (n > all.size())
      variant_fail("NotEnoughUsers: n=" + std::to_string(n) + " exceeds eligible pool of " +
                   std::to_string(all.size()));
    if (n < 4) variant_fail("NotEnoughUsers: INCLUDE mode needs n >= 4");
    std::vector<EerSummary> excl, incl;
    std::vector<double> diffs;
    for (std::size_t r = 0; r < spec.reps; ++r) {
      Rng sub = Rng(spec.seed).fork("sub").fork(n).fork(r);
      const std::vector<UserData> subset = select(all, sub.sample_indices(all.size(), n));
      const std::uint64_t eseed = rep_eval_seed(spec, n, r);
      ProtocolConfig ce = spec.base;
      ce.attacker_mode = AttackerMode::kExcludeAtk;
      ce.seed = eseed;
      ProtocolConfig ci = spec.base;
      ci.attacker_mode = AttackerMode::kIncludeAtk;
      ci.seed = eseed;
      excl.push_back(evaluate_all(subset, ce, jobs).summary);
      incl.push_back(evaluate_all(subset, ci, jobs).summary);
      diffs.push_back(incl.back().mean - excl.back().mean);
    }
    ordered_json p;
    p["exclude"] = eval_payload(excl);
    p["include"] = eval_payload(incl);
    p["per_rep_diff"] = diffs;  // include minus exclude on the same subsample
    p["mean_diff"] = mean_of(diffs);
    out.push_back(make_record(spec, "summary", ordered_json{{"n", n}}, std::move(p)));
  }
  return out;
}

std::vector<ResultRecord> run_p5_aggregation(const ExperimentSpec& spec,
                                             const std::vector<UserData>& all,
                                             std::size_t jobs) {
  if (all.size() < min_users_for(spec.base.attacker_mode))
    variant_fail("NotEnoughUsers for aggregation sweep");
  std::vector<ResultRecord> out;
  for (std::size_t w : spec.w_grid) {
    if (w == 0) variant_fail("BadWindow: w must be >= 1");
    std::vector<EerSummary> sums;
    for (std::size_t r = 0; r < spec.reps; ++r) {
      ProtocolConfig cfg = spec.base;
      cfg.aggregation_window = w;
      cfg.seed = rep_eval_seed(spec, 0, r);  // shared across w: w=1 matches BASELINE
      sums.push_back(evaluate_all(all, cfg, jobs).summary);
    }
    out.push_back(make_record(spec, "summary", ordered_json{{"w", w}}, eval_payload(sums)));
  }
  return out;
}

std::vector<ResultRecord> run_cumulative(const ExperimentSpec& spec, const Dataset& data,
                                         std::size_t jobs) {
  const std::size_t n_wanted = spec.n_grid.empty() ? 40 : spec.n_grid.front();

  const std::vector<UserData> combined =
      eligible_users(build_user_data(data, spec.base.direction_filter), false);

  const std::map<std::string, Dataset> parts = partition_by_device(data);
  std::string best_device;
  std::vector<UserData> device_pool;
  for (const auto& [name, part] : parts) {
    auto ud = eligible_users(build_user_data(part, spec.base.direction_filter), true);
    if (ud.size() > device_pool.size()) {
      device_pool = std::move(ud);
      best_device = name;
    }
  }

  const std::size_t n_unreal = std::min(n_wanted, combined.size());
  const std::size_t n_real = std::min(n_wanted, device_pool.size());
  if (n_unreal < 4 || n_real < 4)
    variant_fail("NotEnoughUsers: unrealistic arm has " + std::to_string(n_unreal) +
                 ", realistic arm has " + std::to_string(n_real));

  ProtocolConfig unreal = spec.base;
  unreal.split_strategy = SplitStrategy::kRandom;
  unreal.attacker_mode = AttackerMode::kIncludeAtk;
  ProtocolConfig real = spec.base;
  real.split_strategy = SplitStrategy::kDedicatedSessionsContig;
  real.attacker_mode = AttackerMode::kExcludeAtk;

  std::vector<EerSummary> unreal_sums, real_sums;
  std::vector<double> diffs;
  for (std::size_t r = 0; r < spec.reps; ++r) {
    Rng su = Rng(spec.seed).fork("sub").fork(0).fork(r);
    Rng sr = Rng(spec.seed).fork("sub").fork(1).fork(r);
    ProtocolConfig cu = unreal;
    cu.seed = rep_eval_seed(spec, 0, r);
    ProtocolConfig cr = real;
    cr.seed = rep_eval_seed(spec, 1, r);
    unreal_sums.push_back(
        evaluate_all(select(combined, su.sample_indices(combined.size(), n_unreal)), cu, jobs)
            .summary);
    real_sums.push_back(
        evaluate_all(select(device_pool, sr.sample_indices(device_pool.size(), n_real)), cr,
                     jobs)
            .summary);
    diffs.push_back(real_sums.back().mean - unreal_sums.back().mean);
  }
  ordered_json p;
  p["unrealistic"] = eval_payload(unreal_sums);
  p["realistic"] = eval_payload(real_sums);
  p["realistic_device"] = best_device;
  p["per_rep_diff"] = diffs;  // realistic minus unrealistic
  p["mean_diff"] = mean_of(diffs);
  std::vector<ResultRecord> out;
  out.push_back(make_record(
      spec, "arm_compare",
      ordered_json{{"n_unrealistic", n_unreal}, {"n_realistic", n_real}}, std::move(p)));
  return out;
}

std::vector<ResultRecord> run_threshold_transfer(const ExperimentSpec& spec,
                                                 const std::vector<UserData>& all,
                                                 std::size_t jobs) {
  if (all.size() < min_users_for(spec.base.attacker_mode))
    variant_fail("NotEnoughUsers for threshold transfer");
  EvalOptions opts;
  opts.want_train_scores = true;
  std::vector<double> rep_transfer, rep_test;
  ordered_json users = ordered_json::array();
  for (std::size_t r = 0; r < spec.reps; ++r) {
    ProtocolConfig cfg = spec.base;
    cfg.seed = rep_eval_seed(spec, 0, r);
    EvalRun run = evaluate_all(all, cfg, jobs, opts);
    std::vector<double> transfer, test;
    for (const auto& u : run.users) {
      if (u.train_genuine.empty() || u.train_impostor.empty()) continue;
      const EerResult tr = eer(u.train_genuine, u.train_impostor);
      const auto [far, frr] = far_frr_at(u.genuine_scores, u.impostor_flat(), tr.threshold);
      transfer.push_back((far + frr) / 2.0);
      test.push_back(u.eer_value);
      if (r == 0)
        users.push_back(ordered_json{{"user", u.user_id},
                                     {"threshold", tr.threshold},
                                     {"far", far},
                                     {"frr", frr},
                                     {"transferred", (far + frr) / 2.0},
                                     {"test_eer", u.eer_value}});
    }
    if (transfer.empty()) variant_fail("NoTrainScores: every user lacked training scores");
    rep_transfer.push_back(mean_of(transfer));
    rep_test.push_back(mean_of(test));
  }
  ordered_json p;
  p["reps"] = spec.reps;
  p["per_rep_mean_transferred"] = rep_transfer;
  p["per_rep_mean_test_eer"] = rep_test;
  p["mean_transferred"] = mean_of(rep_transfer);
  p["mean_test_eer"] = mean_of(rep_test);
  p["users"] = std::move(users);
  std::vector<ResultRecord> out;
  out.push_back(make_record(spec, "transfer", ordered_json::object(), std::move(p)));
  return out;
}

std::vector<ResultRecord> run_partial_window(const ExperimentSpec& spec,
                                             const std::vector<UserData>& all,
                                             std::size_t jobs) {
  const std::size_t w = spec.window;
  if (w < 1) variant_fail("BadWindow: w must be >= 1");
  if (all.size() < min_users_for(spec.base.attacker_mode))
    variant_fail("NotEnoughUsers for partial windows");
  EvalOptions opts;
  opts.want_train_scores = true;
  ProtocolConfig cfg = spec.base;
  cfg.seed = rep_eval_seed(spec, 0, 0);
  const EvalRun run = evaluate_all(all, cfg, jobs, opts);

  // Train-selected acceptance threshold per user.
  std::vector<double> thr(run.users.size());
  for (std::size_t i = 0; i < run.users.size(); ++i) {
    const auto& u = run.users[i];
    if (u.train_genuine.empty() || u.train_impostor.empty())
      variant_fail("NoTrainScores: user " + u.user_id + " lacks training scores");
    thr[i] = eer(u.train_genuine, u.train_impostor).threshold;
  }

  std::vector<ResultRecord> out;
  for (std::size_t n = 0; n <= w; ++n) {
    std::size_t windows = 0, accepted = 0;
    for (std::size_t r = 0; r < spec.reps; ++r) {
      Rng rng = Rng(spec.seed).fork("win").fork(n).fork(r);
      for (std::size_t i = 0; i < run.users.size(); ++i) {
        const auto& u = run.users[i];
        const std::size_t ng = w - n;
        if (u.raw_genuine.size() < ng) continue;
        // The attack starts mid stream: genuine head, attacker tail.
        auto sample_window = [&](const std::vector<double>& atk) {
          double s = 0.0;
          if (ng > 0) {
            const std::size_t g0 =
                static_cast<std::size_t>(rng.below(u.raw_genuine.size() - ng + 1));
            for (std::size_t j = 0; j < ng; ++j) s += u.raw_genuine[g0 + j];
          }
          if (n > 0) {
            const std::size_t a0 = static_cast<std::size_t>(rng.below(atk.size() - n + 1));
            for (std::size_t j = 0; j < n; ++j) s += atk[a0 + j];
          }
          ++windows;
          if (s / static_cast<double>(w) >= thr[i]) ++accepted;
        };
        if (n == 0) {
          sample_window({});
        } else {
          for (const auto& atk : u.raw_impostor)
            if (atk.size() >= n) sample_window(atk);
        }
      }
    }
    if (windows == 0)
      variant_fail("NoWindows: score sequences shorter than the window at n=" +
                   std::to_string(n));
    ordered_json p;
    p["reps"] = spec.reps;
    p["windows"] = windows;
    p["accept_fraction"] =
        static_cast<double>(accepted) / static_cast<double>(windows);
    out.push_back(make_record(spec, "window", ordered_json{{"w", w}, {"n", n}}, std::move(p)));
  }
  return out;
}

}  // namespace

const char* to_string(Variant v) {
  for (const auto& e : kVariantNames)
    if (e.v == v) return e.name;
  return "?";
}

Variant variant_from_string(const std::string& s) {
  for (const auto& e : kVariantNames)
    if (s == e.name) return e.v;
  throw UsageError("unknown experiment variant '" + s + "'");
}

std::vector<std::string> variant_names() {
  std::vector<std::string> out;
  for (const auto& e : kVariantNames) out.push_back(e.name);
  return out;
}

ExperimentSpec with_defaults(ExperimentSpec spec) {
  if (spec.reps == 0) {
    switch (spec.variant) {
      case Variant::kP1SampleSize: spec.reps = 50; break;
      case Variant::kP2DeviceMixing:
      case Variant::kP2DeviceIdentify:
      case Variant::kP4Attacker:
      case Variant::kP5Aggregation:
      case Variant::kCumulative: spec.reps = 10; break;
      case Variant::kPartialWindow: spec.reps = 100; break;
      default: spec.reps = 1; break;
    }
  }
  if (spec.n_grid.empty()) {
    if (spec.variant == Variant::kP1SampleSize) spec.n_grid = {10, 20, 40};
    if (spec.variant == Variant::kP4Attacker) spec.n_grid = {11, 21, 41};
    if (spec.variant == Variant::kCumulative) spec.n_grid = {40};
  }
  if (spec.s_grid.empty() && spec.variant == Variant::kP1Sessions) spec.s_grid = {1, 2, 3};
  if (spec.w_grid.empty() && spec.variant == Variant::kP5Aggregation)
    spec.w_grid = {1, 2, 4, 8, 16};
  return spec;
}

std::vector<ResultRecord> run(const ExperimentSpec& raw_spec, const Dataset& data,
                              std::size_t jobs) {
  const ExperimentSpec spec = with_defaults(raw_spec);
  if (spec.reps < 1) variant_fail("reps must be >= 1");

  // Dataset-level variants do their own preparation.
  switch (spec.variant) {
    case Variant::kP1Sessions: return run_p1_sessions(spec, data, jobs);
    case Variant::kP2DeviceMixing: return run_p2_mixing(spec, data, jobs);
    case Variant::kP2DeviceIdentify: return run_p2_identify(spec, data, jobs);
    case Variant::kCumulative: return run_cumulative(spec, data, jobs);
    default: break;
  }

  const std::vector<UserData> all =
      eligible_users(build_user_data(data, spec.base.direction_filter),
                     needs_two_sessions(spec.base.split_strategy));
  switch (spec.variant) {
    case Variant::kBaseline: return run_baseline(spec, all, jobs);
    case Variant::kP1SampleSize: return run_p1_sample_size(spec, all, jobs);
    case Variant::kP3Splits: return run_p3_splits(spec, all, jobs);
    case Variant::kP4Attacker: return run_p4_attacker(spec, all, jobs);
    case Variant::kP5Aggregation: return run_p5_aggregation(spec, all, jobs);
    case Variant::kThresholdTransfer: return run_threshold_transfer(spec, all, jobs);
    case Variant::kPartialWindow: return run_partial_window(spec, all, jobs);
    default: break;
  }
  throw PreconditionError("unhandled variant");
}

void write_jsonl(const std::vector<ResultRecord>& records, std::ostream& out) {
  for (const auto& r : records) out << r.dump() << "\n";
}

std::vector<ResultRecord> read_jsonl(std::istream& in) {
  std::vector<ResultRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      out.push_back(ordered_json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("bad results line: ") + e.what());
    }
  }
  return out;
}

}  // namespace touchbench
