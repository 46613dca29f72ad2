// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "core/error.hpp"
#include "core/protocol.hpp"
#include "core/synthgen.hpp"

using namespace touchbench;

namespace {

std::vector<int> sessions(std::initializer_list<std::size_t> sizes) {
  std::vector<int> out;
  int ord = 0;
  for (std::size_t s : sizes) {
    for (std::size_t i = 0; i < s; ++i) out.push_back(ord);
    ++ord;
  }
  return out;
}

void check_disjoint_exhaustive(const SplitIndices& sp, std::size_t n) {
  std::set<std::size_t> seen;
  for (std::size_t i : sp.train) seen.insert(i);
  for (std::size_t i : sp.test) seen.insert(i);
  CHECK(seen.size() == sp.train.size() + sp.test.size());
  CHECK(seen.size() <= n);
  CHECK(std::is_sorted(sp.train.begin(), sp.train.end()));
  CHECK(std::is_sorted(sp.test.begin(), sp.test.end()));
  CHECK(!sp.train.empty());
  CHECK(!sp.test.empty());
}

}  // namespace

TEST_CASE("contiguous split cuts at the train fraction") {
  Rng rng(1);
  auto sp = split_strokes(sessions({10}), SplitStrategy::kContiguous, 0.5, rng);
  CHECK(sp.train == std::vector<std::size_t>{0, 1, 2, 3, 4});
  CHECK(sp.test == std::vector<std::size_t>{5, 6, 7, 8, 9});
  // Extreme fraction still leaves one test row.
  auto sp2 = split_strokes(sessions({4}), SplitStrategy::kContiguous, 0.99, rng);
  CHECK(sp2.train.size() == 3);
  CHECK(sp2.test == std::vector<std::size_t>{3});
}

TEST_CASE("random split has the right size and is seed-deterministic") {
  Rng r1(5), r2(5), r3(6);
  auto a = split_strokes(sessions({20}), SplitStrategy::kRandom, 0.8, r1);
  auto b = split_strokes(sessions({20}), SplitStrategy::kRandom, 0.8, r2);
  auto c = split_strokes(sessions({20}), SplitStrategy::kRandom, 0.8, r3);
  CHECK(a.train.size() == 16);
  CHECK(a.train == b.train);
  CHECK(a.train != c.train);
  check_disjoint_exhaustive(a, 20);
  std::set<std::size_t> all;
  for (std::size_t i : a.train) all.insert(i);
  for (std::size_t i : a.test) all.insert(i);
  CHECK(all.size() == 20);
}

TEST_CASE("dedicated contiguous split promotes whole sessions") {
  Rng rng(2);
  auto sp = split_strokes(sessions({30, 30, 40}), SplitStrategy::kDedicatedSessionsContig, 0.5, rng);
  // Cumulative 30 then 60 reaches the 50-row target: sessions 0 and 1 train.
  CHECK(sp.train.size() == 60);
  CHECK(sp.test.size() == 40);
  CHECK(sp.train.front() == 0);
  CHECK(sp.train.back() == 59);
  CHECK(sp.test.front() == 60);
}

TEST_CASE("dedicated split preconditions") {
  Rng rng(3);
  CHECK_THROWS_AS(
      split_strokes(sessions({10}), SplitStrategy::kDedicatedSessionsContig, 0.5, rng),
      PreconditionError);
  // All sessions would land in train.
  CHECK_THROWS_AS(
      split_strokes(sessions({10, 1}), SplitStrategy::kDedicatedSessionsContig, 0.95, rng),
      PreconditionError);
}

TEST_CASE("dedicated random split keeps sessions intact") {
  Rng rng(7);
  const auto so = sessions({8, 12, 10, 6});
  auto sp = split_strokes(so, SplitStrategy::kDedicatedSessionsRandom, 0.5, rng);
  check_disjoint_exhaustive(sp, so.size());
  std::set<int> train_sessions, test_sessions;
  for (std::size_t i : sp.train) train_sessions.insert(so[i]);
  for (std::size_t i : sp.test) test_sessions.insert(so[i]);
  for (int s : train_sessions) CHECK(test_sessions.count(s) == 0);
  CHECK(sp.train.size() + sp.test.size() == so.size());
}

TEST_CASE("intra-session split confines both sides to the longest session") {
  Rng rng(4);
  const auto so = sessions({3, 5});
  auto sp = split_strokes(so, SplitStrategy::kIntraSession, 0.5, rng);
  CHECK(sp.train == std::vector<std::size_t>{3, 4});
  CHECK(sp.test == std::vector<std::size_t>{5, 6, 7});
  // Length ties resolve to the lowest ordinal.
  const auto tie = sessions({4, 4});
  auto sp2 = split_strokes(tie, SplitStrategy::kIntraSession, 0.5, rng);
  CHECK(sp2.train == std::vector<std::size_t>{0, 1});
  CHECK(sp2.test == std::vector<std::size_t>{2, 3});
}

TEST_CASE("split argument validation") {
  Rng rng(1);
  CHECK_THROWS_AS(split_strokes(sessions({1}), SplitStrategy::kRandom, 0.5, rng),
                  PreconditionError);
  CHECK_THROWS_AS(split_strokes(sessions({10}), SplitStrategy::kRandom, 0.0, rng), UsageError);
  CHECK_THROWS_AS(split_strokes(sessions({10}), SplitStrategy::kRandom, 1.0, rng), UsageError);
}

TEST_CASE("strategy and mode names round trip") {
  for (SplitStrategy s :
       {SplitStrategy::kRandom, SplitStrategy::kContiguous, SplitStrategy::kDedicatedSessionsContig,
        SplitStrategy::kDedicatedSessionsRandom, SplitStrategy::kIntraSession})
    CHECK(split_strategy_from_string(to_string(s)) == s);
  for (AttackerMode m : {AttackerMode::kExcludeAtk, AttackerMode::kIncludeAtk})
    CHECK(attacker_mode_from_string(to_string(m)) == m);
  CHECK_THROWS_AS(split_strategy_from_string("bogus"), UsageError);
  CHECK_THROWS_AS(attacker_mode_from_string("bogus"), UsageError);
}

TEST_CASE("exclude planning halves the remaining users per target") {
  std::vector<std::string> users;
  for (int i = 0; i < 11; ++i) users.push_back("u" + std::to_string(10 + i));
  Rng rng(9);
  auto plan = plan_attackers(users, AttackerMode::kExcludeAtk, rng);
  CHECK(plan.entries.size() == 11);
  for (const auto& [target, e] : plan.entries) {
    CHECK(e.pool.size() == 5);
    CHECK(e.attackers.size() == 5);
    std::set<std::string> all(e.pool.begin(), e.pool.end());
    all.insert(e.attackers.begin(), e.attackers.end());
    CHECK(all.size() == 10);  // disjoint halves
    CHECK(all.count(target) == 0);
  }
}

TEST_CASE("include planning halves the whole pool once") {
  std::vector<std::string> users;
  for (int i = 0; i < 8; ++i) users.push_back("u" + std::to_string(i));
  Rng rng(9);
  auto plan = plan_attackers(users, AttackerMode::kIncludeAtk, rng);
  CHECK(plan.entries.size() == 8);
  for (const auto& [target, e] : plan.entries) {
    CHECK(e.pool.size() == 3);  // co-half minus the target
    CHECK(e.pool == e.attackers);
    CHECK(std::count(e.pool.begin(), e.pool.end(), target) == 0);
  }
  // Reconstruct the halves: each target plus its pool forms a set of 4 and
  // exactly two such sets exist.
  std::set<std::set<std::string>> halves;
  for (const auto& [target, e] : plan.entries) {
    std::set<std::string> h(e.pool.begin(), e.pool.end());
    h.insert(target);
    halves.insert(h);
  }
  CHECK(halves.size() == 2);
}

TEST_CASE("include planning with an odd singleton half") {
  Rng rng(1);
  auto plan = plan_attackers({"a", "b", "c"}, AttackerMode::kIncludeAtk, rng);
  CHECK(plan.entries.size() == 2);  // the singleton half yields no targets
  Rng rng2(1);
  CHECK_THROWS_AS(plan_attackers({"a", "b"}, AttackerMode::kExcludeAtk, rng2), PreconditionError);
}

TEST_CASE("assemble_training spreads negatives evenly over the pool") {
  Matrix pos(100, std::vector<double>(2, 1.0));
  Matrix big(60, std::vector<double>(2, -1.0));
  std::map<std::string, const Matrix*> pool = {
      {"a", &big}, {"b", &big}, {"c", &big}, {"d", &big}};
  Rng rng(11);
  TrainSet ts = assemble_training(pos, pool, rng);
  REQUIRE(ts.x.size() == 200);
  REQUIRE(ts.y.size() == 200);
  CHECK(std::count(ts.y.begin(), ts.y.end(), 1) == 100);
  CHECK(std::count(ts.y.begin(), ts.y.end(), -1) == 100);
}

TEST_CASE("assemble_training remainder goes to distinct pool users") {
  Matrix pos(100, std::vector<double>(1, 1.0));
  Matrix a(60, std::vector<double>{-1.0}), b(60, std::vector<double>{-2.0}),
      c(60, std::vector<double>{-3.0});
  std::map<std::string, const Matrix*> pool = {{"a", &a}, {"b", &b}, {"c", &c}};
  Rng rng(13);
  TrainSet ts = assemble_training(pos, pool, rng);
  std::map<double, std::size_t> per_user;
  for (std::size_t i = 100; i < ts.x.size(); ++i) ++per_user[ts.x[i][0]];
  std::vector<std::size_t> counts;
  for (const auto& [v, c2] : per_user) counts.push_back(c2);
  std::sort(counts.begin(), counts.end());
  CHECK(counts == std::vector<std::size_t>{33, 33, 34});
}

TEST_CASE("assemble_training redistributes shortfall to users with spare rows") {
  Matrix pos(100, std::vector<double>(1, 1.0));
  Matrix small(10, std::vector<double>{-1.0}), large(200, std::vector<double>{-2.0});
  std::map<std::string, const Matrix*> pool = {{"s", &small}, {"l", &large}};
  Rng rng(17);
  TrainSet ts = assemble_training(pos, pool, rng);
  std::size_t from_small = 0, from_large = 0;
  for (std::size_t i = 100; i < ts.x.size(); ++i)
    (ts.x[i][0] == -1.0 ? from_small : from_large)++;
  CHECK(from_small == 10);
  CHECK(from_large == 90);

  Matrix tiny(5, std::vector<double>{-1.0});
  std::map<std::string, const Matrix*> short_pool = {{"s", &tiny}};
  Rng rng2(17);
  CHECK_THROWS_AS(assemble_training(pos, short_pool, rng2), PreconditionError);
}

TEST_CASE("aggregate means non-overlapping windows and drops the remainder") {
  std::vector<double> s = {0.2, 0.4, 0.6};
  CHECK(aggregate(s, 1) == s);
  const auto one = aggregate(s, 3);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == doctest::Approx(0.4));
  std::vector<double> s7 = {1, 2, 3, 4, 5, 6, 7};
  CHECK(aggregate(s7, 3) == std::vector<double>{2.0, 5.0});
  CHECK(aggregate(s7, 8).empty());
  CHECK_THROWS_AS(aggregate(s, 0), UsageError);
}

TEST_CASE("build_user_data rows are chronological and direction filtered") {
  SynthConfig cfg;
  cfg.n_users = 4;
  cfg.sessions_per_user = 2;
  cfg.strokes_per_session = 10;
  cfg.seed = 21;
  Dataset d = generate(cfg);
  auto data = build_user_data(d, Direction::kLeft);
  CHECK(data.size() == 4);
  for (const auto& ud : data) {
    REQUIRE(ud.features.size() == ud.session_of.size());
    REQUIRE(ud.features.size() == ud.start_ts_of.size());
    for (std::size_t i = 1; i < ud.session_of.size(); ++i) {
      CHECK(ud.session_of[i] >= ud.session_of[i - 1]);
      if (ud.session_of[i] == ud.session_of[i - 1])
        CHECK(ud.start_ts_of[i] > ud.start_ts_of[i - 1]);
    }
  }
}

TEST_CASE("evaluate_all is independent of the thread count") {
  SynthConfig cfg;
  cfg.n_users = 8;
  cfg.sessions_per_user = 2;
  cfg.strokes_per_session = 12;
  cfg.seed = 31;
  Dataset d = generate(cfg);
  auto data = build_user_data(d, Direction::kLeft);
  ProtocolConfig pc;
  pc.classifier = ClassifierKind::kKnn;
  pc.seed = 5;
  EvalRun serial = evaluate_all(data, pc, 1);
  EvalRun parallel = evaluate_all(data, pc, 4);
  REQUIRE(serial.users.size() == parallel.users.size());
  for (std::size_t i = 0; i < serial.users.size(); ++i) {
    CHECK(serial.users[i].user_id == parallel.users[i].user_id);
    CHECK(serial.users[i].eer_value == parallel.users[i].eer_value);
    CHECK(serial.users[i].genuine_scores == parallel.users[i].genuine_scores);
  }
  CHECK(serial.summary.mean == parallel.summary.mean);
}

TEST_CASE("evaluate_user returns train scores on request") {
  SynthConfig cfg;
  cfg.n_users = 6;
  cfg.sessions_per_user = 2;
  cfg.strokes_per_session = 10;
  cfg.seed = 37;
  Dataset d = generate(cfg);
  auto data = build_user_data(d, Direction::kLeft);
  ProtocolConfig pc;
  pc.classifier = ClassifierKind::kKnn;
  EvalOptions opts;
  opts.want_train_scores = true;
  EvalRun run = evaluate_all(data, pc, 1, opts);
  for (const auto& u : run.users) {
    CHECK(!u.train_genuine.empty());
    CHECK(u.train_impostor.size() == u.train_genuine.size());  // balanced negatives
    CHECK(!u.genuine_scores.empty());
    CHECK(!u.impostor_flat().empty());
  }
}
