// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "core/rng.hpp"

using namespace touchbench;

TEST_CASE("splitmix64 reference values") {
  // Published test vectors for seed 0x1234567.
  Rng r(0x1234567ULL);
  CHECK(r.next_u64() == 0x3a34ce6380fc0bc5ULL);
  Rng z(0);
  CHECK(z.next_u64() == 0xe220a8397b1dcdafULL);
  CHECK(z.next_u64() == 0x6e789e6aa1b965f4ULL);
  CHECK(z.next_u64() == 0x06c45d188009454fULL);
}

TEST_CASE("below stays in range and is roughly uniform") {
  Rng r(42);
  std::vector<std::size_t> counts(7, 0);
  const std::size_t n = 70000;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t v = r.below(7);
    REQUIRE(v < 7);
    ++counts[static_cast<std::size_t>(v)];
  }
  // 5 sigma binomial band around n/7.
  const double mu = static_cast<double>(n) / 7.0;
  const double sd = std::sqrt(mu * (1.0 - 1.0 / 7.0));
  for (std::size_t c : counts) CHECK(std::abs(static_cast<double>(c) - mu) < 5.0 * sd);
}

TEST_CASE("fork does not advance the parent and separates streams") {
  Rng a(9);
  Rng b(9);
  (void)a.fork("x");
  (void)a.fork(123u);
  CHECK(a.next_u64() == b.next_u64());

  Rng p(9);
  Rng c1 = p.fork("alpha");
  Rng c2 = p.fork("beta");
  Rng c3 = p.fork("alpha");
  CHECK(c1.next_u64() != c2.next_u64());
  Rng c1b = p.fork("alpha");
  CHECK(c3.next_u64() == c1b.next_u64());
}

TEST_CASE("normal moments") {
  Rng r(7);
  double s = 0.0, s2 = 0.0;
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    const double v = r.normal();
    s += v;
    s2 += v * v;
  }
  CHECK(std::abs(s / n) < 0.02);
  CHECK(std::abs(s2 / n - 1.0) < 0.03);
}

TEST_CASE("shuffle is a permutation") {
  Rng r(5);
  std::vector<int> v(100);
  for (int i = 0; i < 100; ++i) v[i] = i;
  auto w = v;
  r.shuffle(w);
  CHECK(w != v);  // astronomically unlikely to be identity
  std::sort(w.begin(), w.end());
  CHECK(w == v);
}

TEST_CASE("sample_indices draws k distinct indices") {
  Rng r(11);
  for (int rep = 0; rep < 50; ++rep) {
    auto s = r.sample_indices(20, 8);
    REQUIRE(s.size() == 8);
    std::set<std::size_t> uniq(s.begin(), s.end());
    CHECK(uniq.size() == 8);
    for (std::size_t i : s) CHECK(i < 20);
  }
}

TEST_CASE("sample_indices selection frequency matches the binomial oracle") {
  // Each index should appear with probability k/n.
  const std::size_t n = 30, k = 10, reps = 20000;
  std::vector<std::size_t> hits(n, 0);
  Rng r(123);
  for (std::size_t rep = 0; rep < reps; ++rep)
    for (std::size_t i : r.sample_indices(n, k)) ++hits[i];
  const double p = static_cast<double>(k) / static_cast<double>(n);
  const double sd = std::sqrt(reps * p * (1 - p));
  for (std::size_t h : hits)
    CHECK(std::abs(static_cast<double>(h) - reps * p) < 5.0 * sd);
}
