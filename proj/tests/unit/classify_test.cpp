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
#include <string>
#include <vector>

#include "core/classify.hpp"
#include "core/error.hpp"
#include "core/rng.hpp"

using namespace touchbench;

namespace {

// Two Gaussian blobs, +1 centered at +mu, -1 at -mu.
void blobs(Rng& rng, std::size_t n_per, std::size_t d, double mu, Matrix* x,
           std::vector<int>* y) {
  for (std::size_t c = 0; c < 2; ++c) {
    const double center = c == 0 ? mu : -mu;
    for (std::size_t i = 0; i < n_per; ++i) {
      std::vector<double> row(d);
      for (auto& v : row) v = center + rng.normal();
      x->push_back(row);
      y->push_back(c == 0 ? 1 : -1);
    }
  }
}

}  // namespace

TEST_CASE("svm satisfies the KKT conditions at the reported tolerance") {
  Rng rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    Matrix x;
    std::vector<int> y;
    blobs(rng, 15, 4, 0.8, &x, &y);
    SvmParams p;
    RbfSvm m = RbfSvm::train(x, y, p);
    const auto f = m.decision(x);
    const auto& a = m.alphas();
    REQUIRE(a.size() == x.size());
    // Looser numeric slack on top of the working tolerance for the bias
    // averaging step.
    const double tol = p.kkt_tol + 1e-2;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double margin = y[i] * f[i];
      if (a[i] <= 1e-12) {
        CHECK(margin >= 1.0 - tol);
      } else if (a[i] >= p.c - 1e-12) {
        CHECK(margin <= 1.0 + tol);
      } else {
        CHECK(std::abs(margin - 1.0) <= tol);
      }
    }
  }
}

TEST_CASE("svm dual objective trace is non-decreasing") {
  Rng rng(8);
  Matrix x;
  std::vector<int> y;
  blobs(rng, 25, 5, 0.5, &x, &y);
  std::vector<double> trace;
  SvmParams p;
  p.objective_trace = &trace;
  (void)RbfSvm::train(x, y, p);
  REQUIRE(trace.size() >= 2);
  for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] >= trace[i - 1] - 1e-10);
}

TEST_CASE("svm on a point-symmetric problem scores near zero at the origin") {
  Rng rng(12);
  Matrix x;
  std::vector<int> y;
  for (int i = 0; i < 30; ++i) {
    std::vector<double> row = {1.0 + rng.normal(), 0.5 + rng.normal(), rng.normal()};
    x.push_back(row);
    y.push_back(1);
    for (auto& v : row) v = -v;
    x.push_back(row);
    y.push_back(-1);
  }
  RbfSvm m = RbfSvm::train(x, y, SvmParams{});
  CHECK(std::abs(m.decision(std::vector<double>{0.0, 0.0, 0.0})) < 1e-3);
}

TEST_CASE("svm separates xor clusters") {
  Rng rng(17);
  Matrix x;
  std::vector<int> y;
  for (int q = 0; q < 4; ++q) {
    const double cx = (q & 1) ? 2.0 : -2.0;
    const double cy = (q & 2) ? 2.0 : -2.0;
    for (int i = 0; i < 20; ++i) {
      x.push_back({cx + 0.3 * rng.normal(), cy + 0.3 * rng.normal()});
      y.push_back(cx * cy > 0 ? 1 : -1);
    }
  }
  RbfSvm m = RbfSvm::train(x, y, SvmParams{});
  const auto f = m.decision(x);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(f[i] * y[i] > 0.0);
}

TEST_CASE("svm label flip negates the decision function") {
  Rng rng(23);
  Matrix x;
  std::vector<int> y;
  blobs(rng, 20, 3, 0.6, &x, &y);
  std::vector<int> yf = y;
  for (auto& v : yf) v = -v;
  RbfSvm a = RbfSvm::train(x, y, SvmParams{});
  RbfSvm b = RbfSvm::train(x, yf, SvmParams{});
  Matrix probes;
  for (int i = 0; i < 20; ++i)
    probes.push_back({rng.normal(), rng.normal(), rng.normal()});
  const auto fa = a.decision(probes);
  const auto fb = b.decision(probes);
  for (std::size_t i = 0; i < probes.size(); ++i)
    CHECK(fa[i] == doctest::Approx(-fb[i]).epsilon(1e-6).scale(1.0));
}

TEST_CASE("scale_gamma matches its definition") {
  Matrix x = {{0.0, 0.0}, {2.0, 4.0}};
  // Population variances 1 and 4, mean 2.5, d = 2 -> gamma = 1/5.
  CHECK(scale_gamma(x) == doctest::Approx(0.2));
  Matrix flat = {{1.0}, {1.0}};
  CHECK(scale_gamma(flat) == doctest::Approx(1.0));  // 1/d fallback
}

TEST_CASE("mlp analytic gradient matches finite differences") {
  Rng rng(6);
  Matrix x;
  std::vector<int> y;
  blobs(rng, 12, 4, 0.7, &x, &y);
  MlpParams p;
  p.hidden = {6, 4};
  p.epochs = 3;
  Mlp m = Mlp::train(x, y, p, rng.fork("mlp"));

  const auto grad = m.grad_eval_mode(x, y);
  REQUIRE(grad.size() == m.parameter_count());
  const double h = 1e-6;
  double worst = 0.0;
  // Spot check a spread of parameters across every layer.
  for (std::size_t i = 0; i < grad.size(); i += 7) {
    const double orig = m.get_parameter(i);
    m.set_parameter(i, orig + h);
    const double lp = m.loss_eval_mode(x, y);
    m.set_parameter(i, orig - h);
    const double lm = m.loss_eval_mode(x, y);
    m.set_parameter(i, orig);
    const double fd = (lp - lm) / (2.0 * h);
    const double rel = std::abs(fd - grad[i]) / std::max(1.0, std::abs(fd));
    worst = std::max(worst, rel);
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("mlp training is seed-reproducible") {
  Rng rng(19);
  Matrix x;
  std::vector<int> y;
  blobs(rng, 15, 3, 1.0, &x, &y);
  MlpParams p;
  p.hidden = {8};
  p.epochs = 5;
  Mlp a = Mlp::train(x, y, p, Rng(42));
  Mlp b = Mlp::train(x, y, p, Rng(42));
  Mlp c = Mlp::train(x, y, p, Rng(43));
  const auto sa = a.score(x), sb = b.score(x), sc = c.score(x);
  CHECK(sa == sb);
  CHECK(sa != sc);
  for (double s : sa) {
    CHECK(s > 0.0);
    CHECK(s < 1.0);
  }
}

TEST_CASE("forest separates blobs and is seed-reproducible") {
  Rng rng(29);
  Matrix x;
  std::vector<int> y;
  blobs(rng, 40, 4, 1.5, &x, &y);
  ForestParams p;
  p.n_trees = 30;
  RandomForest a = RandomForest::train(x, y, p, Rng(7));
  RandomForest b = RandomForest::train(x, y, p, Rng(7));
  CHECK(a.score(x) == b.score(x));

  Matrix xt;
  std::vector<int> yt;
  blobs(rng, 30, 4, 1.5, &xt, &yt);
  std::size_t correct = 0;
  const auto st = a.score(xt);
  for (std::size_t i = 0; i < xt.size(); ++i)
    if ((st[i] >= 0.5) == (yt[i] == 1)) ++correct;
  CHECK(static_cast<double>(correct) / static_cast<double>(xt.size()) > 0.9);
}

TEST_CASE("knn hand examples and clamping") {
  Matrix x = {{0.0}, {1.0}, {10.0}};
  std::vector<int> y = {1, -1, -1};
  Knn k1 = Knn::train(x, y, 1);
  CHECK(k1.score(std::vector<double>{0.2}) == doctest::Approx(1.0));
  CHECK(k1.score(std::vector<double>{9.0}) == doctest::Approx(0.0));
  Knn k2 = Knn::train(x, y, 2);
  CHECK(k2.score(std::vector<double>{0.4}) == doctest::Approx(0.5));
  // k larger than the set clamps to 3.
  Knn k9 = Knn::train(x, y, 9);
  CHECK(k9.score(std::vector<double>{0.0}) == doctest::Approx(1.0 / 3.0));
  // Equidistant neighbours break ties on the lower training index.
  Matrix xt = {{-1.0}, {1.0}, {1.0}};
  std::vector<int> yt = {1, -1, -1};
  Knn kt = Knn::train(xt, yt, 1);
  CHECK(kt.score(std::vector<double>{0.0}) == doctest::Approx(1.0));
}

TEST_CASE("knn matches a brute-force oracle") {
  Rng rng(33);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 5 + rng.below(40), d = 3;
    Matrix x;
    std::vector<int> y;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> row(d);
      for (auto& v : row) v = rng.normal();
      x.push_back(row);
      y.push_back(rng.below(2) ? 1 : -1);
    }
    const std::size_t k = 1 + rng.below(n + 2);
    Knn m = Knn::train(x, y, k);
    const std::size_t kc = std::min(k, n);
    for (int probe = 0; probe < 5; ++probe) {
      std::vector<double> q(d);
      for (auto& v : q) v = rng.normal();
      std::vector<std::pair<double, std::size_t>> dist;
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0;
        for (std::size_t j = 0; j < d; ++j) s += (x[i][j] - q[j]) * (x[i][j] - q[j]);
        dist.push_back({s, i});
      }
      std::sort(dist.begin(), dist.end());
      std::size_t pos = 0;
      for (std::size_t i = 0; i < kc; ++i)
        if (y[dist[i].second] == 1) ++pos;
      CHECK(m.score(q) == doctest::Approx(static_cast<double>(pos) / kc));
    }
  }
}

TEST_CASE("model json round trip preserves scores exactly") {
  Rng rng(41);
  Matrix x;
  std::vector<int> y;
  blobs(rng, 20, 4, 0.8, &x, &y);
  TrainSet ts{x, y};
  Hyperparams hp;
  hp.mlp.epochs = 3;
  hp.mlp.hidden = {6};
  hp.forest.n_trees = 10;
  for (ClassifierKind kind : {ClassifierKind::kSvmRbf, ClassifierKind::kRandomForest,
                              ClassifierKind::kMlp, ClassifierKind::kKnn}) {
    Model m = Model::train(kind, ts, hp, Rng(5));
    Model m2 = Model::from_json_string(m.to_json_string());
    CHECK(m2.kind() == kind);
    CHECK(m.score(x) == m2.score(x));
  }
}

TEST_CASE("classifier names round trip") {
  for (ClassifierKind k : {ClassifierKind::kSvmRbf, ClassifierKind::kRandomForest,
                           ClassifierKind::kMlp, ClassifierKind::kKnn})
    CHECK(classifier_from_string(to_string(k)) == k);
  CHECK(std::string(to_string(ClassifierKind::kSvmRbf)) == "svm");
  CHECK_THROWS_AS(classifier_from_string("perceptron"), UsageError);
}

TEST_CASE("multiclass ovr separates three blobs") {
  Rng rng(51);
  Matrix x;
  std::vector<int> labels;
  const double centers[3][2] = {{0, 4}, {4, -2}, {-4, -2}};
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < 25; ++i) {
      x.push_back({centers[c][0] + 0.5 * rng.normal(), centers[c][1] + 0.5 * rng.normal()});
      labels.push_back(c);
    }
  MulticlassModel m = MulticlassModel::train(x, labels, Hyperparams{}, Rng(2));
  CHECK(m.num_classes() == 3);
  const auto pred = m.predict(x);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (pred[i] == labels[i]) ++correct;
  CHECK(correct == x.size());

  // Shuffled labels carry no signal; held-out accuracy sits near chance.
  std::vector<int> shuffled = labels;
  Rng sh(9);
  sh.shuffle(shuffled);
  MulticlassModel null_m = MulticlassModel::train(x, shuffled, Hyperparams{}, Rng(2));
  Matrix probes;
  std::vector<int> probe_labels;
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < 40; ++i) {
      probes.push_back({centers[c][0] + 0.5 * rng.normal(), centers[c][1] + 0.5 * rng.normal()});
      probe_labels.push_back(c);
    }
  const auto null_pred = null_m.predict(probes);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < probes.size(); ++i)
    if (null_pred[i] == probe_labels[i]) ++hits;
  const double acc = static_cast<double>(hits) / static_cast<double>(probes.size());
  // Small-sample label noise leaves some residual blob-label association, so
  // the null sits near chance rather than exactly on it.
  CHECK(acc < 0.6);
}

TEST_CASE("confusion matrix tallies actual by predicted") {
  auto cm = confusion_matrix({0, 0, 1, 2, 2, 2}, {0, 1, 1, 2, 0, 2}, 3);
  REQUIRE(cm.size() == 3);
  CHECK(cm[0][0] == 1);
  CHECK(cm[0][1] == 1);
  CHECK(cm[1][1] == 1);
  CHECK(cm[2][2] == 2);
  CHECK(cm[2][0] == 1);
  CHECK(cm[1][0] == 0);
}
