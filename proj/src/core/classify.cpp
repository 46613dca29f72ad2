// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "core/classify.hpp"

#include <json.hpp>

#include "core/error.hpp"

namespace touchbench {

using nlohmann::json;

const char* to_string(ClassifierKind k) {
  switch (k) {
    case ClassifierKind::kSvmRbf: return "svm";
    case ClassifierKind::kRandomForest: return "forest";
    case ClassifierKind::kMlp: return "mlp";
    case ClassifierKind::kKnn: return "knn";
  }
  return "?";
}

ClassifierKind classifier_from_string(const std::string& s) {
  if (s == "svm") return ClassifierKind::kSvmRbf;
  if (s == "forest") return ClassifierKind::kRandomForest;
  if (s == "mlp") return ClassifierKind::kMlp;
  if (s == "knn") return ClassifierKind::kKnn;
  throw UsageError("unknown classifier '" + s + "' (svm|forest|mlp|knn)");
}

Model Model::train(ClassifierKind kind, const TrainSet& ts, const Hyperparams& hp,
                   const Rng& rng) {
  Model m;
  m.kind_ = kind;
  switch (kind) {
    case ClassifierKind::kSvmRbf:
      m.impl_ = RbfSvm::train(ts.x, ts.y, hp.svm);
      break;
    case ClassifierKind::kRandomForest:
      m.impl_ = RandomForest::train(ts.x, ts.y, hp.forest, rng);
      break;
    case ClassifierKind::kMlp:
      m.impl_ = Mlp::train(ts.x, ts.y, hp.mlp, rng);
      break;
    case ClassifierKind::kKnn:
      m.impl_ = Knn::train(ts.x, ts.y, hp.knn_k);
      break;
  }
  return m;
}

double Model::score_one(const std::vector<double>& x) const {
  return std::visit([&](const auto& impl) -> double {
    if constexpr (std::is_same_v<std::decay_t<decltype(impl)>, RbfSvm>)
      return impl.decision(x);
    else
      return impl.score(x);
  }, impl_);
}

std::vector<double> Model::score(const Matrix& x) const {
  std::vector<double> out;
  out.reserve(x.size());
  for (const auto& row : x) out.push_back(score_one(row));
  return out;
}

namespace {

json svm_to_json(const RbfSvm& m) {
  return json{{"support", m.support_}, {"coef", m.coef_},   {"bias", m.bias_},
              {"gamma", m.gamma_},     {"dim", m.dim_}};
}

RbfSvm svm_from_json(const json& j) {
  RbfSvm m;
  m.support_ = j.at("support").get<Matrix>();
  m.coef_ = j.at("coef").get<std::vector<double>>();
  m.bias_ = j.at("bias").get<double>();
  m.gamma_ = j.at("gamma").get<double>();
  m.dim_ = j.at("dim").get<std::size_t>();
  return m;
}

json forest_to_json(const RandomForest& m) {
  json trees = json::array();
  for (const auto& t : m.trees_) {
    json nodes = json::array();
    for (const auto& nd : t)
      nodes.push_back({nd.feature, nd.threshold, nd.left, nd.right, nd.positive_frac});
    trees.push_back(nodes);
  }
  return json{{"trees", trees}, {"dim", m.dim_}};
}

RandomForest forest_from_json(const json& j) {
  RandomForest m;
  m.dim_ = j.at("dim").get<std::size_t>();
  for (const auto& t : j.at("trees")) {
    RandomForest::Tree tree;
    for (const auto& nd : t) {
      RandomForest::Node node;
      node.feature = nd.at(0).get<int>();
      node.threshold = nd.at(1).get<double>();
      node.left = nd.at(2).get<int>();
      node.right = nd.at(3).get<int>();
      node.positive_frac = nd.at(4).get<double>();
      tree.push_back(node);
    }
    m.trees_.push_back(std::move(tree));
  }
  return m;
}

json mlp_to_json(const Mlp& m) {
  json layers = json::array();
  for (const auto& l : m.layers_) {
    layers.push_back({{"in", l.in},
                      {"out", l.out},
                      {"w", l.w},
                      {"b", l.b},
                      {"has_bn", l.has_bn},
                      {"gamma", l.gamma},
                      {"beta", l.beta},
                      {"run_mean", l.run_mean},
                      {"run_var", l.run_var}});
  }
  return json{{"layers", layers}, {"dim", m.dim_}, {"bn_eps", m.params_.bn_eps}};
}

Mlp mlp_from_json(const json& j) {
  Mlp m;
  m.dim_ = j.at("dim").get<std::size_t>();
  m.params_.bn_eps = j.at("bn_eps").get<double>();
  for (const auto& lj : j.at("layers")) {
    Mlp::Layer l;
    l.in = lj.at("in").get<std::size_t>();
    l.out = lj.at("out").get<std::size_t>();
    l.w = lj.at("w").get<std::vector<double>>();
    l.b = lj.at("b").get<std::vector<double>>();
    l.has_bn = lj.at("has_bn").get<bool>();
    l.gamma = lj.at("gamma").get<std::vector<double>>();
    l.beta = lj.at("beta").get<std::vector<double>>();
    l.run_mean = lj.at("run_mean").get<std::vector<double>>();
    l.run_var = lj.at("run_var").get<std::vector<double>>();
    m.layers_.push_back(std::move(l));
  }
  return m;
}

json knn_to_json(const Knn& m) { return json{{"x", m.x_}, {"y", m.y_}, {"k", m.k_}}; }

Knn knn_from_json(const json& j) {
  Knn m;
  m.x_ = j.at("x").get<Matrix>();
  m.y_ = j.at("y").get<std::vector<int>>();
  m.k_ = j.at("k").get<std::size_t>();
  return m;
}

constexpr int kModelFormatVersion = 1;

}  // namespace

std::string Model::to_json_string() const {
  json j;
  j["format_version"] = kModelFormatVersion;
  j["kind"] = to_string(kind_);
  std::visit([&](const auto& impl) {
    using T = std::decay_t<decltype(impl)>;
    if constexpr (std::is_same_v<T, RbfSvm>) j["model"] = svm_to_json(impl);
    else if constexpr (std::is_same_v<T, RandomForest>) j["model"] = forest_to_json(impl);
    else if constexpr (std::is_same_v<T, Mlp>) j["model"] = mlp_to_json(impl);
    else j["model"] = knn_to_json(impl);
  }, impl_);
  return j.dump();
}

Model Model::from_json_string(const std::string& blob) {
  json j = json::parse(blob);
  if (j.at("format_version").get<int>() != kModelFormatVersion)
    throw DataError("unsupported model format version");
  Model m;
  m.kind_ = classifier_from_string(j.at("kind").get<std::string>());
  const json& mj = j.at("model");
  switch (m.kind_) {
    case ClassifierKind::kSvmRbf: m.impl_ = svm_from_json(mj); break;
    case ClassifierKind::kRandomForest: m.impl_ = forest_from_json(mj); break;
    case ClassifierKind::kMlp: m.impl_ = mlp_from_json(mj); break;
    case ClassifierKind::kKnn: m.impl_ = knn_from_json(mj); break;
  }
  return m;
}

MulticlassModel MulticlassModel::train(const Matrix& x, const std::vector<int>& labels,
                                       const Hyperparams& hp, const Rng& rng) {
  (void)rng;
  if (x.empty() || labels.size() != x.size())
    throw PreconditionError("multiclass: empty or inconsistent training set");
  int maxl = 0;
  for (int l : labels) {
    if (l < 0) throw PreconditionError("multiclass: labels must be >= 0");
    maxl = std::max(maxl, l);
  }
  const std::size_t k = static_cast<std::size_t>(maxl) + 1;
  if (k < 2) throw PreconditionError("multiclass: need K >= 2 classes");

  MulticlassModel m;
  m.ovr_.reserve(k);
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<int> y(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
      y[i] = labels[i] == static_cast<int>(c) ? 1 : -1;
    m.ovr_.push_back(RbfSvm::train(x, y, hp.svm));
  }
  return m;
}

int MulticlassModel::predict_one(const std::vector<double>& x) const {
  int best = 0;
  double best_score = -1e300;
  for (std::size_t c = 0; c < ovr_.size(); ++c) {
    const double s = ovr_[c].decision(x);
    if (s > best_score) {
      best_score = s;
      best = static_cast<int>(c);
    }
  }
  return best;
}

std::vector<int> MulticlassModel::predict(const Matrix& x) const {
  std::vector<int> out;
  out.reserve(x.size());
  for (const auto& row : x) out.push_back(predict_one(row));
  return out;
}

std::vector<std::vector<std::size_t>> confusion_matrix(const std::vector<int>& actual,
                                                       const std::vector<int>& predicted,
                                                       std::size_t k) {
  std::vector<std::vector<std::size_t>> cm(k, std::vector<std::size_t>(k, 0));
  for (std::size_t i = 0; i < actual.size(); ++i)
    ++cm[static_cast<std::size_t>(actual[i])][static_cast<std::size_t>(predicted[i])];
  return cm;
}

}  // namespace touchbench
