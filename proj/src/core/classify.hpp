// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef TOUCHBENCH_CORE_CLASSIFY_HPP_
#define TOUCHBENCH_CORE_CLASSIFY_HPP_

#include <string>
#include <variant>
#include <vector>

#include "core/features.hpp"
#include "core/forest.hpp"
#include "core/knn.hpp"
#include "core/mlp.hpp"
#include "core/rng.hpp"
#include "core/svm.hpp"

namespace touchbench {

enum class ClassifierKind { kSvmRbf, kRandomForest, kMlp, kKnn };

const char* to_string(ClassifierKind k);
ClassifierKind classifier_from_string(const std::string& s);

struct Hyperparams {
  SvmParams svm;
  ForestParams forest;
  MlpParams mlp;
  std::size_t knn_k = 18;
};

struct TrainSet {
  Matrix x;
  std::vector<int> y;  // +1 genuine, -1 impostor
};

// Per-user binary verifier. Scores are real valued, higher = more genuine,
// whatever the backing classifier.
class Model {
 public:
  static Model train(ClassifierKind kind, const TrainSet& ts, const Hyperparams& hp,
                     const Rng& rng);

  double score_one(const std::vector<double>& x) const;
  std::vector<double> score(const Matrix& x) const;

  ClassifierKind kind() const { return kind_; }

  std::string to_json_string() const;
  static Model from_json_string(const std::string& blob);

 private:
  ClassifierKind kind_ = ClassifierKind::kSvmRbf;
  std::variant<RbfSvm, RandomForest, Mlp, Knn> impl_;
  friend class MulticlassModel;
};

// One-vs-rest RBF-SVM ensemble for device identification.
class MulticlassModel {
 public:
  // Labels in 0..K-1, K >= 2, classes balanced by the caller.
  static MulticlassModel train(const Matrix& x, const std::vector<int>& labels,
                               const Hyperparams& hp, const Rng& rng);

  int predict_one(const std::vector<double>& x) const;
  std::vector<int> predict(const Matrix& x) const;
  std::size_t num_classes() const { return ovr_.size(); }

 private:
  std::vector<RbfSvm> ovr_;
};

// confusion[actual][predicted]
std::vector<std::vector<std::size_t>> confusion_matrix(const std::vector<int>& actual,
                                                       const std::vector<int>& predicted,
                                                       std::size_t k);

}  // namespace touchbench

#endif  // TOUCHBENCH_CORE_CLASSIFY_HPP_
