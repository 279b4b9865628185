// Copyright 2026 The secrel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SECREL_RELEVANCE_H_
#define SECREL_RELEVANCE_H_

#include <filesystem>
#include <span>
#include <vector>

#include "json.hpp"
#include "secrel/corpus.h"
#include "secrel/entity.h"

namespace secrel {

// Logistic regression over document features. With the shipped feature
// extractor the weights are one per entity type, in table order.
struct RelevanceModel {
  std::vector<double> weights = std::vector<double>(kEntityTypeCount, 0.0);
  double bias = 0.0;
  double threshold = 0.5;  // keep a document when predict() >= threshold

  bool operator==(const RelevanceModel &) const = default;
};

// Maps a tagged document to a fixed-length feature vector.
class FeatureExtractor {
 public:
  virtual ~FeatureExtractor() = default;
  virtual std::size_t dimension() const = 0;
  virtual std::vector<double> extract(const Document &document,
                                      std::span<const EntityMention> mentions) const = 0;
};

// Number of mentions of each entity type.
class EntityCountFeatures : public FeatureExtractor {
 public:
  std::size_t dimension() const override { return kEntityTypeCount; }
  std::vector<double> extract(const Document &document,
                              std::span<const EntityMention> mentions) const override;
};

double sigmoid(double z);

double predict(const RelevanceModel &model, std::span<const double> features);
double predict(const RelevanceModel &model, const EntityCounts &counts);

struct LabeledExample {
  std::vector<double> features;
  bool relevant = false;
};

struct TrainOptions {
  double l2 = 0.01;
  int epochs = 500;
  double learning_rate = 0.1;
  double threshold = 0.5;
};

// Mean log loss plus (l2 / 2) * |weights|^2. The bias is not regularized.
double regularized_loss(const RelevanceModel &model, std::span<const LabeledExample> data,
                        double l2);

struct LossGradient {
  std::vector<double> weights;
  double bias = 0.0;
};

LossGradient loss_gradient(const RelevanceModel &model, std::span<const LabeledExample> data,
                           double l2);

// Full-batch gradient descent from zero. Needs both classes present. When
// loss_trace is given it receives the loss before each epoch and after the
// last one.
RelevanceModel train(std::span<const LabeledExample> data, const TrainOptions &options,
                     std::vector<double> *loss_trace = nullptr);

struct FilterResult {
  std::vector<Document> kept;
  std::vector<Document> dropped;
};

// mentions[i] are the mentions of documents[i]. Order is preserved on both
// sides.
FilterResult filter_corpus(const RelevanceModel &model, std::span<const Document> documents,
                           std::span<const std::vector<EntityMention>> mentions,
                           const FeatureExtractor &features = EntityCountFeatures());

nlohmann::json model_to_json(const RelevanceModel &model);
RelevanceModel model_from_json(const nlohmann::json &j);
void save_model(const RelevanceModel &model, const std::filesystem::path &path);
RelevanceModel load_model(const std::filesystem::path &path);

}  // namespace secrel

#endif  // SECREL_RELEVANCE_H_
