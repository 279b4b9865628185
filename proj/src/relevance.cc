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

#include "secrel/relevance.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace secrel {
namespace {

double linear(const RelevanceModel &model, std::span<const double> x) {
  if (x.size() != model.weights.size()) {
    throw Error("feature vector has " + std::to_string(x.size()) + " entries, model expects " +
                std::to_string(model.weights.size()));
  }
  double z = model.bias;
  for (std::size_t i = 0; i < x.size(); ++i) z += model.weights[i] * x[i];
  return z;
}

// log(1 + exp(t)) without overflow.
double softplus(double t) { return std::log1p(std::exp(-std::abs(t))) + std::max(t, 0.0); }

void validate(std::span<const LabeledExample> data) {
  if (data.empty()) throw Error("train: no labeled documents");
  bool pos = false, neg = false;
  for (const LabeledExample &ex : data) {
    (ex.relevant ? pos : neg) = true;
    if (ex.features.size() != data[0].features.size()) {
      throw Error("train: inconsistent feature dimensions");
    }
  }
  if (!pos || !neg) throw Error("train: both relevant and irrelevant documents are required");
}

}  // namespace

std::vector<double> EntityCountFeatures::extract(const Document &,
                                                 std::span<const EntityMention> mentions) const {
  EntityCounts counts = entity_type_counts(mentions);
  return {counts.begin(), counts.end()};
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

double predict(const RelevanceModel &model, std::span<const double> features) {
  return sigmoid(linear(model, features));
}

double predict(const RelevanceModel &model, const EntityCounts &counts) {
  std::vector<double> x(counts.begin(), counts.end());
  return predict(model, x);
}

double regularized_loss(const RelevanceModel &model, std::span<const LabeledExample> data,
                        double l2) {
  double total = 0.0;
  for (const LabeledExample &ex : data) {
    double z = linear(model, ex.features);
    total += ex.relevant ? softplus(-z) : softplus(z);
  }
  double norm = 0.0;
  for (double w : model.weights) norm += w * w;
  return total / static_cast<double>(data.size()) + 0.5 * l2 * norm;
}

LossGradient loss_gradient(const RelevanceModel &model, std::span<const LabeledExample> data,
                           double l2) {
  LossGradient g;
  g.weights.assign(model.weights.size(), 0.0);
  for (const LabeledExample &ex : data) {
    double residual = sigmoid(linear(model, ex.features)) - (ex.relevant ? 1.0 : 0.0);
    for (std::size_t i = 0; i < ex.features.size(); ++i) g.weights[i] += residual * ex.features[i];
    g.bias += residual;
  }
  const double n = static_cast<double>(data.size());
  for (std::size_t i = 0; i < g.weights.size(); ++i) {
    g.weights[i] = g.weights[i] / n + l2 * model.weights[i];
  }
  g.bias /= n;
  return g;
}

RelevanceModel train(std::span<const LabeledExample> data, const TrainOptions &options,
                     std::vector<double> *loss_trace) {
  validate(data);
  if (options.l2 < 0) throw Error("train: l2 must be non-negative");
  if (options.epochs <= 0) throw Error("train: epochs must be positive");
  if (!(options.learning_rate > 0)) throw Error("train: learning_rate must be positive");
  if (!(options.threshold > 0 && options.threshold < 1)) {
    throw Error("train: threshold must lie in (0, 1)");
  }

  RelevanceModel model;
  model.weights.assign(data[0].features.size(), 0.0);
  model.threshold = options.threshold;
  for (int epoch = 0; epoch <= options.epochs; ++epoch) {
    double loss = regularized_loss(model, data, options.l2);
    if (!std::isfinite(loss)) {
      throw Error("train: loss is not finite at iteration " + std::to_string(epoch));
    }
    if (loss_trace) loss_trace->push_back(loss);
    if (epoch == options.epochs) break;
    LossGradient g = loss_gradient(model, data, options.l2);
    for (std::size_t i = 0; i < model.weights.size(); ++i) {
      model.weights[i] -= options.learning_rate * g.weights[i];
    }
    model.bias -= options.learning_rate * g.bias;
  }
  return model;
}

FilterResult filter_corpus(const RelevanceModel &model, std::span<const Document> documents,
                           std::span<const std::vector<EntityMention>> mentions,
                           const FeatureExtractor &features) {
  if (documents.size() != mentions.size()) {
    throw Error("filter_corpus: mentions must be given for every document");
  }
  FilterResult result;
  for (std::size_t i = 0; i < documents.size(); ++i) {
    double p = predict(model, features.extract(documents[i], mentions[i]));
    (p >= model.threshold ? result.kept : result.dropped).push_back(documents[i]);
  }
  return result;
}

nlohmann::json model_to_json(const RelevanceModel &model) {
  return {{"weights", model.weights}, {"bias", model.bias}, {"threshold", model.threshold}};
}

RelevanceModel model_from_json(const nlohmann::json &j) {
  RelevanceModel model;
  model.weights = j.at("weights").get<std::vector<double>>();
  model.bias = j.at("bias").get<double>();
  model.threshold = j.value("threshold", 0.5);
  for (double w : model.weights) {
    if (!std::isfinite(w)) throw Error("relevance model: weights must be finite");
  }
  if (!std::isfinite(model.bias)) throw Error("relevance model: bias must be finite");
  if (!(model.threshold > 0 && model.threshold < 1)) {
    throw Error("relevance model: threshold must lie in (0, 1)");
  }
  return model;
}

void save_model(const RelevanceModel &model, const std::filesystem::path &path) {
  write_file(path.string(), model_to_json(model).dump(2) + "\n");
}

RelevanceModel load_model(const std::filesystem::path &path) {
  std::string text = read_file(path.string());
  try {
    return model_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception &e) {
    throw Error(path.string() + ": " + e.what());
  }
}

}  // namespace secrel
