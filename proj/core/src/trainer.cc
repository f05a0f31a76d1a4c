/*
 * Copyright 2026 The zslvec Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "zslvec/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <utility>

#include <fmt/format.h>
#include <json.hpp>

#include "zslvec/eval.h"
#include "zslvec/ranking_loss.h"

namespace zslvec {
namespace {

using json = nlohmann::ordered_json;

// Everything the epoch loop needs, gathered once from the dataset.
struct TrainingSet {
  DenseMatrix features;  // training images only
  DenseMatrix pooled;    // pooled attribute embedding per training image
  std::vector<std::size_t> labels;  // index into seen classes
  DenseMatrix seen_class_vectors;
  DenseMatrix margins;  // seen x seen, empty for 0/1
};

TrainingSet PrepareTrainingSet(const ZslDataset& dataset,
                               const LabelSpaces& spaces,
                               const TrainConfig& config, Warnings* warnings) {
  dataset.ValidateFor(config.mode);
  if (spaces.class_vectors.rows() != dataset.num_classes() ||
      spaces.attribute_vectors.rows() != dataset.num_attributes()) {
    throw Error(ErrorCode::kDimension,
                fmt::format("label spaces ({} classes, {} attributes) do not "
                            "match the dataset ({}, {})",
                            spaces.class_vectors.rows(),
                            spaces.attribute_vectors.rows(),
                            dataset.num_classes(), dataset.num_attributes()));
  }
  const std::vector<std::size_t> train = dataset.TrainImages();
  if (train.empty()) {
    throw Error(ErrorCode::kValidation, "dataset has no training images");
  }
  std::vector<std::size_t> local(dataset.num_classes(), 0);
  for (std::size_t s = 0; s < dataset.seen_classes.size(); ++s) {
    local[dataset.seen_classes[s]] = s;
  }

  TrainingSet set;
  set.features = GatherRows(dataset.features, train);
  set.pooled = PoolAttributeRows(
      TrainingAttributeWeights(dataset, config, warnings),
      spaces.attribute_vectors, warnings);
  for (auto i : train) set.labels.push_back(local[dataset.labels[i]]);
  set.seen_class_vectors =
      GatherRows(spaces.class_vectors, dataset.seen_classes);
  if (!config.margins.empty()) {
    if (config.margins.rows() != dataset.num_classes() ||
        config.margins.cols() != dataset.num_classes()) {
      throw Error(ErrorCode::kDimension,
                  fmt::format("margin matrix {} for {} classes",
                              config.margins.ShapeString(),
                              dataset.num_classes()));
    }
    const auto& seen = dataset.seen_classes;
    set.margins = DenseMatrix(seen.size(), seen.size());
    for (std::size_t a = 0; a < seen.size(); ++a) {
      for (std::size_t b = 0; b < seen.size(); ++b) {
        set.margins(a, b) = config.margins(seen[a], seen[b]);
      }
    }
  }
  return set;
}

struct JointEvaluation {
  RankingLossResult ranking;
  CrossEntropyResult ce;
  double total = 0.0;
};

JointEvaluation EvaluateJoint(const JointModel& model, const TrainConfig& cfg,
                              const DenseMatrix& margins,
                              const DenseMatrix& features,
                              const DenseMatrix& pooled,
                              std::span<const std::size_t> labels,
                              const DenseMatrix& class_vectors,
                              bool compute_gradients) {
  RankingLossOptions rank_opts;
  rank_opts.lambda = cfg.lambda;
  rank_opts.margins = margins;
  rank_opts.mean_reduction = cfg.mean_reduction;
  CrossEntropyOptions ce_opts;
  ce_opts.l2_bilinear = cfg.EffectiveLambdaBilinear();
  ce_opts.mean_reduction = cfg.mean_reduction;
  ce_opts.strict_paper_softmax = cfg.strict_paper_softmax;

  JointEvaluation out;
  out.ranking = RankingLoss(model.transform, pooled, labels, class_vectors,
                            rank_opts, compute_gradients);
  out.ce = CrossEntropyLoss(model, features, labels, class_vectors, ce_opts,
                            compute_gradients);
  out.total = out.ranking.loss + cfg.ce_weight * out.ce.data_loss +
              out.ce.regularizer;
  return out;
}

}  // namespace

void TrainConfig::Validate() const {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::kConfig, msg);
  };
  if (!(learning_rate > 0.0)) fail("learning_rate must be > 0");
  if (!(lambda >= 0.0)) fail("lambda must be >= 0");
  if (lambda_bilinear && !(*lambda_bilinear >= 0.0)) {
    fail("lambda_bilinear must be >= 0");
  }
  if (!(ce_weight >= 0.0)) fail("ce_weight must be >= 0");
  if (hidden_widths.empty()) fail("hidden_widths must not be empty");
  for (auto w : hidden_widths) {
    if (w == 0) fail("hidden widths must be positive");
  }
  if (batch_size == 0) fail("batch_size must be positive");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) ||
      !(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    fail("adam betas must lie in [0, 1)");
  }
  if (!(adam_epsilon > 0.0)) fail("adam_epsilon must be > 0");
  if (!(leaky_slope >= 0.0)) fail("leaky_slope must be >= 0");
}

TransformNetConfig TrainConfig::NetConfig(std::size_t word_dim,
                                          std::size_t hidden_width) const {
  TransformNetConfig net;
  net.input_dim = word_dim;
  net.hidden_widths.assign(hidden_layers, hidden_width);
  net.output_dim = output_dim == 0 ? word_dim : output_dim;
  net.leaky_slope = leaky_slope;
  return net;
}

AdamConfig TrainConfig::Adam() const {
  return AdamConfig{learning_rate, adam_beta1, adam_beta2, adam_epsilon};
}

std::string TrainConfig::ToJson() const {
  json j;
  j["mode"] = std::string(TrainingModeName(mode));
  j["learning_rate"] = learning_rate;
  j["epochs"] = epochs;
  j["batch_size"] = batch_size;
  j["lambda"] = lambda;
  j["lambda_bilinear"] = EffectiveLambdaBilinear();
  j["ce_weight"] = ce_weight;
  j["hidden_widths"] = hidden_widths;
  j["hidden_layers"] = hidden_layers;
  j["output_dim"] = output_dim;
  j["leaky_slope"] = leaky_slope;
  j["seed"] = seed;
  j["adam_beta1"] = adam_beta1;
  j["adam_beta2"] = adam_beta2;
  j["adam_epsilon"] = adam_epsilon;
  j["patience"] = patience;
  j["mean_reduction"] = mean_reduction;
  j["strict_paper_softmax"] = strict_paper_softmax;
  j["custom_margins"] = !margins.empty();
  return j.dump();
}

void WriteTrainReport(std::ostream& out, const TrainReport& report) {
  for (const auto& e : report.epochs) {
    json j;
    j["epoch"] = e.epoch;
    j["ranking_loss"] = e.ranking_loss;
    j["hinge"] = e.hinge;
    j["ce_loss"] = e.ce_loss;
    j["total"] = e.total;
    j["satisfaction_rate"] = e.satisfaction_rate;
    j["train_accuracy"] = e.train_accuracy;
    out << j.dump() << '\n';
  }
}

DenseMatrix TrainingAttributeWeights(const ZslDataset& dataset,
                                     const TrainConfig& config,
                                     Warnings* warnings) {
  const std::vector<std::size_t> train = dataset.TrainImages();
  if (config.mode == TrainingMode::kPbt) {
    if (!dataset.predicate_matrix) {
      throw Error(ErrorCode::kValidation,
                  "PBT training needs a predicate matrix");
    }
    std::vector<std::size_t> rows;
    rows.reserve(train.size());
    for (auto i : train) rows.push_back(dataset.labels[i]);
    return GatherRows(*dataset.predicate_matrix, rows);
  }
  if (dataset.attribute_scores) {
    return GatherRows(*dataset.attribute_scores, train);
  }
  if (!dataset.predicate_matrix) {
    throw Error(ErrorCode::kValidation,
                "IBT training needs attribute scores or a predicate matrix");
  }
  Warn(warnings,
       "no per-image attribute scores; fitting logistic attribute scorers on "
       "training features with predicate-derived targets");
  std::vector<std::size_t> rows;
  for (auto i : train) rows.push_back(dataset.labels[i]);
  const DenseMatrix features = GatherRows(dataset.features, train);
  const DenseMatrix targets = GatherRows(*dataset.predicate_matrix, rows);
  AttributeScorer scorer =
      TrainAttributeScorer(features, targets, config.attribute_scorer);
  return scorer.Predict(features);
}

TrainResult TrainWithWidth(const ZslDataset& dataset, const LabelSpaces& spaces,
                           const TrainConfig& config, std::size_t hidden_width,
                           Warnings* warnings) {
  config.Validate();
  const auto start = std::chrono::steady_clock::now();
  const TrainingSet set = PrepareTrainingSet(dataset, spaces, config, warnings);
  const std::size_t word_dim = spaces.class_vectors.cols();

  TrainResult result;
  result.model = JointModel::Create(config.NetConfig(word_dim, hidden_width),
                                    dataset.features.cols(), config.seed);
  result.report.selected_hidden_width = hidden_width;

  const AdamConfig adam = config.Adam();
  AdamState state;
  // Shuffling stream is separate from the initialisation streams.
  std::mt19937_64 shuffle_rng(config.seed ^ 0xD1B54A32D192ED03ULL);
  const std::size_t n = set.labels.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  JointModel last_good = result.model;
  double best_total = std::numeric_limits<double>::infinity();
  std::size_t stale_epochs = 0;

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    try {
      for (std::size_t begin = 0; begin < n; begin += config.batch_size) {
        const std::size_t end = std::min(n, begin + config.batch_size);
        std::span<const std::size_t> batch(order.data() + begin, end - begin);
        std::vector<std::size_t> labels;
        labels.reserve(batch.size());
        for (auto b : batch) labels.push_back(set.labels[b]);
        JointEvaluation step = EvaluateJoint(
            result.model, config, set.margins,
            GatherRows(set.features, batch), GatherRows(set.pooled, batch),
            labels, set.seen_class_vectors, /*compute_gradients=*/true);
        if (!std::isfinite(step.total)) {
          throw Error(ErrorCode::kNumerical, "non-finite batch loss");
        }
        JointGradients grads;
        grads.transform = std::move(step.ranking.grads);
        grads.transform.AddScaled(step.ce.grads.transform, config.ce_weight);
        // The W penalty sits outside the ce_weight factor.
        grads.bilinear = Scale(step.ce.grads.bilinear, config.ce_weight);
        AddScaledInPlace(grads.bilinear, result.model.bilinear,
                         2.0 * config.EffectiveLambdaBilinear() *
                             (1.0 - config.ce_weight));
        AdamStep(result.model.Parameters(), grads.Blocks(), state, adam);
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNumerical) throw;
      throw DivergenceError(
          fmt::format("training diverged in epoch {}: {}", epoch, e.what()),
          std::move(last_good), epoch - 1);
    }

    JointEvaluation full = EvaluateJoint(
        result.model, config, set.margins, set.features, set.pooled,
        set.labels, set.seen_class_vectors, /*compute_gradients=*/false);
    if (!std::isfinite(full.total)) {
      throw DivergenceError(
          fmt::format("joint loss became non-finite after epoch {}", epoch),
          std::move(last_good), epoch - 1);
    }
    EpochRecord record;
    record.epoch = epoch;
    record.ranking_loss = full.ranking.loss;
    record.hinge = full.ranking.hinge;
    record.ce_loss = full.ce.loss;
    record.total = full.total;
    record.satisfaction_rate =
        full.ranking.constraints == 0
            ? 1.0
            : static_cast<double>(full.ranking.satisfied) /
                  static_cast<double>(full.ranking.constraints);
    record.train_accuracy =
        static_cast<double>(full.ce.correct) / static_cast<double>(n);
    result.report.epochs.push_back(record);
    last_good = result.model;

    if (config.patience > 0) {
      if (full.total < best_total) {
        best_total = full.total;
        stale_epochs = 0;
      } else if (++stale_epochs >= config.patience) {
        result.report.early_stopped = true;
        break;
      }
    }
  }
  result.report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

TrainResult Train(const ZslDataset& dataset, const LabelSpaces& spaces,
                  const TrainConfig& config, Warnings* warnings) {
  config.Validate();
  if (config.hidden_widths.size() == 1) {
    return TrainWithWidth(dataset, spaces, config, config.hidden_widths[0],
                          warnings);
  }
  CrossValidationResult cv = CrossValidate(dataset, spaces, config, warnings);
  TrainResult result =
      TrainWithWidth(dataset, spaces, config, cv.selected_width, warnings);
  result.report.cv_mean_scores = cv.mean_scores;
  return result;
}

FoldProblem MakeFoldProblem(const ZslDataset& dataset,
                            const LabelSpaces& spaces,
                            const std::vector<std::size_t>& train_classes,
                            const std::vector<std::size_t>& heldout_classes) {
  std::vector<std::size_t> classes = train_classes;
  classes.insert(classes.end(), heldout_classes.begin(), heldout_classes.end());
  std::sort(classes.begin(), classes.end());
  std::vector<std::size_t> remap(dataset.num_classes(), dataset.num_classes());
  for (std::size_t k = 0; k < classes.size(); ++k) remap[classes[k]] = k;

  FoldProblem fold;
  ZslDataset& ds = fold.dataset;
  ds.attribute_names = dataset.attribute_names;
  for (auto c : classes) ds.class_names.push_back(dataset.class_names[c]);
  for (auto c : train_classes) ds.seen_classes.push_back(remap[c]);
  for (auto c : heldout_classes) ds.unseen_classes.push_back(remap[c]);
  std::sort(ds.seen_classes.begin(), ds.seen_classes.end());
  std::sort(ds.unseen_classes.begin(), ds.unseen_classes.end());

  std::vector<std::size_t> images;
  for (auto i : dataset.TrainImages()) {
    if (remap[dataset.labels[i]] == dataset.num_classes()) continue;
    images.push_back(i);
    ds.labels.push_back(remap[dataset.labels[i]]);
    ds.is_train.push_back(ds.IsSeen(remap[dataset.labels[i]]));
  }
  ds.features = GatherRows(dataset.features, images);
  if (dataset.attribute_scores) {
    ds.attribute_scores = GatherRows(*dataset.attribute_scores, images);
  }
  if (dataset.predicate_matrix) {
    ds.predicate_matrix = GatherRows(*dataset.predicate_matrix, classes);
  }
  fold.spaces.class_vectors = GatherRows(spaces.class_vectors, classes);
  fold.spaces.attribute_vectors = spaces.attribute_vectors;
  return fold;
}

CrossValidationResult CrossValidate(const ZslDataset& dataset,
                                    const LabelSpaces& spaces,
                                    const TrainConfig& config,
                                    Warnings* warnings) {
  config.Validate();
  dataset.ValidateFor(config.mode);
  std::vector<std::size_t> image_counts(dataset.num_classes(), 0);
  for (auto i : dataset.TrainImages()) ++image_counts[dataset.labels[i]];
  for (auto c : dataset.seen_classes) {
    if (image_counts[c] == 0) {
      throw Error(ErrorCode::kValidation,
                  fmt::format("seen class '{}' has no training images",
                              dataset.class_names[c]));
    }
  }
  if (dataset.seen_classes.size() < 4) {
    throw Error(ErrorCode::kValidation,
                fmt::format("2-fold class-level cross-validation needs >= 4 "
                            "seen classes, have {}",
                            dataset.seen_classes.size()));
  }

  CrossValidationResult cv;
  std::vector<std::size_t> shuffled = dataset.seen_classes;
  std::mt19937_64 rng(config.seed ^ 0xA0761D6478BD642FULL);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const std::size_t half = shuffled.size() / 2;
  cv.fold_a.assign(shuffled.begin(), shuffled.begin() + half);
  cv.fold_b.assign(shuffled.begin() + half, shuffled.end());
  std::sort(cv.fold_a.begin(), cv.fold_a.end());
  std::sort(cv.fold_b.begin(), cv.fold_b.end());

  cv.widths = config.hidden_widths;
  std::sort(cv.widths.begin(), cv.widths.end());
  cv.widths.erase(std::unique(cv.widths.begin(), cv.widths.end()),
                  cv.widths.end());

  const FoldProblem folds[2] = {
      MakeFoldProblem(dataset, spaces, cv.fold_a, cv.fold_b),
      MakeFoldProblem(dataset, spaces, cv.fold_b, cv.fold_a)};
  // Margins must follow each fold's class re-indexing.
  TrainConfig fold_configs[2] = {config, config};
  for (int f = 0; f < 2; ++f) {
    if (config.margins.empty()) continue;
    std::vector<std::size_t> classes =
        f == 0 ? cv.fold_a : cv.fold_b;
    const auto& other = f == 0 ? cv.fold_b : cv.fold_a;
    classes.insert(classes.end(), other.begin(), other.end());
    std::sort(classes.begin(), classes.end());
    DenseMatrix m(classes.size(), classes.size());
    for (std::size_t a = 0; a < classes.size(); ++a) {
      for (std::size_t b = 0; b < classes.size(); ++b) {
        m(a, b) = config.margins(classes[a], classes[b]);
      }
    }
    fold_configs[f].margins = std::move(m);
  }

  double best = -1.0;
  for (std::size_t width : cv.widths) {
    std::vector<double> scores;
    for (int f = 0; f < 2; ++f) {
      TrainResult fit = TrainWithWidth(folds[f].dataset, folds[f].spaces,
                                       fold_configs[f], width, warnings);
      ZeroShotEvaluation eval =
          EvaluateZeroShot(fit.model, folds[f].dataset, folds[f].spaces,
                           /*generalized=*/false, warnings);
      scores.push_back(eval.result.normalized_accuracy);
    }
    const double mean = 0.5 * (scores[0] + scores[1]);
    cv.fold_scores.push_back(scores);
    cv.mean_scores.push_back(mean);
    // Strict comparison over ascending widths keeps the smaller on ties.
    if (mean > best) {
      best = mean;
      cv.selected_width = width;
    }
  }
  return cv;
}

}  // namespace zslvec
