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

#ifndef ZSLVEC_TRAINER_H_
#define ZSLVEC_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "zslvec/adam.h"
#include "zslvec/attribute_scorer.h"
#include "zslvec/dataset.h"
#include "zslvec/error.h"
#include "zslvec/label_embedding.h"
#include "zslvec/matrix.h"
#include "zslvec/transform_net.h"
#include "zslvec/word_space.h"

namespace zslvec {

struct TrainConfig {
  TrainingMode mode = TrainingMode::kPbt;
  double learning_rate = 1e-4;
  std::size_t epochs = 200;
  std::size_t batch_size = 16;
  // Weight-norm penalty on the transformation network.
  double lambda = 1e-4;
  // Penalty on W; unset means `lambda`.
  std::optional<double> lambda_bilinear;
  double ce_weight = 1.0;
  // Hidden-width candidates. More than one triggers class-level 2-fold
  // cross-validation before the final fit.
  std::vector<std::size_t> hidden_widths = {64};
  std::size_t hidden_layers = 2;
  // Width of the transformed space; 0 means the word dimension.
  std::size_t output_dim = 0;
  double leaky_slope = 0.01;
  std::uint64_t seed = 0;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  // Stop after this many epochs without a lower total loss; 0 disables.
  std::size_t patience = 0;
  bool mean_reduction = true;
  bool strict_paper_softmax = false;
  // Pairwise margins over all dataset classes; empty means 0/1.
  DenseMatrix margins;
  AttributeScorerOptions attribute_scorer;

  // Throws ErrorCode::kConfig.
  void Validate() const;
  double EffectiveLambdaBilinear() const {
    return lambda_bilinear.value_or(lambda);
  }
  TransformNetConfig NetConfig(std::size_t word_dim,
                               std::size_t hidden_width) const;
  AdamConfig Adam() const;
  // JSON text of every scalar field, used as the checkpoint config echo.
  std::string ToJson() const;
};

struct EpochRecord {
  std::size_t epoch = 0;     // 1-based
  double ranking_loss = 0;   // hinge + lambda ||Phi||^2
  double hinge = 0;
  double ce_loss = 0;        // cross-entropy + lambda_W ||W||^2
  double total = 0;          // ranking_loss + ce_weight * cross-entropy + ...
  double satisfaction_rate = 0;
  double train_accuracy = 0;  // argmax over seen classes
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
  std::size_t selected_hidden_width = 0;
  std::vector<double> cv_mean_scores;  // per candidate, when cross-validated
  bool early_stopped = false;
  double wall_clock_seconds = 0.0;
  std::string checkpoint;
};

// One JSON object per epoch. Wall-clock time is not written.
void WriteTrainReport(std::ostream& out, const TrainReport& report);

struct TrainResult {
  JointModel model;
  TrainReport report;
};

// Thrown when the joint loss or a parameter becomes non-finite. Carries the
// model as it was at the end of the last completed epoch.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& message, JointModel last_good,
                  std::size_t epoch)
      : Error(ErrorCode::kNumerical, message),
        last_good_(std::move(last_good)),
        epoch_(epoch) {}
  const JointModel& last_good() const { return last_good_; }
  std::size_t epoch() const { return epoch_; }

 private:
  JointModel last_good_;
  std::size_t epoch_;
};

// Adam on ranking_loss + ce_weight * cross_entropy + lambda_W ||W||^2 over
// seen classes. With several width candidates, cross-validates first.
TrainResult Train(const ZslDataset& dataset, const LabelSpaces& spaces,
                  const TrainConfig& config, Warnings* warnings = nullptr);

// Fixed hidden width; no cross-validation.
TrainResult TrainWithWidth(const ZslDataset& dataset, const LabelSpaces& spaces,
                           const TrainConfig& config, std::size_t hidden_width,
                           Warnings* warnings = nullptr);

// Per-image attribute weights used by the ranking term for the training
// images: predicate rows (PBT) or attribute scores (IBT). An IBT dataset with
// only a predicate matrix gets scores from a logistic attribute scorer.
DenseMatrix TrainingAttributeWeights(const ZslDataset& dataset,
                                     const TrainConfig& config,
                                     Warnings* warnings = nullptr);

struct CrossValidationResult {
  std::vector<std::size_t> widths;  // ascending, deduplicated
  // fold_scores[w] = {train A / eval B, train B / eval A}.
  std::vector<std::vector<double>> fold_scores;
  std::vector<double> mean_scores;
  std::size_t selected_width = 0;
  std::vector<std::size_t> fold_a;  // class indices
  std::vector<std::size_t> fold_b;
};

// Seen classes split into two folds by class; each fold in turn plays the
// unseen role. Highest mean normalized per-class accuracy wins; ties go to
// the smaller width.
CrossValidationResult CrossValidate(const ZslDataset& dataset,
                                    const LabelSpaces& spaces,
                                    const TrainConfig& config,
                                    Warnings* warnings = nullptr);

// Seen-only sub-problem used by cross-validation: `train_classes` become the
// seen classes, `heldout_classes` the unseen ones. Returns the dataset with
// its class vectors.
struct FoldProblem {
  ZslDataset dataset;
  LabelSpaces spaces;
};
FoldProblem MakeFoldProblem(const ZslDataset& dataset,
                            const LabelSpaces& spaces,
                            const std::vector<std::size_t>& train_classes,
                            const std::vector<std::size_t>& heldout_classes);

}  // namespace zslvec

#endif  // ZSLVEC_TRAINER_H_
