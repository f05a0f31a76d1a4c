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

#ifndef ZSLVEC_EVAL_H_
#define ZSLVEC_EVAL_H_

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "zslvec/dataset.h"
#include "zslvec/error.h"
#include "zslvec/label_embedding.h"
#include "zslvec/matrix.h"
#include "zslvec/word_space.h"

namespace zslvec {

// For each image, the row of `candidate_class_vectors` with the highest
// bilinear score. Ties go to the lowest row.
std::vector<std::size_t> ClassifyZeroShot(
    const JointModel& model, const DenseMatrix& features,
    const DenseMatrix& candidate_class_vectors);

// Same, restricted to `candidate_classes` (rows of `class_vectors`); returns
// entries of `candidate_classes`.
std::vector<std::size_t> ClassifyZeroShot(
    const JointModel& model, const DenseMatrix& features,
    const DenseMatrix& class_vectors,
    std::span<const std::size_t> candidate_classes);

struct EvalResult {
  std::vector<std::size_t> classes;  // evaluated classes, ascending
  std::vector<std::size_t> class_counts;
  std::vector<double> per_class_accuracy;
  double normalized_accuracy = 0.0;  // mean of per_class_accuracy
  double overall_accuracy = 0.0;     // per-image
  // Rows: true class, columns: predicted class, both in `classes` order.
  DenseMatrix confusion;
  std::vector<std::size_t> excluded_classes;  // no test images
};

// Mean over `class_set` of within-class accuracy. Every label must belong to
// `class_set`; classes without images are excluded with a warning.
EvalResult NormalizedPerClassAccuracy(std::span<const std::size_t> predictions,
                                      std::span<const std::size_t> labels,
                                      std::span<const std::size_t> class_set,
                                      Warnings* warnings = nullptr);

// Indices of the k images scoring highest for one class vector. Ties are
// broken by ascending image index.
std::vector<std::size_t> TopKImages(const JointModel& model,
                                    const DenseMatrix& features,
                                    std::span<const double> class_vector,
                                    std::size_t k);

struct ZeroShotEvaluation {
  EvalResult result;
  std::vector<std::size_t> images;       // evaluated image indices
  std::vector<std::size_t> predictions;  // class index per evaluated image
};

// Classic zero-shot protocol: test images of unseen classes scored against
// unseen classes only. With `generalized`, every test image is scored
// against seen and unseen classes together.
ZeroShotEvaluation EvaluateZeroShot(const JointModel& model,
                                    const ZslDataset& dataset,
                                    const LabelSpaces& spaces,
                                    bool generalized = false,
                                    Warnings* warnings = nullptr);

// Per-class rows then a summary block.
void WriteEvalText(std::ostream& out, const EvalResult& result,
                   const std::vector<std::string>& class_names);
// `class,accuracy` header then one row per evaluated class.
void WriteEvalCsv(std::ostream& out, const EvalResult& result,
                  const std::vector<std::string>& class_names);

}  // namespace zslvec

#endif  // ZSLVEC_EVAL_H_
