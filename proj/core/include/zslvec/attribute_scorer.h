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

#ifndef ZSLVEC_ATTRIBUTE_SCORER_H_
#define ZSLVEC_ATTRIBUTE_SCORER_H_

#include <cstddef>

#include "zslvec/adam.h"
#include "zslvec/matrix.h"

namespace zslvec {

// One-vs-rest logistic attribute classifiers over visual features. Supplies
// per-image attribute posteriors for image-based training when a dataset
// carries only a predicate matrix.
struct AttributeScorer {
  DenseMatrix weight;  // d_vis x n_attr
  DenseMatrix bias;    // 1 x n_attr

  // n x n_attr posteriors in [0,1].
  DenseMatrix Predict(const DenseMatrix& features) const;
};

struct AttributeScorerLoss {
  double loss = 0.0;
  DenseMatrix grad_weight;
  DenseMatrix grad_bias;
};

// Mean over images of the summed binary cross-entropy against soft targets in
// [0,1], plus l2 * ||weight||^2.
AttributeScorerLoss AttributeScorerObjective(const AttributeScorer& scorer,
                                             const DenseMatrix& features,
                                             const DenseMatrix& targets,
                                             double l2);

struct AttributeScorerOptions {
  std::size_t epochs = 300;
  double l2 = 1e-4;
  AdamConfig adam = {.learning_rate = 1e-2};
};

// Full-batch Adam on the objective above, starting from zero weights.
AttributeScorer TrainAttributeScorer(const DenseMatrix& features,
                                     const DenseMatrix& targets,
                                     const AttributeScorerOptions& options);

}  // namespace zslvec

#endif  // ZSLVEC_ATTRIBUTE_SCORER_H_
