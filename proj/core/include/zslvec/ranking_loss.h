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

#ifndef ZSLVEC_RANKING_LOSS_H_
#define ZSLVEC_RANKING_LOSS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "zslvec/error.h"
#include "zslvec/matrix.h"
#include "zslvec/transform_net.h"

namespace zslvec {

inline constexpr double kPoolingEpsilon = 1e-8;

// Attribute word vectors averaged with per-attribute weights in [0,1]:
// pooled = sum_a w_a * v_a / max(sum_a w_a, kPoolingEpsilon).
struct PooledAttributeEmbedding {
  std::vector<double> weights;
  std::vector<double> pooled;
};

// Warns (degenerate pooling) and returns the zero vector when every weight is
// zero.
PooledAttributeEmbedding PoolAttributes(std::span<const double> weights,
                                        const DenseMatrix& attribute_vectors,
                                        Warnings* warnings = nullptr);

// Row i of the result pools row i of `weights`. Identical arithmetic to
// PoolAttributes, so equal weight rows give bit-identical pooled rows.
DenseMatrix PoolAttributeRows(const DenseMatrix& weights,
                              const DenseMatrix& attribute_vectors,
                              Warnings* warnings = nullptr);

// s(x, y) = <Phi(pooled), Phi(class_vec)>.
double CompatibilityScore(const TransformNet& net,
                          std::span<const double> pooled,
                          std::span<const double> class_vec);

struct RankingLossOptions {
  // Coefficient of the squared weight norm of the network.
  double lambda = 0.0;
  // Pairwise margins over the class rows passed to RankingLoss. Empty means
  // the 0/1 margin: 0 on the diagonal, 1 elsewhere.
  DenseMatrix margins;
  // Divide the hinge sum by the number of samples.
  bool mean_reduction = true;
};

struct RankingLossResult {
  double loss = 0.0;         // hinge + regularizer
  double hinge = 0.0;        // after reduction
  double regularizer = 0.0;  // lambda * ||Phi||^2
  TransformGradients grads;
  // Margin constraints s(x_i,y_i) >= s(x_i,y_j) + margin(y_i,y_j) that hold.
  std::size_t satisfied = 0;
  std::size_t constraints = 0;
};

// Multiclass margin-ranking hinge over all non-target classes:
//   lambda ||Phi||^2 + sum_i sum_{j != y_i}
//       max(0, margin(y_i, j) + s(x_i, j) - s(x_i, y_i))
// `pooled` is n x word_dim; `labels[i]` indexes rows of `class_vectors`.
// The hinge is active only where its argument is strictly positive.
RankingLossResult RankingLoss(const TransformNet& net,
                              const DenseMatrix& pooled,
                              std::span<const std::size_t> labels,
                              const DenseMatrix& class_vectors,
                              const RankingLossOptions& options,
                              bool compute_gradients = true);

}  // namespace zslvec

#endif  // ZSLVEC_RANKING_LOSS_H_
