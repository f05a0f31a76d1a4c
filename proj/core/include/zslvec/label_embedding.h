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

#ifndef ZSLVEC_LABEL_EMBEDDING_H_
#define ZSLVEC_LABEL_EMBEDDING_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "zslvec/matrix.h"
#include "zslvec/transform_net.h"

namespace zslvec {

// The transformation network together with the bilinear map W
// (d_vis x d_t) scoring f(x, y) = theta(x)^T W Phi(y).
struct JointModel {
  TransformNet transform;
  DenseMatrix bilinear;

  // Transform initialised from `config`, W with the same uniform scheme.
  static JointModel Create(const TransformNetConfig& config,
                           std::size_t visual_dim, std::uint64_t seed);

  std::size_t visual_dim() const { return bilinear.rows(); }
  // Throws ErrorCode::kDimension unless W's columns match Phi's output.
  void CheckShapes() const;

  // Every trainable block: transform weights and biases layer by layer, then
  // W. JointGradients::Blocks() lists gradients in the same order.
  std::vector<DenseMatrix*> Parameters();

  friend bool operator==(const JointModel&, const JointModel&) = default;
};

// Gradients for every trainable parameter of a JointModel.
struct JointGradients {
  TransformGradients transform;
  DenseMatrix bilinear;

  void AddScaled(const JointGradients& other, double factor);
  std::vector<const DenseMatrix*> Blocks() const;
};

// n x n_classes matrix of theta(x_i)^T W Phi(y_c).
DenseMatrix ScoreAll(const JointModel& model, const DenseMatrix& features,
                     const DenseMatrix& class_vectors);

struct CrossEntropyOptions {
  double l2_bilinear = 0.0;   // coefficient of ||W||^2
  double l2_transform = 0.0;  // coefficient of ||Phi||^2 (weights only)
  bool mean_reduction = true;
  // Literal variant whose denominator sums over y' != y_i only.
  bool strict_paper_softmax = false;
};

struct CrossEntropyResult {
  double loss = 0.0;
  double data_loss = 0.0;  // after reduction
  double regularizer = 0.0;
  JointGradients grads;
  std::size_t correct = 0;  // argmax hits over the given classes
};

// Softmax cross-entropy of the bilinear scores over the rows of
// `class_vectors`; gradients flow into W and, through the class side, Phi.
CrossEntropyResult CrossEntropyLoss(const JointModel& model,
                                    const DenseMatrix& features,
                                    std::span<const std::size_t> labels,
                                    const DenseMatrix& class_vectors,
                                    const CrossEntropyOptions& options,
                                    bool compute_gradients = true);

// Row-wise argmax; the lowest index wins ties.
std::size_t ArgMax(std::span<const double> values);

}  // namespace zslvec

#endif  // ZSLVEC_LABEL_EMBEDDING_H_
