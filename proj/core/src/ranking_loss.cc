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

#include "zslvec/ranking_loss.h"

#include <algorithm>

#include <fmt/format.h>

namespace zslvec {
namespace {

// Shared by the single and batched pooling entry points.
bool PoolInto(std::span<const double> weights,
              const DenseMatrix& attribute_vectors, std::span<double> out) {
  if (weights.size() != attribute_vectors.rows()) {
    throw Error(ErrorCode::kDimension,
                fmt::format("{} attribute weights for {} attribute vectors",
                            weights.size(), attribute_vectors.rows()));
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0 && w <= 1.0)) {
      throw Error(ErrorCode::kValidation,
                  fmt::format("attribute weight {} outside [0,1]", w));
    }
    total += w;
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t a = 0; a < weights.size(); ++a) {
    if (weights[a] == 0.0) continue;
    auto v = attribute_vectors.row(a);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += weights[a] * v[k];
  }
  const double denom = std::max(total, kPoolingEpsilon);
  for (double& x : out) x /= denom;
  return total > 0.0;
}

}  // namespace

PooledAttributeEmbedding PoolAttributes(std::span<const double> weights,
                                        const DenseMatrix& attribute_vectors,
                                        Warnings* warnings) {
  PooledAttributeEmbedding result;
  result.weights.assign(weights.begin(), weights.end());
  result.pooled.assign(attribute_vectors.cols(), 0.0);
  if (!PoolInto(weights, attribute_vectors, result.pooled)) {
    Warn(warnings, "degenerate pooling: all attribute weights are zero");
  }
  return result;
}

DenseMatrix PoolAttributeRows(const DenseMatrix& weights,
                              const DenseMatrix& attribute_vectors,
                              Warnings* warnings) {
  DenseMatrix out(weights.rows(), attribute_vectors.cols());
  std::size_t degenerate = 0;
  for (std::size_t i = 0; i < weights.rows(); ++i) {
    if (!PoolInto(weights.row(i), attribute_vectors, out.row(i))) ++degenerate;
  }
  if (degenerate > 0) {
    Warn(warnings, fmt::format("degenerate pooling: {} of {} weight rows are "
                               "all zero",
                               degenerate, weights.rows()));
  }
  return out;
}

double CompatibilityScore(const TransformNet& net,
                          std::span<const double> pooled,
                          std::span<const double> class_vec) {
  return Dot(net.Forward(pooled), net.Forward(class_vec));
}

RankingLossResult RankingLoss(const TransformNet& net,
                              const DenseMatrix& pooled,
                              std::span<const std::size_t> labels,
                              const DenseMatrix& class_vectors,
                              const RankingLossOptions& options,
                              bool compute_gradients) {
  const std::size_t n = pooled.rows();
  const std::size_t n_classes = class_vectors.rows();
  if (labels.size() != n) {
    throw Error(ErrorCode::kDimension,
                fmt::format("{} labels for {} pooled rows", labels.size(), n));
  }
  const bool custom_margins = !options.margins.empty();
  if (custom_margins && (options.margins.rows() != n_classes ||
                         options.margins.cols() != n_classes)) {
    throw Error(ErrorCode::kDimension,
                fmt::format("margin matrix {} for {} classes",
                            options.margins.ShapeString(), n_classes));
  }
  if (options.lambda < 0.0) {
    throw Error(ErrorCode::kConfig, "lambda must be non-negative");
  }

  const ForwardCache sample_side = net.ForwardWithCache(pooled);
  const ForwardCache class_side = net.ForwardWithCache(class_vectors);
  const DenseMatrix scores = MatMulTransB(sample_side.output, class_side.output);

  RankingLossResult result;
  DenseMatrix grad_scores(n, n_classes);
  double hinge_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t y = labels[i];
    if (y >= n_classes) {
      throw Error(ErrorCode::kDimension,
                  fmt::format("label {} out of range for {} classes", y,
                              n_classes));
    }
    const double target = scores(i, y);
    for (std::size_t j = 0; j < n_classes; ++j) {
      if (j == y) continue;
      const double margin = custom_margins ? options.margins(y, j) : 1.0;
      const double violation = margin + scores(i, j) - target;
      ++result.constraints;
      if (violation > 0.0) {
        hinge_sum += violation;
        grad_scores(i, j) += 1.0;
        grad_scores(i, y) -= 1.0;
      } else {
        ++result.satisfied;
      }
    }
  }
  const double scale =
      options.mean_reduction && n > 0 ? 1.0 / static_cast<double>(n) : 1.0;
  result.hinge = hinge_sum * scale;
  result.regularizer = options.lambda * net.WeightNormSq();
  result.loss = result.hinge + result.regularizer;

  if (compute_gradients) {
    if (scale != 1.0) grad_scores = Scale(grad_scores, scale);
    result.grads = net.Backward(sample_side,
                                MatMul(grad_scores, class_side.output));
    result.grads.AddScaled(
        net.Backward(class_side,
                     MatMulTransA(grad_scores, sample_side.output)),
        1.0);
    net.AddWeightDecayGradient(result.grads, options.lambda);
  }
  return result;
}

}  // namespace zslvec
