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

#include "zslvec/label_embedding.h"

#include <cmath>
#include <random>

#include <fmt/format.h>

#include "zslvec/error.h"

namespace zslvec {
namespace {

// log(sum_{j in row, j != skip} exp(row[j])) split as max + log1p(rest), so
// callers subtracting a score near the max keep the tail term.
struct LogSumExpParts {
  double max = 0.0;
  double log1p_rest = 0.0;
  double value() const { return max + log1p_rest; }
};

LogSumExpParts LogSumExp(std::span<const double> row, std::size_t skip) {
  std::size_t best = row.size();
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (j == skip) continue;
    if (best == row.size() || row[j] > row[best]) best = j;
  }
  double rest = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (j == skip || j == best) continue;
    rest += std::exp(row[j] - row[best]);
  }
  return {row[best], std::log1p(rest)};
}

}  // namespace

JointModel JointModel::Create(const TransformNetConfig& config,
                              std::size_t visual_dim, std::uint64_t seed) {
  JointModel model;
  model.transform = TransformNet(config, seed);
  // Decorrelate W's stream from the network's.
  std::mt19937_64 rng(seed ^ 0x9E3779B97F4A7C15ULL);
  const double bound = std::sqrt(
      6.0 / static_cast<double>(visual_dim + config.output_dim));
  std::uniform_real_distribution<double> dist(-bound, bound);
  model.bilinear = DenseMatrix(visual_dim, config.output_dim);
  for (double& w : model.bilinear.data()) w = dist(rng);
  return model;
}

void JointModel::CheckShapes() const {
  if (bilinear.cols() != transform.output_dim()) {
    throw Error(ErrorCode::kDimension,
                fmt::format("bilinear map {} does not match transform output "
                            "dim {}",
                            bilinear.ShapeString(), transform.output_dim()));
  }
}

std::vector<DenseMatrix*> JointModel::Parameters() {
  std::vector<DenseMatrix*> blocks;
  for (auto& layer : transform.mutable_layers()) {
    blocks.push_back(&layer.weight);
    blocks.push_back(&layer.bias);
  }
  blocks.push_back(&bilinear);
  return blocks;
}

std::vector<const DenseMatrix*> JointGradients::Blocks() const {
  std::vector<const DenseMatrix*> blocks;
  for (const auto& layer : transform.layers) {
    blocks.push_back(&layer.weight);
    blocks.push_back(&layer.bias);
  }
  blocks.push_back(&bilinear);
  return blocks;
}

void JointGradients::AddScaled(const JointGradients& other, double factor) {
  transform.AddScaled(other.transform, factor);
  AddScaledInPlace(bilinear, other.bilinear, factor);
}

std::size_t ArgMax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < values.size(); ++j) {
    if (values[j] > values[best]) best = j;
  }
  return best;
}

DenseMatrix ScoreAll(const JointModel& model, const DenseMatrix& features,
                     const DenseMatrix& class_vectors) {
  model.CheckShapes();
  if (features.cols() != model.visual_dim()) {
    throw Error(ErrorCode::kDimension,
                fmt::format("features {} do not match visual dim {}",
                            features.ShapeString(), model.visual_dim()));
  }
  const DenseMatrix projected = MatMul(features, model.bilinear);
  return MatMulTransB(projected, model.transform.Forward(class_vectors));
}

CrossEntropyResult CrossEntropyLoss(const JointModel& model,
                                    const DenseMatrix& features,
                                    std::span<const std::size_t> labels,
                                    const DenseMatrix& class_vectors,
                                    const CrossEntropyOptions& options,
                                    bool compute_gradients) {
  model.CheckShapes();
  const std::size_t n = features.rows();
  const std::size_t n_classes = class_vectors.rows();
  if (labels.size() != n) {
    throw Error(ErrorCode::kDimension,
                fmt::format("{} labels for {} feature rows", labels.size(), n));
  }
  if (features.cols() != model.visual_dim()) {
    throw Error(ErrorCode::kDimension,
                fmt::format("features {} do not match visual dim {}",
                            features.ShapeString(), model.visual_dim()));
  }
  if (options.strict_paper_softmax && n_classes < 2) {
    throw Error(ErrorCode::kConfig,
                "strict softmax needs at least two classes");
  }

  const ForwardCache class_side = model.transform.ForwardWithCache(class_vectors);
  const DenseMatrix projected = MatMul(features, model.bilinear);
  const DenseMatrix scores = MatMulTransB(projected, class_side.output);

  CrossEntropyResult result;
  DenseMatrix grad_scores(n, n_classes);
  double data_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t y = labels[i];
    if (y >= n_classes) {
      throw Error(ErrorCode::kDimension,
                  fmt::format("label {} out of range for {} classes", y,
                              n_classes));
    }
    auto row = scores.row(i);
    if (ArgMax(row) == y) ++result.correct;
    const std::size_t skip = options.strict_paper_softmax ? y : n_classes;
    const LogSumExpParts parts = LogSumExp(row, skip);
    const double lse = parts.value();
    data_sum += (parts.max - row[y]) + parts.log1p_rest;
    for (std::size_t j = 0; j < n_classes; ++j) {
      if (j == skip) continue;
      grad_scores(i, j) = std::exp(row[j] - lse);
    }
    grad_scores(i, y) -= 1.0;
  }
  const double scale =
      options.mean_reduction && n > 0 ? 1.0 / static_cast<double>(n) : 1.0;
  result.data_loss = data_sum * scale;
  result.regularizer = options.l2_bilinear * L2NormSq(model.bilinear) +
                       options.l2_transform * model.transform.WeightNormSq();
  result.loss = result.data_loss + result.regularizer;
  if (!std::isfinite(result.loss)) {
    throw Error(ErrorCode::kNumerical, "cross-entropy loss is not finite");
  }

  if (compute_gradients) {
    if (scale != 1.0) grad_scores = Scale(grad_scores, scale);
    result.grads.bilinear =
        MatMulTransA(features, MatMul(grad_scores, class_side.output));
    AddScaledInPlace(result.grads.bilinear, model.bilinear,
                     2.0 * options.l2_bilinear);
    result.grads.transform = model.transform.Backward(
        class_side, MatMulTransA(grad_scores, projected));
    model.transform.AddWeightDecayGradient(result.grads.transform,
                                           options.l2_transform);
  }
  return result;
}

}  // namespace zslvec
