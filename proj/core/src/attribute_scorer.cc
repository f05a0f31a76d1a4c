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

#include "zslvec/attribute_scorer.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "zslvec/error.h"

namespace zslvec {
namespace {

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double Softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

DenseMatrix Logits(const AttributeScorer& scorer, const DenseMatrix& features) {
  return AddRowBroadcast(MatMul(features, scorer.weight), scorer.bias);
}

}  // namespace

DenseMatrix AttributeScorer::Predict(const DenseMatrix& features) const {
  DenseMatrix p = Logits(*this, features);
  for (double& v : p.data()) v = Sigmoid(v);
  return p;
}

AttributeScorerLoss AttributeScorerObjective(const AttributeScorer& scorer,
                                             const DenseMatrix& features,
                                             const DenseMatrix& targets,
                                             double l2) {
  if (targets.rows() != features.rows() ||
      targets.cols() != scorer.weight.cols()) {
    throw Error(ErrorCode::kDimension,
                fmt::format("attribute targets {} for {} features and {} "
                            "scorer",
                            targets.ShapeString(), features.ShapeString(),
                            scorer.weight.ShapeString()));
  }
  const DenseMatrix z = Logits(scorer, features);
  const std::size_t n = features.rows();
  const double scale = n > 0 ? 1.0 / static_cast<double>(n) : 1.0;
  DenseMatrix dz(z.rows(), z.cols());
  double total = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double zi = z.data()[i];
    const double t = targets.data()[i];
    total += Softplus(zi) - t * zi;
    dz.data()[i] = (Sigmoid(zi) - t) * scale;
  }
  AttributeScorerLoss out;
  out.loss = total * scale + l2 * L2NormSq(scorer.weight);
  out.grad_weight = MatMulTransA(features, dz);
  AddScaledInPlace(out.grad_weight, scorer.weight, 2.0 * l2);
  out.grad_bias = SumRows(dz);
  return out;
}

AttributeScorer TrainAttributeScorer(const DenseMatrix& features,
                                     const DenseMatrix& targets,
                                     const AttributeScorerOptions& options) {
  AttributeScorer scorer{DenseMatrix(features.cols(), targets.cols()),
                         DenseMatrix(1, targets.cols())};
  AdamState state;
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    AttributeScorerLoss step =
        AttributeScorerObjective(scorer, features, targets, options.l2);
    DenseMatrix* params[] = {&scorer.weight, &scorer.bias};
    const DenseMatrix* grads[] = {&step.grad_weight, &step.grad_bias};
    AdamStep(params, grads, state, options.adam);
  }
  return scorer;
}

}  // namespace zslvec
