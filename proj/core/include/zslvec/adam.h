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

#ifndef ZSLVEC_ADAM_H_
#define ZSLVEC_ADAM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "zslvec/matrix.h"

namespace zslvec {

struct AdamConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Moment estimates for a fixed list of parameter blocks. Empty until the
// first step, which sizes the moments after the gradients.
struct AdamState {
  std::vector<DenseMatrix> first_moment;
  std::vector<DenseMatrix> second_moment;
  std::uint64_t step = 0;
};

// One bias-corrected Adam update of every block:
//   m <- b1 m + (1 - b1) g,  v <- b2 v + (1 - b2) g^2
//   p <- p - lr * (m / (1 - b1^t)) / (sqrt(v / (1 - b2^t)) + eps)
void AdamStep(std::span<DenseMatrix* const> params,
              std::span<const DenseMatrix* const> grads, AdamState& state,
              const AdamConfig& config);

}  // namespace zslvec

#endif  // ZSLVEC_ADAM_H_
