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

#ifndef ZSLVEC_GRADIENT_CHECK_H_
#define ZSLVEC_GRADIENT_CHECK_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "zslvec/matrix.h"

namespace zslvec {

struct GradCheckShape {
  std::size_t word_dim = 5;
  std::size_t hidden = 4;
  std::size_t hidden_layers = 2;
  std::size_t output_dim = 3;
  std::size_t vis_dim = 6;
  std::size_t n_classes = 3;
  std::size_t n_samples = 4;
};

std::vector<GradCheckShape> DefaultGradCheckShapes();

struct GradCheckResult {
  double worst_relative_error = 0.0;
  std::string worst_case;  // "<loss> seed=<s> shape=<i> block=<b>"
  std::size_t blocks_checked = 0;
};

// Blocks whose true gradient vanishes (the output bias under the standard
// softmax) are compared against this scale instead of their own norm.
inline constexpr double kGradCheckScaleFloor = 1e-4;

// ||analytic - numeric|| / max(||analytic||, ||numeric||, scale floor).
double BlockRelativeError(const DenseMatrix& analytic,
                          const DenseMatrix& numeric);

// Central differences of `loss` w.r.t. every element of `param`, which the
// callback reads through its captured state.
DenseMatrix NumericGradient(DenseMatrix& param,
                            const std::function<double()>& loss, double step);

// Compares analytic and central-difference gradients of the ranking loss,
// the cross-entropy loss (standard and strict softmax) and the attribute
// scorer objective over every (seed, shape) pair.
GradCheckResult RunGradientChecks(const std::vector<std::uint64_t>& seeds,
                                  const std::vector<GradCheckShape>& shapes,
                                  double step = 1e-5);

}  // namespace zslvec

#endif  // ZSLVEC_GRADIENT_CHECK_H_
