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

#include "zslvec/adam.h"

#include <cmath>

#include <fmt/format.h>

#include "zslvec/error.h"

namespace zslvec {

void AdamStep(std::span<DenseMatrix* const> params,
              std::span<const DenseMatrix* const> grads, AdamState& state,
              const AdamConfig& config) {
  if (params.size() != grads.size()) {
    throw Error(ErrorCode::kDimension,
                fmt::format("adam: {} parameter blocks but {} gradients",
                            params.size(), grads.size()));
  }
  if (state.step == 0 && state.first_moment.empty()) {
    for (const DenseMatrix* g : grads) {
      state.first_moment.emplace_back(g->rows(), g->cols());
      state.second_moment.emplace_back(g->rows(), g->cols());
    }
  }
  if (state.first_moment.size() != params.size()) {
    throw Error(ErrorCode::kDimension, "adam: state does not match parameters");
  }
  for (std::size_t b = 0; b < params.size(); ++b) {
    if (params[b]->rows() != grads[b]->rows() ||
        params[b]->cols() != grads[b]->cols() ||
        state.first_moment[b].rows() != grads[b]->rows() ||
        state.first_moment[b].cols() != grads[b]->cols()) {
      throw Error(ErrorCode::kDimension,
                  fmt::format("adam: block {} shapes differ ({} vs {})", b,
                              params[b]->ShapeString(),
                              grads[b]->ShapeString()));
    }
  }

  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(config.beta1, t);
  const double correction2 = 1.0 - std::pow(config.beta2, t);
  for (std::size_t b = 0; b < params.size(); ++b) {
    auto p = params[b]->data();
    auto g = grads[b]->data();
    auto m = state.first_moment[b].data();
    auto v = state.second_moment[b].data();
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * g[i];
      v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * g[i] * g[i];
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      p[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
    }
    CheckFinite(*params[b], "adam_step");
  }
}

}  // namespace zslvec
