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

#ifndef ZSLVEC_SYNTHETIC_H_
#define ZSLVEC_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <optional>

#include "zslvec/dataset.h"
#include "zslvec/error.h"
#include "zslvec/matrix.h"
#include "zslvec/word_space.h"

namespace zslvec {

struct SyntheticSpec {
  std::size_t n_seen = 8;
  std::size_t n_unseen = 4;
  std::size_t n_attr = 12;
  std::size_t word_dim = 20;
  std::size_t vis_dim = 30;
  std::size_t images_per_class = 40;
  // Std-dev of the Gaussian noise on features and on attribute scores.
  double noise = 0.05;
  std::uint64_t seed = 0;
  // Attribute word vectors are drawn from a random subspace of this rank;
  // 0 means n_seen. A rank at most n_seen puts every unseen class vector
  // inside the span of the seen ones. Ranks >= word_dim use the full space.
  std::size_t latent_rank = 0;
  // Rescale each class word vector to unit L2 norm.
  bool unit_class_vectors = true;
  // Fixed class x attribute matrix in [0,1]; when unset, rows are sampled as
  // distinct binary signatures.
  std::optional<DenseMatrix> predicate;

  void Validate() const;  // throws ErrorCode::kConfig
};

struct SyntheticData {
  ZslDataset dataset;
  WordSpace words;
};

// Ground-truth construction:
//   attribute word vectors a_k = B z_k, z_k ~ N(0, I_r), B ~ N(0, 1/r)
//   class word vector c_y = sum_k P[y,k] a_k + N(0, 0.05^2 I)
//   image feature x = G c_y + N(0, noise^2 I), G ~ N(0, 1/word_dim)
//   attribute scores = clip(P[y] + N(0, noise^2), 0, 1)
// Classes "class00".. are seen first, then unseen; seen images are training
// images, unseen images are test images. Emits an ambiguity warning when two
// unseen classes share a predicate row.
SyntheticData GenerateSynthetic(const SyntheticSpec& spec,
                                Warnings* warnings = nullptr);

}  // namespace zslvec

#endif  // ZSLVEC_SYNTHETIC_H_
