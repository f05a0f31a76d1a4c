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

#ifndef ZSLVEC_CHECKPOINT_H_
#define ZSLVEC_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "zslvec/error.h"
#include "zslvec/label_embedding.h"

namespace zslvec {

inline constexpr char kCheckpointMagic[4] = {'Z', 'S', 'L', 'M'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct ModelCheckpoint {
  JointModel model;
  std::string config_json;  // training configuration echo
  std::uint64_t word_space_fingerprint = 0;
  std::uint32_t version = kCheckpointVersion;

  friend bool operator==(const ModelCheckpoint&,
                         const ModelCheckpoint&) = default;
};

// Little-endian binary layout:
//   "ZSLM" u32 version u64 fingerprint
//   u32 n + n bytes of config JSON
//   f64 leaky_slope, u32 n_layers, then per layer: weight, bias
//   bilinear W
// where each matrix is u32 rows, u32 cols, rows*cols f64 row-major.
void SaveModel(const std::filesystem::path& path,
               const ModelCheckpoint& checkpoint);

// Throws ErrorCode::kVersion on a version mismatch and ErrorCode::kCorrupt on
// truncated or malformed files. A fingerprint differing from
// `expected_fingerprint` is reported as a warning.
ModelCheckpoint LoadModel(
    const std::filesystem::path& path,
    std::optional<std::uint64_t> expected_fingerprint = std::nullopt,
    Warnings* warnings = nullptr);

}  // namespace zslvec

#endif  // ZSLVEC_CHECKPOINT_H_
