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

#ifndef ZSLVEC_TOOLS_RUN_CONFIG_H_
#define ZSLVEC_TOOLS_RUN_CONFIG_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "zslvec/synthetic.h"
#include "zslvec/trainer.h"

namespace zslvec::cli {

// Everything a subcommand may need. Relative paths in a config file are
// resolved against that file's directory; paths given through --set are
// resolved against the working directory.
struct RunConfig {
  TrainConfig train;
  SyntheticSpec synthetic;

  std::optional<std::filesystem::path> features;
  std::optional<std::filesystem::path> labels;
  std::optional<std::filesystem::path> split;
  // Single attribute file whose kind is detected from its first column.
  std::optional<std::filesystem::path> attributes;
  std::optional<std::filesystem::path> predicate;
  std::optional<std::filesystem::path> attribute_scores;
  std::optional<std::filesystem::path> word_vectors;
  std::optional<std::filesystem::path> margins;
  std::optional<std::filesystem::path> checkpoint;
  std::optional<std::filesystem::path> out;

  std::size_t word_dim = 0;  // 0 = taken from the word-vector file
  bool normalize_words = false;
  std::size_t top_k = 3;
  bool generalized = false;
};

// Parses a JSON object. Unknown keys, wrong value types and invalid values
// throw ErrorCode::kConfig.
RunConfig ParseRunConfig(const std::string& json_text,
                         const std::filesystem::path& base_dir);
RunConfig LoadRunConfig(const std::filesystem::path& path);

// Applies one `key=value` override. The value is read as JSON when it parses
// as JSON and as a plain string otherwise. Nested synthetic fields use
// `synthetic.<field>`.
void ApplyOverride(RunConfig& config, const std::string& assignment);

// JSON text that ParseRunConfig maps back to `config`. Paths are written
// relative to `base_dir` when they lie beneath it.
std::string RunConfigToJson(const RunConfig& config,
                            const std::filesystem::path& base_dir);

}  // namespace zslvec::cli

#endif  // ZSLVEC_TOOLS_RUN_CONFIG_H_
