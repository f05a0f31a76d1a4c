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

#ifndef ZSLVEC_WORD_SPACE_H_
#define ZSLVEC_WORD_SPACE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zslvec/error.h"
#include "zslvec/matrix.h"

namespace zslvec {

// On-disk separator between the words of a multi-word class or attribute
// name, e.g. "persian+cat".
inline constexpr char kNameWordSeparator = '+';

// Lowercases and strips surrounding whitespace. Applied to every token on
// insertion and lookup.
std::string NormalizeToken(std::string_view token);

// Splits "killer+whale" into normalized words, dropping empty pieces.
std::vector<std::string> SplitName(std::string_view name);

struct EmbedOptions {
  // Unit-normalize each word vector before averaging.
  bool normalize_words = false;
};

// Token -> vector table of fixed dimension.
class WordSpace {
 public:
  explicit WordSpace(std::size_t dim = 0) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t vocabulary_size() const { return table_.size(); }

  // Returns true if an existing entry was replaced.
  bool Insert(std::string_view token, std::vector<double> vector);
  bool Contains(std::string_view token) const;
  // Throws ErrorCode::kMissingToken if absent.
  std::span<const double> Lookup(std::string_view token) const;

  // Mean of the constituent word vectors of `name`. Words missing from the
  // table are dropped with a warning; if none are present the call throws
  // ErrorCode::kMissingToken.
  std::vector<double> EmbedName(std::string_view name,
                                const EmbedOptions& options = {},
                                Warnings* warnings = nullptr) const;

  // FNV-1a over the sorted vocabulary and the dimension. Identifies which
  // word space a checkpoint was trained against.
  std::uint64_t Fingerprint() const;

  const std::map<std::string, std::vector<double>>& table() const {
    return table_;
  }

 private:
  std::size_t dim_;
  std::map<std::string, std::vector<double>> table_;
};

// Embedded class and attribute names; row i of each matrix belongs to the
// i-th name of the corresponding list.
struct LabelSpaces {
  DenseMatrix class_vectors;
  DenseMatrix attribute_vectors;
};

LabelSpaces BuildSpaces(const WordSpace& words,
                        std::span<const std::string> class_names,
                        std::span<const std::string> attribute_names,
                        const EmbedOptions& options = {},
                        Warnings* warnings = nullptr);

}  // namespace zslvec

#endif  // ZSLVEC_WORD_SPACE_H_
