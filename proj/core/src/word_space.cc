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

#include "zslvec/word_space.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <utility>

#include <fmt/format.h>

namespace zslvec {

std::string NormalizeToken(std::string_view token) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!token.empty() && is_space(token.front())) token.remove_prefix(1);
  while (!token.empty() && is_space(token.back())) token.remove_suffix(1);
  std::string out(token);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::vector<std::string> SplitName(std::string_view name) {
  std::vector<std::string> words;
  std::size_t start = 0;
  while (start <= name.size()) {
    std::size_t end = name.find(kNameWordSeparator, start);
    if (end == std::string_view::npos) end = name.size();
    std::string word = NormalizeToken(name.substr(start, end - start));
    if (!word.empty()) words.push_back(std::move(word));
    start = end + 1;
  }
  return words;
}

bool WordSpace::Insert(std::string_view token, std::vector<double> vector) {
  if (vector.size() != dim_) {
    throw Error(ErrorCode::kDimension,
                fmt::format("word vector for '{}' has {} components, expected {}",
                            token, vector.size(), dim_));
  }
  for (double v : vector) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNumerical,
                  fmt::format("word vector for '{}' is not finite", token));
    }
  }
  auto [it, inserted] =
      table_.insert_or_assign(NormalizeToken(token), std::move(vector));
  return !inserted;
}

bool WordSpace::Contains(std::string_view token) const {
  return table_.contains(NormalizeToken(token));
}

std::span<const double> WordSpace::Lookup(std::string_view token) const {
  auto it = table_.find(NormalizeToken(token));
  if (it == table_.end()) {
    throw Error(ErrorCode::kMissingToken,
                fmt::format("token '{}' not in word space", token));
  }
  return it->second;
}

std::vector<double> WordSpace::EmbedName(std::string_view name,
                                         const EmbedOptions& options,
                                         Warnings* warnings) const {
  const std::vector<std::string> words = SplitName(name);
  if (words.empty()) {
    throw Error(ErrorCode::kMissingToken,
                fmt::format("name '{}' contains no words", name));
  }
  std::vector<double> mean(dim_, 0.0);
  std::vector<std::string> missing;
  std::size_t found = 0;
  for (const auto& word : words) {
    auto it = table_.find(word);
    if (it == table_.end()) {
      missing.push_back(word);
      continue;
    }
    double scale = 1.0;
    if (options.normalize_words) {
      double norm_sq = 0.0;
      for (double v : it->second) norm_sq += v * v;
      if (norm_sq > 0.0) scale = 1.0 / std::sqrt(norm_sq);
    }
    for (std::size_t k = 0; k < dim_; ++k) mean[k] += scale * it->second[k];
    ++found;
  }
  if (found == 0) {
    throw Error(ErrorCode::kMissingToken,
                fmt::format("no word of name '{}' is in the word space "
                            "(lookup is lowercased and whitespace-stripped)",
                            name));
  }
  if (!missing.empty()) {
    Warn(warnings, fmt::format("partial coverage for '{}': dropped {} of {} "
                               "words ({})",
                               name, missing.size(), words.size(),
                               fmt::join(missing, ", ")));
  }
  if (found > 1) {
    for (double& v : mean) v /= static_cast<double>(found);
  }
  return mean;
}

std::uint64_t WordSpace::Fingerprint() const {
  constexpr std::uint64_t kOffset = 1469598103934665603ULL;
  constexpr std::uint64_t kPrime = 1099511628211ULL;
  std::uint64_t hash = kOffset;
  auto mix = [&](std::string_view bytes) {
    for (unsigned char c : bytes) {
      hash ^= c;
      hash *= kPrime;
    }
  };
  mix(fmt::format("dim={};", dim_));
  // std::map iterates in sorted key order.
  for (const auto& [token, vec] : table_) {
    mix(token);
    mix(std::string_view("\n", 1));
  }
  return hash;
}

LabelSpaces BuildSpaces(const WordSpace& words,
                        std::span<const std::string> class_names,
                        std::span<const std::string> attribute_names,
                        const EmbedOptions& options, Warnings* warnings) {
  auto stack = [&](std::span<const std::string> names, const char* kind) {
    DenseMatrix out(names.size(), words.dim());
    for (std::size_t i = 0; i < names.size(); ++i) {
      std::vector<double> v;
      try {
        v = words.EmbedName(names[i], options, warnings);
      } catch (const Error& e) {
        throw Error(e.code(),
                    fmt::format("{} name '{}': {}", kind, names[i], e.what()));
      }
      std::copy(v.begin(), v.end(), out.row(i).begin());
    }
    return out;
  };
  return LabelSpaces{stack(class_names, "class"),
                     stack(attribute_names, "attribute")};
}

}  // namespace zslvec
