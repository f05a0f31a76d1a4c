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

#ifndef ZSLVEC_DATASET_H_
#define ZSLVEC_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zslvec/error.h"
#include "zslvec/matrix.h"
#include "zslvec/word_space.h"

namespace zslvec {

// Where per-sample attribute weights for the ranking term come from.
enum class TrainingMode {
  kPbt,  // predicate-based: the class-level predicate matrix row
  kIbt,  // image-based: per-image attribute scores
};

std::string_view TrainingModeName(TrainingMode mode);
TrainingMode ParseTrainingMode(std::string_view text);

// Visual features, labels, attribute side information and the class split.
// Class indices refer to `class_names`, which is kept in lexicographic order
// so that the split file's line order never matters.
struct ZslDataset {
  DenseMatrix features;             // n_images x d_vis
  std::vector<std::size_t> labels;  // per image, index into class_names
  std::vector<bool> is_train;       // per image
  std::vector<std::string> class_names;
  std::vector<std::string> attribute_names;
  std::optional<DenseMatrix> attribute_scores;  // n_images x n_attr
  std::optional<DenseMatrix> predicate_matrix;  // n_classes x n_attr
  std::vector<std::size_t> seen_classes;        // ascending
  std::vector<std::size_t> unseen_classes;      // ascending

  std::size_t num_images() const { return features.rows(); }
  std::size_t num_classes() const { return class_names.size(); }
  std::size_t num_attributes() const { return attribute_names.size(); }
  bool IsSeen(std::size_t class_index) const;

  std::vector<std::size_t> TrainImages() const;
  // Non-training images whose label is an unseen class.
  std::vector<std::size_t> UnseenTestImages() const;

  // Throws ErrorCode::kValidation on any violated invariant.
  void Validate() const;
  // Additionally requires the side information `mode` needs.
  void ValidateFor(TrainingMode mode) const;

  friend bool operator==(const ZslDataset&, const ZslDataset&) = default;
};

// If a PBT run has no class-level predicate matrix but per-image attribute
// annotations exist, fills the predicate rows of classes with images by the
// per-class mean of those annotations. Returns true if it did so.
bool DerivePredicateFromImageScores(ZslDataset& dataset,
                                    Warnings* warnings = nullptr);

// --- word vectors -----------------------------------------------------------

// Text format: one `token v1 ... vD` line per token, whitespace-delimited.
// `expected_dim` 0 takes the dimension from the first line.
WordSpace LoadWordVectors(const std::filesystem::path& path,
                          std::size_t expected_dim,
                          Warnings* warnings = nullptr);
void WriteWordVectors(const std::filesystem::path& path,
                      const WordSpace& words);

// --- feature matrices -------------------------------------------------------

inline constexpr char kFeatureMagic[4] = {'Z', 'S', 'L', 'F'};
inline constexpr std::uint32_t kFeatureFormatVersion = 1;

// Binary: "ZSLF", u32 version, u32 rows, u32 cols, rows*cols f64, all
// little-endian, row-major. Files not starting with the magic are parsed as
// CSV: a `rows,cols` line followed by one comma-separated row per line.
DenseMatrix ReadFeatureMatrix(const std::filesystem::path& path);
void WriteFeatureMatrix(const std::filesystem::path& path,
                        const DenseMatrix& matrix);

// --- dataset ----------------------------------------------------------------

struct DatasetPaths {
  std::filesystem::path features;
  std::filesystem::path labels;  // `image_index<TAB>class_name[<TAB>train|test]`
  std::filesystem::path split;   // `seen:` / `unseen:` sections
  // CSV with attribute-name header. First column holds class names for a
  // predicate matrix or image indices for per-image scores.
  std::optional<std::filesystem::path> predicate;
  std::optional<std::filesystem::path> attribute_scores;
};

ZslDataset LoadDataset(const DatasetPaths& paths, TrainingMode mode,
                       Warnings* warnings = nullptr);

// Single attribute file form: the file kind (class-level predicate matrix or
// per-image scores) is detected from its first column.
ZslDataset LoadDataset(const std::filesystem::path& features_path,
                       const std::filesystem::path& labels_path,
                       const std::filesystem::path& split_path,
                       const std::filesystem::path& attributes_path,
                       TrainingMode mode, Warnings* warnings = nullptr);

// Writes features.zslf, labels.tsv, split.txt and, when present,
// predicate.csv / attribute_scores.csv into `dir`. Returns the paths.
DatasetPaths SaveDataset(const std::filesystem::path& dir,
                         const ZslDataset& dataset);

// n_classes x n_classes margin matrix over `class_names`. Accepts either a
// bare numeric CSV in class order or one with a class-name header row and
// first column. The diagonal must be zero and entries non-negative.
DenseMatrix ReadMarginMatrix(const std::filesystem::path& path,
                             const std::vector<std::string>& class_names);

// Formats a double so that parsing it back yields the same bits.
std::string FormatExact(double value);

}  // namespace zslvec

#endif  // ZSLVEC_DATASET_H_
