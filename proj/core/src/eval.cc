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

#include "zslvec/eval.h"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

namespace zslvec {

std::vector<std::size_t> ClassifyZeroShot(
    const JointModel& model, const DenseMatrix& features,
    const DenseMatrix& candidate_class_vectors) {
  if (candidate_class_vectors.rows() == 0) {
    throw Error(ErrorCode::kValidation,
                "zero-shot classification needs at least one candidate class");
  }
  const DenseMatrix scores = ScoreAll(model, features, candidate_class_vectors);
  std::vector<std::size_t> predictions(scores.rows());
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    predictions[i] = ArgMax(scores.row(i));
  }
  return predictions;
}

std::vector<std::size_t> ClassifyZeroShot(
    const JointModel& model, const DenseMatrix& features,
    const DenseMatrix& class_vectors,
    std::span<const std::size_t> candidate_classes) {
  std::vector<std::size_t> local = ClassifyZeroShot(
      model, features, GatherRows(class_vectors, candidate_classes));
  for (auto& p : local) p = candidate_classes[p];
  return local;
}

EvalResult NormalizedPerClassAccuracy(std::span<const std::size_t> predictions,
                                      std::span<const std::size_t> labels,
                                      std::span<const std::size_t> class_set,
                                      Warnings* warnings) {
  if (predictions.size() != labels.size()) {
    throw Error(ErrorCode::kDimension,
                fmt::format("{} predictions for {} labels", predictions.size(),
                            labels.size()));
  }
  std::vector<std::size_t> classes(class_set.begin(), class_set.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  auto position = [&](std::size_t c) -> std::size_t {
    auto it = std::lower_bound(classes.begin(), classes.end(), c);
    return (it != classes.end() && *it == c)
               ? static_cast<std::size_t>(it - classes.begin())
               : classes.size();
  };

  const std::size_t k = classes.size();
  std::vector<std::size_t> counts(k, 0), hits(k, 0);
  DenseMatrix confusion(k, k);
  std::size_t total_hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::size_t row = position(labels[i]);
    if (row == k) {
      throw Error(ErrorCode::kValidation,
                  fmt::format("label {} of image {} is not in the evaluated "
                              "class set",
                              labels[i], i));
    }
    ++counts[row];
    const std::size_t col = position(predictions[i]);
    if (col < k) confusion(row, col) += 1.0;
    if (predictions[i] == labels[i]) {
      ++hits[row];
      ++total_hits;
    }
  }

  EvalResult result;
  double sum = 0.0;
  for (std::size_t r = 0; r < k; ++r) {
    if (counts[r] == 0) {
      result.excluded_classes.push_back(classes[r]);
      Warn(warnings, fmt::format("class {} has no test images; excluded from "
                                 "the per-class mean",
                                 classes[r]));
      continue;
    }
    const double acc =
        static_cast<double>(hits[r]) / static_cast<double>(counts[r]);
    result.classes.push_back(classes[r]);
    result.class_counts.push_back(counts[r]);
    result.per_class_accuracy.push_back(acc);
    sum += acc;
  }
  const std::size_t kept = result.classes.size();
  result.normalized_accuracy = kept > 0 ? sum / static_cast<double>(kept) : 0.0;
  result.overall_accuracy =
      labels.empty() ? 0.0
                     : static_cast<double>(total_hits) /
                           static_cast<double>(labels.size());
  // Confusion restricted to the classes that were kept.
  std::vector<std::size_t> kept_rows;
  for (std::size_t r = 0; r < k; ++r) {
    if (counts[r] > 0) kept_rows.push_back(r);
  }
  result.confusion = DenseMatrix(kept, kept);
  for (std::size_t a = 0; a < kept; ++a) {
    for (std::size_t b = 0; b < kept; ++b) {
      result.confusion(a, b) = confusion(kept_rows[a], kept_rows[b]);
    }
  }
  return result;
}

std::vector<std::size_t> TopKImages(const JointModel& model,
                                    const DenseMatrix& features,
                                    std::span<const double> class_vector,
                                    std::size_t k) {
  if (k > features.rows()) {
    throw Error(ErrorCode::kValidation,
                fmt::format("top-{} requested from {} images", k,
                            features.rows()));
  }
  const DenseMatrix scores =
      ScoreAll(model, features, DenseMatrix::RowVector(class_vector));
  std::vector<std::size_t> order(features.rows());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return scores(a, 0) > scores(b, 0);
                   });
  order.resize(k);
  return order;
}

ZeroShotEvaluation EvaluateZeroShot(const JointModel& model,
                                    const ZslDataset& dataset,
                                    const LabelSpaces& spaces,
                                    bool generalized, Warnings* warnings) {
  ZeroShotEvaluation eval;
  std::vector<std::size_t> candidates;
  if (generalized) {
    for (std::size_t i = 0; i < dataset.num_images(); ++i) {
      if (!dataset.is_train[i]) eval.images.push_back(i);
    }
    candidates.resize(dataset.num_classes());
    std::iota(candidates.begin(), candidates.end(), 0);
  } else {
    eval.images = dataset.UnseenTestImages();
    candidates = dataset.unseen_classes;
  }
  if (eval.images.empty()) {
    throw Error(ErrorCode::kValidation, "no test images to evaluate");
  }
  const DenseMatrix features = GatherRows(dataset.features, eval.images);
  eval.predictions =
      ClassifyZeroShot(model, features, spaces.class_vectors, candidates);
  std::vector<std::size_t> labels;
  labels.reserve(eval.images.size());
  for (auto i : eval.images) labels.push_back(dataset.labels[i]);
  eval.result =
      NormalizedPerClassAccuracy(eval.predictions, labels, candidates, warnings);
  return eval;
}

void WriteEvalText(std::ostream& out, const EvalResult& result,
                   const std::vector<std::string>& class_names) {
  out << fmt::format("{:<24} {:>8} {:>10}\n", "class", "images", "accuracy");
  for (std::size_t r = 0; r < result.classes.size(); ++r) {
    out << fmt::format("{:<24} {:>8} {:>10.4f}\n",
                       class_names.at(result.classes[r]),
                       result.class_counts[r], result.per_class_accuracy[r]);
  }
  for (auto c : result.excluded_classes) {
    out << fmt::format("{:<24} {:>8} {:>10}\n", class_names.at(c), 0,
                       "excluded");
  }
  out << fmt::format("normalized_per_class_accuracy {:.6f}\n",
                     result.normalized_accuracy);
  out << fmt::format("overall_per_image_accuracy {:.6f}\n",
                     result.overall_accuracy);
}

void WriteEvalCsv(std::ostream& out, const EvalResult& result,
                  const std::vector<std::string>& class_names) {
  out << "class,accuracy\n";
  for (std::size_t r = 0; r < result.classes.size(); ++r) {
    out << class_names.at(result.classes[r]) << ','
        << FormatExact(result.per_class_accuracy[r]) << '\n';
  }
}

}  // namespace zslvec
