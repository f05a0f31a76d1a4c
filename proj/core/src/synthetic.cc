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

#include "zslvec/synthetic.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include <fmt/format.h>

namespace zslvec {
namespace {

constexpr double kClassPerturbation = 0.05;

std::string IndexedName(const char* prefix, std::size_t i, std::size_t count) {
  const int width = count <= 100 ? 2 : static_cast<int>(std::to_string(count - 1).size());
  return fmt::format("{}{:0{}}", prefix, i, width);
}

// Distinct binary signatures with about a third of the attributes active.
DenseMatrix SamplePredicate(std::size_t n_classes, std::size_t n_attr,
                            std::mt19937_64& rng) {
  const std::size_t active = std::max<std::size_t>(1, (n_attr + 2) / 3);
  DenseMatrix pred(n_classes, n_attr);
  std::set<std::vector<double>> used;
  std::vector<std::size_t> attrs(n_attr);
  for (std::size_t c = 0; c < n_classes; ++c) {
    std::vector<double> row;
    for (int attempt = 0; attempt < 1000; ++attempt) {
      std::iota(attrs.begin(), attrs.end(), 0);
      std::shuffle(attrs.begin(), attrs.end(), rng);
      row.assign(n_attr, 0.0);
      for (std::size_t k = 0; k < active; ++k) row[attrs[k]] = 1.0;
      if (!used.contains(row)) break;
    }
    used.insert(row);
    std::copy(row.begin(), row.end(), pred.row(c).begin());
  }
  return pred;
}

}  // namespace

void SyntheticSpec::Validate() const {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::kConfig, msg);
  };
  if (n_seen < 2) fail("synthetic spec needs n_seen >= 2");
  if (n_unseen < 1) fail("synthetic spec needs n_unseen >= 1");
  if (n_attr < 1 || word_dim < 1 || vis_dim < 1 || images_per_class < 1) {
    fail("synthetic spec dimensions must be positive");
  }
  if (!(noise >= 0.0)) fail("synthetic noise must be >= 0");
  if (predicate) {
    if (predicate->rows() != n_seen + n_unseen || predicate->cols() != n_attr) {
      fail(fmt::format("fixed predicate {} does not match {} classes x {} "
                       "attributes",
                       predicate->ShapeString(), n_seen + n_unseen, n_attr));
    }
    for (double v : predicate->data()) {
      if (!(v >= 0.0 && v <= 1.0)) fail("fixed predicate entries must be in [0,1]");
    }
  }
}

SyntheticData GenerateSynthetic(const SyntheticSpec& spec, Warnings* warnings) {
  spec.Validate();
  const std::size_t n_classes = spec.n_seen + spec.n_unseen;
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  DenseMatrix predicate = spec.predicate
                              ? *spec.predicate
                              : SamplePredicate(n_classes, spec.n_attr, rng);
  for (std::size_t a = spec.n_seen; a < n_classes; ++a) {
    for (std::size_t b = a + 1; b < n_classes; ++b) {
      if (std::equal(predicate.row(a).begin(), predicate.row(a).end(),
                     predicate.row(b).begin())) {
        Warn(warnings,
             fmt::format("ambiguous synthetic spec: unseen classes {} and {} "
                         "share a predicate row and differ only by their "
                         "word-vector perturbation{}",
                         a, b, spec.noise == 0.0 ? " (noise is 0)" : ""));
      }
    }
  }

  DenseMatrix attribute_vectors(spec.n_attr, spec.word_dim);
  const std::size_t rank =
      spec.latent_rank == 0 ? spec.n_seen : spec.latent_rank;
  if (rank >= spec.word_dim) {
    for (double& v : attribute_vectors.data()) v = gauss(rng);
  } else {
    DenseMatrix latent(spec.n_attr, rank);
    for (double& v : latent.data()) v = gauss(rng);
    DenseMatrix basis(rank, spec.word_dim);
    const double b_scale = 1.0 / std::sqrt(static_cast<double>(rank));
    for (double& v : basis.data()) v = b_scale * gauss(rng);
    attribute_vectors = MatMul(latent, basis);
  }
  DenseMatrix class_vectors = MatMul(predicate, attribute_vectors);
  for (double& v : class_vectors.data()) v += kClassPerturbation * gauss(rng);
  if (spec.unit_class_vectors) {
    for (std::size_t c = 0; c < n_classes; ++c) {
      auto row = class_vectors.row(c);
      const double norm = std::sqrt(std::inner_product(row.begin(), row.end(),
                                                       row.begin(), 0.0));
      for (double& v : row) v /= norm;
    }
  }
  DenseMatrix ground_truth(spec.word_dim, spec.vis_dim);
  const double g_scale = 1.0 / std::sqrt(static_cast<double>(spec.word_dim));
  for (double& v : ground_truth.data()) v = g_scale * gauss(rng);
  const DenseMatrix clean_features = MatMul(class_vectors, ground_truth);

  SyntheticData out;
  ZslDataset& ds = out.dataset;
  for (std::size_t c = 0; c < n_classes; ++c) {
    ds.class_names.push_back(IndexedName("class", c, n_classes));
    (c < spec.n_seen ? ds.seen_classes : ds.unseen_classes).push_back(c);
  }
  for (std::size_t a = 0; a < spec.n_attr; ++a) {
    ds.attribute_names.push_back(IndexedName("attr", a, spec.n_attr));
  }

  const std::size_t n_images = n_classes * spec.images_per_class;
  ds.features = DenseMatrix(n_images, spec.vis_dim);
  DenseMatrix scores(n_images, spec.n_attr);
  for (std::size_t c = 0; c < n_classes; ++c) {
    for (std::size_t k = 0; k < spec.images_per_class; ++k) {
      const std::size_t i = c * spec.images_per_class + k;
      ds.labels.push_back(c);
      ds.is_train.push_back(c < spec.n_seen);
      auto f = ds.features.row(i);
      auto clean = clean_features.row(c);
      for (std::size_t d = 0; d < f.size(); ++d) {
        f[d] = clean[d] + spec.noise * gauss(rng);
      }
      auto s = scores.row(i);
      auto p = predicate.row(c);
      for (std::size_t a = 0; a < s.size(); ++a) {
        s[a] = std::clamp(p[a] + spec.noise * gauss(rng), 0.0, 1.0);
      }
    }
  }
  ds.attribute_scores = std::move(scores);
  ds.predicate_matrix = predicate;
  ds.Validate();

  out.words = WordSpace(spec.word_dim);
  for (std::size_t c = 0; c < n_classes; ++c) {
    auto row = class_vectors.row(c);
    out.words.Insert(ds.class_names[c],
                     std::vector<double>(row.begin(), row.end()));
  }
  for (std::size_t a = 0; a < spec.n_attr; ++a) {
    auto row = attribute_vectors.row(a);
    out.words.Insert(ds.attribute_names[a],
                     std::vector<double>(row.begin(), row.end()));
  }
  return out;
}

}  // namespace zslvec
