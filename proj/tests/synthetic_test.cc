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

#include <cmath>

#include <gtest/gtest.h>

namespace zslvec {
namespace {

TEST(SyntheticTest, SameSeedSameData) {
  SyntheticSpec spec;
  spec.seed = 5;
  const SyntheticData a = GenerateSynthetic(spec);
  const SyntheticData b = GenerateSynthetic(spec);
  EXPECT_EQ(a.dataset, b.dataset);
  EXPECT_EQ(a.words.table(), b.words.table());
  spec.seed = 6;
  EXPECT_NE(GenerateSynthetic(spec).dataset.features, a.dataset.features);
}

TEST(SyntheticTest, ShapesAndRoles) {
  const SyntheticSpec spec;
  const SyntheticData d = GenerateSynthetic(spec);
  const ZslDataset& ds = d.dataset;
  EXPECT_EQ(ds.num_classes(), 12u);
  EXPECT_EQ(ds.num_images(), 12u * 40u);
  EXPECT_EQ(ds.features.cols(), 30u);
  EXPECT_EQ(ds.num_attributes(), 12u);
  EXPECT_EQ(ds.seen_classes.size(), 8u);
  EXPECT_EQ(ds.TrainImages().size(), 8u * 40u);
  EXPECT_EQ(ds.UnseenTestImages().size(), 4u * 40u);
  EXPECT_EQ(d.words.dim(), 20u);
  EXPECT_EQ(d.words.vocabulary_size(), 24u);
  EXPECT_NO_THROW(ds.ValidateFor(TrainingMode::kPbt));
}

TEST(SyntheticTest, PredicateRowsAreDistinctBinarySignatures) {
  const SyntheticData d = GenerateSynthetic(SyntheticSpec{});
  const DenseMatrix& p = *d.dataset.predicate_matrix;
  for (double v : p.data()) EXPECT_TRUE(v == 0.0 || v == 1.0);
  for (std::size_t a = 0; a < p.rows(); ++a) {
    for (std::size_t b = a + 1; b < p.rows(); ++b) {
      EXPECT_FALSE(std::equal(p.row(a).begin(), p.row(a).end(),
                              p.row(b).begin()));
    }
  }
}

TEST(SyntheticTest, ClassVectorsHaveUnitNorm) {
  const SyntheticData d = GenerateSynthetic(SyntheticSpec{});
  for (const auto& name : d.dataset.class_names) {
    double sq = 0.0;
    for (double v : d.words.Lookup(name)) sq += v * v;
    EXPECT_NEAR(sq, 1.0, 1e-12) << name;
  }
}

TEST(SyntheticTest, NoiselessImagesOfAClassAreIdentical) {
  SyntheticSpec spec;
  spec.noise = 0.0;
  spec.images_per_class = 5;
  const ZslDataset ds = GenerateSynthetic(spec).dataset;
  for (std::size_t c = 0; c < ds.num_classes(); ++c) {
    for (std::size_t k = 1; k < 5; ++k) {
      const auto first = ds.features.row(c * 5);
      const auto other = ds.features.row(c * 5 + k);
      EXPECT_TRUE(std::equal(first.begin(), first.end(), other.begin()));
    }
  }
  // Scores equal the predicate rows exactly.
  for (std::size_t i = 0; i < ds.num_images(); ++i) {
    const auto s = ds.attribute_scores->row(i);
    const auto p = ds.predicate_matrix->row(ds.labels[i]);
    EXPECT_TRUE(std::equal(s.begin(), s.end(), p.begin()));
  }
}

TEST(SyntheticTest, ScoresAreClippedToTheUnitInterval) {
  SyntheticSpec spec;
  spec.noise = 2.0;
  const ZslDataset ds = GenerateSynthetic(spec).dataset;
  for (double v : ds.attribute_scores->data()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(SyntheticTest, SharedUnseenPredicateRowWarns) {
  SyntheticSpec spec;
  spec.n_seen = 2;
  spec.n_unseen = 2;
  spec.n_attr = 2;
  spec.noise = 0.0;
  spec.predicate = DenseMatrix{{1, 0}, {0, 1}, {1, 1}, {1, 1}};
  Warnings warnings;
  GenerateSynthetic(spec, &warnings);
  EXPECT_TRUE(warnings.Contains("ambiguous"));
  EXPECT_TRUE(warnings.Contains("noise is 0"));
}

TEST(SyntheticTest, InvalidSpecsAreConfigErrors) {
  auto code = [](SyntheticSpec spec) {
    try {
      GenerateSynthetic(spec);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  SyntheticSpec spec;
  spec.n_seen = 1;
  EXPECT_EQ(code(spec), ErrorCode::kConfig);
  spec = {};
  spec.noise = -1.0;
  EXPECT_EQ(code(spec), ErrorCode::kConfig);
  spec = {};
  spec.predicate = DenseMatrix(3, 3);
  EXPECT_EQ(code(spec), ErrorCode::kConfig);
  spec = {};
  spec.vis_dim = 0;
  EXPECT_EQ(code(spec), ErrorCode::kConfig);
}

}  // namespace
}  // namespace zslvec
