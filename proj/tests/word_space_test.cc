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

#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "zslvec/error.h"

namespace zslvec {
namespace {

WordSpace TwoDim(std::initializer_list<std::pair<const char*, std::vector<double>>>
                     entries) {
  WordSpace w(2);
  for (const auto& [token, vec] : entries) w.Insert(token, vec);
  return w;
}

TEST(EmbedNameTest, SingleWordReturnsRawVector) {
  const WordSpace w = TwoDim({{"cat", {1, 2}}});
  EXPECT_EQ(w.EmbedName("cat"), (std::vector<double>{1, 2}));
}

TEST(EmbedNameTest, MultiWordNameIsTheMean) {
  const WordSpace w = TwoDim({{"persian", {0, 0}}, {"cat", {2, 4}}});
  EXPECT_EQ(w.EmbedName("persian+cat"), (std::vector<double>{1, 2}));
}

TEST(EmbedNameTest, PartialCoverageDropsMissingWordWithWarning) {
  const WordSpace w = TwoDim({{"whale", {3, -1}}});
  Warnings warnings;
  EXPECT_EQ(w.EmbedName("killer+whale", {}, &warnings),
            (std::vector<double>{3, -1}));
  ASSERT_EQ(warnings.messages().size(), 1u);
  EXPECT_TRUE(warnings.Contains("killer"));
  EXPECT_TRUE(warnings.Contains("partial coverage"));
}

TEST(EmbedNameTest, NoCoverageIsMissingTokenError) {
  const WordSpace w = TwoDim({{"whale", {3, -1}}});
  try {
    w.EmbedName("grizzly+bear");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingToken);
    EXPECT_NE(std::string(e.what()).find("grizzly+bear"), std::string::npos);
  }
  EXPECT_THROW(w.EmbedName("+"), Error);
}

TEST(EmbedNameTest, LookupIsLowercasedAndStripped) {
  const WordSpace w = TwoDim({{"Polar", {1, 1}}, {"bear", {3, 5}}});
  EXPECT_TRUE(w.Contains("polar"));
  EXPECT_EQ(w.EmbedName(" POLAR + Bear "), (std::vector<double>{2, 3}));
}

TEST(EmbedNameTest, PermutationInvariant) {
  const WordSpace w =
      TwoDim({{"a", {0.1, 0.7}}, {"b", {1.3, -2.9}}, {"c", {5.5, 0.25}}});
  const auto x = w.EmbedName("a+b+c");
  const auto y = w.EmbedName("c+a+b");
  for (std::size_t k = 0; k < 2; ++k) EXPECT_NEAR(x[k], y[k], 1e-15);
}

TEST(EmbedNameTest, LinearInTheTable) {
  const double c = 2.5;
  const WordSpace w = TwoDim({{"a", {0.1, 0.7}}, {"b", {1.3, -2.9}}});
  const WordSpace scaled =
      TwoDim({{"a", {c * 0.1, c * 0.7}}, {"b", {c * 1.3, c * -2.9}}});
  const auto x = w.EmbedName("a+b");
  const auto y = scaled.EmbedName("a+b");
  for (std::size_t k = 0; k < 2; ++k) EXPECT_NEAR(c * x[k], y[k], 1e-14);
}

TEST(EmbedNameTest, NormalizeWordsOption) {
  const WordSpace w = TwoDim({{"a", {3, 4}}, {"b", {0, 2}}});
  const auto v = w.EmbedName("a+b", EmbedOptions{.normalize_words = true});
  EXPECT_NEAR(v[0], 0.3, 1e-15);
  EXPECT_NEAR(v[1], 0.9, 1e-15);
}

TEST(WordSpaceTest, InsertRejectsWrongDimension) {
  WordSpace w(3);
  EXPECT_THROW(w.Insert("x", {1, 2}), Error);
}

TEST(WordSpaceTest, InsertReportsReplacement) {
  WordSpace w(1);
  EXPECT_FALSE(w.Insert("x", {1}));
  EXPECT_TRUE(w.Insert("X", {2}));
  EXPECT_EQ(w.Lookup("x")[0], 2.0);
  EXPECT_EQ(w.vocabulary_size(), 1u);
}

TEST(WordSpaceTest, FingerprintDependsOnVocabularyAndDim) {
  WordSpace a(2), b(2), c(3);
  a.Insert("x", {1, 2});
  b.Insert("x", {9, 9});  // values do not enter the fingerprint
  c.Insert("x", {1, 2, 3});
  EXPECT_EQ(a.Fingerprint(), b.Fingerprint());
  EXPECT_NE(a.Fingerprint(), c.Fingerprint());
  b.Insert("y", {0, 0});
  EXPECT_NE(a.Fingerprint(), b.Fingerprint());
}

TEST(BuildSpacesTest, Shapes) {
  WordSpace w(4);
  for (const char* t : {"c1", "c2", "a1", "a2", "a3"}) w.Insert(t, {1, 2, 3, 4});
  const std::vector<std::string> classes = {"c1", "c2"};
  const std::vector<std::string> attrs = {"a1", "a2", "a3"};
  const LabelSpaces s = BuildSpaces(w, classes, attrs);
  EXPECT_EQ(s.class_vectors.rows(), 2u);
  EXPECT_EQ(s.class_vectors.cols(), 4u);
  EXPECT_EQ(s.attribute_vectors.rows(), 3u);
  EXPECT_EQ(s.attribute_vectors.cols(), 4u);
}

TEST(BuildSpacesTest, PermutedNamesPermuteRows) {
  const WordSpace w = TwoDim({{"x", {1, 0}}, {"y", {0, 1}}, {"z", {2, 2}}});
  const std::vector<std::string> order = {"x", "y", "z"};
  const std::vector<std::string> permuted = {"z", "x", "y"};
  const LabelSpaces a = BuildSpaces(w, order, {});
  const LabelSpaces b = BuildSpaces(w, permuted, {});
  const std::size_t perm[] = {2, 0, 1};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t k = 0; k < 2; ++k) {
      EXPECT_EQ(b.class_vectors(i, k), a.class_vectors(perm[i], k));
    }
  }
}

TEST(BuildSpacesTest, DuplicateNamesGiveIdenticalRows) {
  const WordSpace w = TwoDim({{"x", {1, 5}}, {"y", {0, 1}}});
  const std::vector<std::string> names = {"x", "y", "x"};
  const LabelSpaces s = BuildSpaces(w, names, {});
  EXPECT_EQ(s.class_vectors(0, 0), s.class_vectors(2, 0));
  EXPECT_EQ(s.class_vectors(0, 1), s.class_vectors(2, 1));
}

TEST(BuildSpacesTest, MissingNameIsReportedWithItsName) {
  const WordSpace w = TwoDim({{"x", {1, 5}}});
  const std::vector<std::string> names = {"x"};
  const std::vector<std::string> attrs = {"striped"};
  try {
    BuildSpaces(w, names, attrs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingToken);
    EXPECT_NE(std::string(e.what()).find("attribute name 'striped'"),
              std::string::npos);
  }
}

TEST(SplitNameTest, SplitsOnPlusAndDropsEmptyParts) {
  EXPECT_EQ(SplitName("persian+cat"), (std::vector<std::string>{"persian", "cat"}));
  EXPECT_EQ(SplitName("a++B"), (std::vector<std::string>{"a", "b"}));
  EXPECT_TRUE(SplitName("").empty());
}

}  // namespace
}  // namespace zslvec
