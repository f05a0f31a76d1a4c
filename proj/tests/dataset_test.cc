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

#include "zslvec/dataset.h"

#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "zslvec/error.h"
#include "zslvec/synthetic.h"

namespace zslvec {
namespace {

using testing::TempDir;

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

ErrorCode CodeOf(const std::function<void()>& f, std::string* message = nullptr) {
  try {
    f();
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kIo;
}

// Four images: two of the seen class "cat", one of "dog" (seen), one of the
// unseen class "zebra".
struct FourImageFixture {
  TempDir dir{"dataset"};
  DatasetPaths paths;

  FourImageFixture() {
    paths.features = dir / "features.csv";
    paths.labels = dir / "labels.tsv";
    paths.split = dir / "split.txt";
    paths.predicate = dir / "predicate.csv";
    WriteText(paths.features, "4,2\n1,0\n0.9,0.1\n0,1\n0.5,0.5\n");
    WriteText(paths.labels, "0\tcat\n1\tcat\n2\tdog\n3\tzebra\n");
    WriteText(paths.split, "seen:\ndog\ncat\nunseen:\nzebra\n");
    WriteText(*paths.predicate,
              "class,striped,furry\ncat,0,1\ndog,0,1\nzebra,1,0\n");
  }
};

TEST(WordVectorFileTest, ReadsBackWhatWasWritten) {
  TempDir dir("words");
  WordSpace w(3);
  w.Insert("cat", {0.1, -2.5, 1e-300});
  w.Insert("dog", {1.0 / 3.0, 7, 0});
  WriteWordVectors(dir / "w.txt", w);
  const WordSpace back = LoadWordVectors(dir / "w.txt", 3);
  EXPECT_EQ(back.table(), w.table());
}

TEST(WordVectorFileTest, WrongWidthNamesTheLine) {
  TempDir dir("words");
  std::string text = "ok";
  for (int k = 0; k < 300; ++k) text += " 0.5";
  text += "\nshort";
  for (int k = 0; k < 299; ++k) text += " 0.5";
  text += "\n";
  WriteText(dir / "w.txt", text);
  std::string msg;
  EXPECT_EQ(CodeOf([&] { LoadWordVectors(dir / "w.txt", 300); }, &msg),
            ErrorCode::kParse);
  EXPECT_NE(msg.find(":2:"), std::string::npos) << msg;
  EXPECT_NE(msg.find("299"), std::string::npos) << msg;
}

TEST(WordVectorFileTest, SmallVocabularyAndInferredDim) {
  TempDir dir("words");
  WriteText(dir / "w.txt", "a 1 2\nb 3 4\n\nc 5 6\n");
  const WordSpace w = LoadWordVectors(dir / "w.txt", 0);
  EXPECT_EQ(w.dim(), 2u);
  EXPECT_EQ(w.vocabulary_size(), 3u);
  const auto c = w.Lookup("c");
  EXPECT_EQ(std::vector<double>(c.begin(), c.end()), (std::vector<double>{5, 6}));
}

TEST(WordVectorFileTest, DuplicateTokenKeepsLastWithWarning) {
  TempDir dir("words");
  WriteText(dir / "w.txt", "a 1\na 2\n");
  Warnings warnings;
  const WordSpace w = LoadWordVectors(dir / "w.txt", 1, &warnings);
  EXPECT_EQ(w.Lookup("a")[0], 2.0);
  EXPECT_TRUE(warnings.Contains("duplicate token 'a'"));
}

TEST(WordVectorFileTest, MissingAndEmptyFiles) {
  TempDir dir("words");
  EXPECT_EQ(CodeOf([&] { LoadWordVectors(dir / "nope.txt", 2); }),
            ErrorCode::kIo);
  WriteText(dir / "empty.txt", "\n");
  EXPECT_EQ(CodeOf([&] { LoadWordVectors(dir / "empty.txt", 0); }),
            ErrorCode::kParse);
}

TEST(FeatureFileTest, BinaryRoundTripIsBitExact) {
  TempDir dir("features");
  const DenseMatrix m = testing::RandomMatrix(5, 7, 3, -1e6, 1e6);
  WriteFeatureMatrix(dir / "f.zslf", m);
  EXPECT_EQ(ReadFeatureMatrix(dir / "f.zslf"), m);
}

TEST(FeatureFileTest, CsvWithHeader) {
  TempDir dir("features");
  WriteText(dir / "f.csv", "# comment\n2,3\n1,2,3\n4,5,6\n");
  EXPECT_EQ(ReadFeatureMatrix(dir / "f.csv"),
            (DenseMatrix{{1, 2, 3}, {4, 5, 6}}));
}

TEST(FeatureFileTest, CsvRowCountMustMatchHeader) {
  TempDir dir("features");
  WriteText(dir / "f.csv", "3,1\n1\n2\n");
  EXPECT_EQ(CodeOf([&] { ReadFeatureMatrix(dir / "f.csv"); }),
            ErrorCode::kParse);
}

TEST(FeatureFileTest, VersionAndTruncationErrors) {
  TempDir dir("features");
  WriteFeatureMatrix(dir / "f.zslf", DenseMatrix{{1, 2}});
  std::string bytes;
  {
    std::ifstream in(dir / "f.zslf", std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(in), {});
  }
  std::string future = bytes;
  future[4] = 9;
  {
    std::ofstream out(dir / "v.zslf", std::ios::binary);
    out << future;
  }
  EXPECT_EQ(CodeOf([&] { ReadFeatureMatrix(dir / "v.zslf"); }),
            ErrorCode::kVersion);
  {
    std::ofstream out(dir / "t.zslf", std::ios::binary);
    out << bytes.substr(0, bytes.size() - 3);
  }
  EXPECT_EQ(CodeOf([&] { ReadFeatureMatrix(dir / "t.zslf"); }),
            ErrorCode::kCorrupt);
}

TEST(LoadDatasetTest, FourImageExample) {
  FourImageFixture fx;
  const ZslDataset ds = LoadDataset(fx.paths, TrainingMode::kPbt);
  EXPECT_EQ(ds.class_names, (std::vector<std::string>{"cat", "dog", "zebra"}));
  EXPECT_EQ(ds.seen_classes, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(ds.unseen_classes, (std::vector<std::size_t>{2}));
  EXPECT_EQ(ds.labels, (std::vector<std::size_t>{0, 0, 1, 2}));
  EXPECT_EQ(ds.TrainImages(), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(ds.UnseenTestImages(), (std::vector<std::size_t>{3}));
  EXPECT_EQ(ds.attribute_names,
            (std::vector<std::string>{"striped", "furry"}));
  EXPECT_EQ((*ds.predicate_matrix)(2, 0), 1.0);
}

TEST(LoadDatasetTest, SingleAttributeFileIsDetectedAsPredicate) {
  FourImageFixture fx;
  const ZslDataset ds =
      LoadDataset(fx.paths.features, fx.paths.labels, fx.paths.split,
                  *fx.paths.predicate, TrainingMode::kPbt);
  EXPECT_TRUE(ds.predicate_matrix.has_value());
  EXPECT_FALSE(ds.attribute_scores.has_value());
}

TEST(LoadDatasetTest, TrainingImageOfUnseenClassIsRejected) {
  FourImageFixture fx;
  WriteText(fx.paths.labels,
            "0\tcat\n1\tcat\n2\tdog\n3\tzebra\ttrain\n");
  std::string msg;
  EXPECT_EQ(CodeOf([&] { LoadDataset(fx.paths, TrainingMode::kPbt); }, &msg),
            ErrorCode::kValidation);
  EXPECT_NE(msg.find("zebra"), std::string::npos) << msg;
}

TEST(LoadDatasetTest, PredicateOutOfRangeNamesRowAndColumn) {
  FourImageFixture fx;
  WriteText(*fx.paths.predicate,
            "class,striped,furry\ncat,0,1\ndog,1.5,1\nzebra,1,0\n");
  std::string msg;
  EXPECT_EQ(CodeOf([&] { LoadDataset(fx.paths, TrainingMode::kPbt); }, &msg),
            ErrorCode::kValidation);
  EXPECT_NE(msg.find("'dog'"), std::string::npos) << msg;
  EXPECT_NE(msg.find("'striped'"), std::string::npos) << msg;
}

TEST(LoadDatasetTest, UnlabeledImageIsAnError) {
  FourImageFixture fx;
  WriteText(fx.paths.labels, "0\tcat\n1\tcat\n2\tdog\n");
  EXPECT_EQ(CodeOf([&] { LoadDataset(fx.paths, TrainingMode::kPbt); }),
            ErrorCode::kValidation);
}

TEST(LoadDatasetTest, ClassBothSeenAndUnseenIsAnError) {
  FourImageFixture fx;
  WriteText(fx.paths.split, "seen:\ndog\ncat\nunseen:\nzebra\ncat\n");
  EXPECT_EQ(CodeOf([&] { LoadDataset(fx.paths, TrainingMode::kPbt); }),
            ErrorCode::kValidation);
}

TEST(LoadDatasetTest, SplitLineOrderDoesNotMatter) {
  FourImageFixture fx;
  const ZslDataset a = LoadDataset(fx.paths, TrainingMode::kPbt);
  WriteText(fx.paths.split, "unseen:\nzebra\nseen:\ncat\ndog\n");
  const ZslDataset b = LoadDataset(fx.paths, TrainingMode::kPbt);
  EXPECT_EQ(a, b);
}

TEST(LoadDatasetTest, IbtWithoutPredicateIsAllowedButPbtDerivesIt) {
  FourImageFixture fx;
  fx.paths.predicate.reset();
  fx.paths.attribute_scores = fx.dir / "scores.csv";
  WriteText(*fx.paths.attribute_scores,
            "image,striped,furry\n0,0,1\n1,0.5,1\n2,0,0\n3,1,0\n");
  const ZslDataset ibt = LoadDataset(fx.paths, TrainingMode::kIbt);
  EXPECT_FALSE(ibt.predicate_matrix.has_value());
  Warnings warnings;
  const ZslDataset pbt = LoadDataset(fx.paths, TrainingMode::kPbt, &warnings);
  ASSERT_TRUE(pbt.predicate_matrix.has_value());
  EXPECT_EQ((*pbt.predicate_matrix)(0, 0), 0.25);
  EXPECT_EQ((*pbt.predicate_matrix)(0, 1), 1.0);
  EXPECT_TRUE(warnings.Contains("derived"));
}

TEST(DerivePredicateTest, ClassWithoutImagesGetsZeroRowAndWarning) {
  ZslDataset ds;
  ds.features = DenseMatrix(2, 1);
  ds.class_names = {"a", "b", "c"};
  ds.labels = {0, 0};
  ds.is_train = {true, true};
  ds.seen_classes = {0, 1};
  ds.unseen_classes = {2};
  ds.attribute_names = {"x"};
  ds.attribute_scores = DenseMatrix{{0.2}, {0.6}};
  Warnings warnings;
  EXPECT_TRUE(DerivePredicateFromImageScores(ds, &warnings));
  EXPECT_DOUBLE_EQ((*ds.predicate_matrix)(0, 0), 0.4);
  EXPECT_EQ((*ds.predicate_matrix)(1, 0), 0.0);
  EXPECT_TRUE(warnings.Contains("'b'"));
  EXPECT_FALSE(DerivePredicateFromImageScores(ds, &warnings));
}

TEST(SaveDatasetTest, RoundTripIsExact) {
  for (std::uint64_t seed : {0, 1, 2}) {
    SyntheticSpec spec;
    spec.seed = seed;
    spec.images_per_class = 5;
    const SyntheticData data = GenerateSynthetic(spec);
    TempDir dir("save");
    const DatasetPaths paths = SaveDataset(dir.path(), data.dataset);
    const ZslDataset back = LoadDataset(paths, TrainingMode::kIbt);
    EXPECT_EQ(back, data.dataset) << "seed " << seed;
  }
}

TEST(MarginFileTest, BareAndLabeledFormsAgree) {
  TempDir dir("margins");
  const std::vector<std::string> names = {"a", "b"};
  WriteText(dir / "bare.csv", "0,1.5\n2,0\n");
  WriteText(dir / "labeled.csv", "class,b,a\nb,0,2\na,1.5,0\n");
  const DenseMatrix expected = {{0, 1.5}, {2, 0}};
  EXPECT_EQ(ReadMarginMatrix(dir / "bare.csv", names), expected);
  EXPECT_EQ(ReadMarginMatrix(dir / "labeled.csv", names), expected);
}

TEST(MarginFileTest, NonzeroDiagonalAndNegativeEntriesAreRejected) {
  TempDir dir("margins");
  const std::vector<std::string> names = {"a", "b"};
  WriteText(dir / "diag.csv", "1,1\n1,0\n");
  WriteText(dir / "neg.csv", "0,-1\n1,0\n");
  WriteText(dir / "shape.csv", "0,1\n");
  EXPECT_EQ(CodeOf([&] { ReadMarginMatrix(dir / "diag.csv", names); }),
            ErrorCode::kValidation);
  EXPECT_EQ(CodeOf([&] { ReadMarginMatrix(dir / "neg.csv", names); }),
            ErrorCode::kValidation);
  EXPECT_EQ(CodeOf([&] { ReadMarginMatrix(dir / "shape.csv", names); }),
            ErrorCode::kDimension);
}

TEST(TrainingModeTest, ParsesCaseInsensitively) {
  EXPECT_EQ(ParseTrainingMode("PBT"), TrainingMode::kPbt);
  EXPECT_EQ(ParseTrainingMode(" ibt "), TrainingMode::kIbt);
  EXPECT_EQ(CodeOf([] { ParseTrainingMode("both"); }), ErrorCode::kConfig);
}

}  // namespace
}  // namespace zslvec
