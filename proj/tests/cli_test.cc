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

#include "cli.h"

#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "run_config.h"
#include "zslvec/checkpoint.h"

namespace zslvec::cli {
namespace {

using zslvec::testing::TempDir;

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation Invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string ReadAll(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

TEST(ExitCodeTest, Mapping) {
  EXPECT_EQ(ExitCodeFor(ErrorCode::kParse), kExitInput);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kIo), kExitInput);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kValidation), kExitInput);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kNumerical), kExitNumerical);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kConfig), kExitConfig);
}

TEST(RunConfigTest, ParsesKeysAndResolvesRelativePaths) {
  const RunConfig c = ParseRunConfig(
      R"({"mode": "ibt", "epochs": 7, "hidden_widths": [32, 16],
          "features": "data/f.zslf", "lambda_bilinear": null,
          "synthetic": {"n_seen": 5, "noise": 0.5}})",
      "/base");
  EXPECT_EQ(c.train.mode, TrainingMode::kIbt);
  EXPECT_EQ(c.train.epochs, 7u);
  EXPECT_EQ(c.train.hidden_widths, (std::vector<std::size_t>{32, 16}));
  EXPECT_FALSE(c.train.lambda_bilinear.has_value());
  EXPECT_EQ(*c.features, std::filesystem::path("/base/data/f.zslf"));
  EXPECT_EQ(c.synthetic.n_seen, 5u);
  EXPECT_EQ(c.synthetic.noise, 0.5);
}

TEST(RunConfigTest, UnknownKeysAndWrongTypesAreConfigErrors) {
  for (const char* text : {R"({"epoch": 3})", R"({"epochs": "many"})",
                           R"({"synthetic": {"colour": 1}})", R"([1, 2])",
                           R"({"mode": "xbt"})", "{not json"}) {
    try {
      ParseRunConfig(text, ".");
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kConfig) << text;
    }
  }
}

TEST(RunConfigTest, OverridesAndRoundTrip) {
  RunConfig c;
  ApplyOverride(c, "learning_rate=0.001");
  ApplyOverride(c, "mode=ibt");
  ApplyOverride(c, "synthetic.images_per_class=3");
  ApplyOverride(c, "hidden_widths=8");
  EXPECT_EQ(c.train.learning_rate, 0.001);
  EXPECT_EQ(c.train.mode, TrainingMode::kIbt);
  EXPECT_EQ(c.synthetic.images_per_class, 3u);
  EXPECT_EQ(c.train.hidden_widths, (std::vector<std::size_t>{8}));
  EXPECT_THROW(ApplyOverride(c, "no_equals_sign"), Error);
  c.features = "/base/sub/f.csv";
  const RunConfig back = ParseRunConfig(RunConfigToJson(c, "/base"), "/base");
  EXPECT_EQ(back.train.learning_rate, c.train.learning_rate);
  EXPECT_EQ(back.train.mode, c.train.mode);
  EXPECT_EQ(back.synthetic.images_per_class, 3u);
  EXPECT_EQ(*back.features, *c.features);
}

class CliPipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto r = Invoke({"synth", "--out", (dir_ / "data").string(), "--set",
                        "synthetic.images_per_class=10"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    config_ = (dir_ / "data" / "config.json").string();
  }

  TempDir dir_{"cli"};
  std::string config_;
};

TEST_F(CliPipelineTest, SynthTrainEvalInspect) {
  const std::string out = (dir_ / "run").string();
  auto r = Invoke({"train", "--config", config_, "--out", out, "--set",
                "epochs=5"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("hidden width: 64"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir_ / "run" / "model.zslm"));
  EXPECT_TRUE(std::filesystem::exists(dir_ / "run" / "train_report.jsonl"));

  r = Invoke({"eval", "--config", config_, "--out", out, "--top-k", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("normalized_per_class_accuracy"), std::string::npos);
  const std::string topk = ReadAll(dir_ / "run" / "topk.tsv");
  EXPECT_EQ(topk.rfind("class\trank\timage_index\n", 0), 0u);
  EXPECT_EQ(std::count(topk.begin(), topk.end(), '\n'), 1 + 4 * 2);

  r = Invoke({"inspect", (dir_ / "run" / "model.zslm").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("layer 0: weight 20x64"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("bilinear W: 30x20"), std::string::npos) << r.out;
}

TEST_F(CliPipelineTest, FixedSeedGivesIdenticalArtifacts) {
  for (const char* name : {"a", "b"}) {
    const auto r = Invoke({"train", "--config", config_, "--seed", "7", "--out",
                        (dir_ / name).string(), "--set", "epochs=4"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
  }
  EXPECT_EQ(ReadAll(dir_ / "a" / "model.zslm"),
            ReadAll(dir_ / "b" / "model.zslm"));
  EXPECT_EQ(ReadAll(dir_ / "a" / "train_report.jsonl"),
            ReadAll(dir_ / "b" / "train_report.jsonl"));
}

TEST_F(CliPipelineTest, CvWritesTable) {
  const auto r = Invoke({"cv", "--config", config_, "--out",
                      (dir_ / "cv").string(), "--set", "epochs=1", "--set",
                      "hidden_widths=[4,8]"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string csv = ReadAll(dir_ / "cv" / "cv.csv");
  EXPECT_EQ(csv.rfind("width,fold1,fold2,mean\n4,", 0), 0u) << csv;
  EXPECT_NE(r.out.find("selected hidden width"), std::string::npos);
}

TEST_F(CliPipelineTest, MissingInputNamesThePath) {
  const std::string missing = (dir_ / "nowhere.zslf").string();
  const auto r = Invoke({"train", "--config", config_, "--set",
                      "features=" + missing});
  EXPECT_EQ(r.code, kExitInput);
  EXPECT_NE(r.err.find(missing), std::string::npos) << r.err;
}

TEST_F(CliPipelineTest, ConfigErrorsExitWithFour) {
  EXPECT_EQ(Invoke({"train", "--config", config_, "--set", "epoch=3"}).code,
            kExitConfig);
  EXPECT_EQ(Invoke({"train", "--config", config_, "--mode", "both"}).code,
            kExitConfig);
  EXPECT_EQ(Invoke({"train", "--config", config_, "--set", "batch_size=0"}).code,
            kExitConfig);
}

TEST(CliTest, GradcheckPasses) {
  const auto r = Invoke({"gradcheck", "--seeds", "3"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("worst relative error"), std::string::npos);
}

TEST(CliTest, UsageErrors) {
  EXPECT_EQ(Invoke({}).code, kExitConfig);
  EXPECT_EQ(Invoke({"frobnicate"}).code, kExitConfig);
  EXPECT_EQ(Invoke({"--help"}).code, kExitOk);
}

TEST(CliTest, InspectRejectsNonCheckpoints) {
  TempDir dir("cli");
  std::ofstream(dir / "junk.bin") << "junk";
  EXPECT_EQ(Invoke({"inspect", (dir / "junk.bin").string()}).code, kExitInput);
}

}  // namespace
}  // namespace zslvec::cli
