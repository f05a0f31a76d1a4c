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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <utility>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "run_config.h"
#include "zslvec/checkpoint.h"
#include "zslvec/dataset.h"
#include "zslvec/eval.h"
#include "zslvec/gradient_check.h"
#include "zslvec/synthetic.h"
#include "zslvec/trainer.h"
#include "zslvec/word_space.h"

namespace zslvec::cli {
namespace {

namespace fs = std::filesystem;

constexpr double kGradCheckFailThreshold = 1e-4;

struct CommonFlags {
  std::string config;
  std::string mode;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::vector<std::string> sets;
};

void AddCommonFlags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "JSON run configuration");
  cmd->add_option("--mode", flags.mode, "training regime: pbt or ibt");
  cmd->add_option("--seed", flags.seed, "seed for every random stream");
  cmd->add_option("--out", flags.out, "output directory");
  cmd->add_option("--set", flags.sets, "override one config key (key=value)")
      ->take_all();
}

RunConfig ResolveConfig(const CommonFlags& flags) {
  RunConfig config =
      flags.config.empty() ? RunConfig{} : LoadRunConfig(flags.config);
  for (const auto& s : flags.sets) ApplyOverride(config, s);
  if (!flags.mode.empty()) config.train.mode = ParseTrainingMode(flags.mode);
  if (flags.seed) {
    config.train.seed = *flags.seed;
    config.synthetic.seed = *flags.seed;
  }
  if (!flags.out.empty()) config.out = flags.out;
  config.train.Validate();
  return config;
}

fs::path OutputDir(const RunConfig& config) {
  fs::path dir = config.out.value_or(".");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIo, fmt::format("cannot create output directory "
                                            "'{}': {}",
                                            dir.string(), ec.message()));
  }
  return dir;
}

const fs::path& Require(const std::optional<fs::path>& path,
                        const char* key) {
  if (!path) {
    throw Error(ErrorCode::kConfig,
                fmt::format("config key '{}' is required", key));
  }
  return *path;
}

void CheckExists(const std::optional<fs::path>& path, const char* key) {
  if (path && !fs::is_regular_file(*path)) {
    throw Error(ErrorCode::kIo, fmt::format("input '{}' ({}) does not exist",
                                            path->string(), key));
  }
}

// Checks every dataset input before anything is loaded.
void ValidateDatasetPaths(const RunConfig& c) {
  Require(c.features, "features");
  Require(c.labels, "labels");
  Require(c.split, "split");
  Require(c.word_vectors, "word_vectors");
  if (!c.attributes && !c.predicate && !c.attribute_scores) {
    throw Error(ErrorCode::kConfig,
                "one of 'attributes', 'predicate' or 'attribute_scores' is "
                "required");
  }
  CheckExists(c.features, "features");
  CheckExists(c.labels, "labels");
  CheckExists(c.split, "split");
  CheckExists(c.word_vectors, "word_vectors");
  CheckExists(c.attributes, "attributes");
  CheckExists(c.predicate, "predicate");
  CheckExists(c.attribute_scores, "attribute_scores");
  CheckExists(c.margins, "margins");
}

struct Inputs {
  ZslDataset dataset;
  WordSpace words{1};
  LabelSpaces spaces;
};

Inputs LoadInputs(RunConfig& c, Warnings* warnings) {
  Inputs in;
  if (c.attributes) {
    in.dataset = LoadDataset(*c.features, *c.labels, *c.split, *c.attributes,
                             c.train.mode, warnings);
  } else {
    in.dataset = LoadDataset(DatasetPaths{*c.features, *c.labels, *c.split,
                                          c.predicate, c.attribute_scores},
                             c.train.mode, warnings);
  }
  in.words = LoadWordVectors(*c.word_vectors, c.word_dim, warnings);
  in.spaces = BuildSpaces(in.words, in.dataset.class_names,
                          in.dataset.attribute_names,
                          EmbedOptions{c.normalize_words}, warnings);
  if (c.margins) {
    c.train.margins = ReadMarginMatrix(*c.margins, in.dataset.class_names);
  }
  return in;
}

void FlushWarnings(const Warnings& warnings, std::ostream& err) {
  for (const auto& w : warnings.messages()) err << "warning: " << w << '\n';
}

void WriteFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    throw Error(ErrorCode::kIo, fmt::format("cannot write '{}'", path.string()));
  }
}

int CmdTrain(RunConfig c, std::ostream& out, Warnings& warnings) {
  ValidateDatasetPaths(c);
  const fs::path dir = OutputDir(c);
  Inputs in = LoadInputs(c, &warnings);
  const fs::path model_path = dir / "model.zslm";
  ModelCheckpoint ckpt;
  ckpt.config_json = c.train.ToJson();
  ckpt.word_space_fingerprint = in.words.Fingerprint();
  TrainResult result;
  try {
    result = Train(in.dataset, in.spaces, c.train, &warnings);
  } catch (const DivergenceError& e) {
    ckpt.model = e.last_good();
    SaveModel(model_path, ckpt);
    throw Error(ErrorCode::kNumerical,
                fmt::format("{} (last good model from epoch {} written to "
                            "'{}')",
                            e.what(), e.epoch(), model_path.string()));
  }
  ckpt.model = std::move(result.model);
  SaveModel(model_path, ckpt);
  std::ofstream report(dir / "train_report.jsonl", std::ios::binary);
  WriteTrainReport(report, result.report);
  if (!report) {
    throw Error(ErrorCode::kIo, "cannot write train_report.jsonl");
  }

  fmt::print(out, "mode: {}\n", TrainingModeName(c.train.mode));
  fmt::print(out, "hidden width: {}\n", result.report.selected_hidden_width);
  if (!result.report.epochs.empty()) {
    const EpochRecord& last = result.report.epochs.back();
    fmt::print(out,
               "epochs: {}{}\nfinal total loss: {:.6g}\nfinal hinge: {:.6g}\n"
               "constraint satisfaction: {:.4f}\ntrain accuracy: {:.4f}\n",
               last.epoch, result.report.early_stopped ? " (early stop)" : "",
               last.total, last.hinge, last.satisfaction_rate,
               last.train_accuracy);
  }
  fmt::print(out, "wall clock: {:.2f} s\ncheckpoint: {}\n",
             result.report.wall_clock_seconds, model_path.string());
  return kExitOk;
}

int CmdCv(RunConfig c, std::ostream& out, Warnings& warnings) {
  ValidateDatasetPaths(c);
  const fs::path dir = OutputDir(c);
  Inputs in = LoadInputs(c, &warnings);
  const CrossValidationResult cv =
      CrossValidate(in.dataset, in.spaces, c.train, &warnings);
  std::string csv = "width,fold1,fold2,mean\n";
  fmt::print(out, "{:>8} {:>10} {:>10} {:>10}\n", "width", "fold1", "fold2",
             "mean");
  for (std::size_t w = 0; w < cv.widths.size(); ++w) {
    csv += fmt::format("{},{},{},{}\n", cv.widths[w],
                       FormatExact(cv.fold_scores[w][0]),
                       FormatExact(cv.fold_scores[w][1]),
                       FormatExact(cv.mean_scores[w]));
    fmt::print(out, "{:>8} {:>10.4f} {:>10.4f} {:>10.4f}\n", cv.widths[w],
               cv.fold_scores[w][0], cv.fold_scores[w][1], cv.mean_scores[w]);
  }
  WriteFile(dir / "cv.csv", csv);
  fmt::print(out, "selected hidden width: {}\n", cv.selected_width);
  return kExitOk;
}

int CmdEval(RunConfig c, const std::string& checkpoint_flag,
            std::optional<std::size_t> top_k, bool generalized,
            std::ostream& out, Warnings& warnings) {
  if (!checkpoint_flag.empty()) c.checkpoint = checkpoint_flag;
  if (!c.checkpoint) c.checkpoint = fs::path(c.out.value_or(".")) / "model.zslm";
  if (top_k) c.top_k = *top_k;
  if (generalized) c.generalized = true;
  ValidateDatasetPaths(c);
  CheckExists(c.checkpoint, "checkpoint");
  const fs::path dir = OutputDir(c);
  Inputs in = LoadInputs(c, &warnings);
  const ModelCheckpoint ckpt =
      LoadModel(*c.checkpoint, in.words.Fingerprint(), &warnings);

  const ZeroShotEvaluation eval = EvaluateZeroShot(
      ckpt.model, in.dataset, in.spaces, c.generalized, &warnings);
  const auto& names = in.dataset.class_names;
  {
    std::ofstream text(dir / "eval.txt", std::ios::binary);
    WriteEvalText(text, eval.result, names);
    std::ofstream csv(dir / "eval.csv", std::ios::binary);
    WriteEvalCsv(csv, eval.result, names);
    if (!text || !csv) throw Error(ErrorCode::kIo, "cannot write eval files");
  }

  const DenseMatrix features = GatherRows(in.dataset.features, eval.images);
  std::string topk = "class\trank\timage_index\n";
  for (std::size_t cls : eval.result.classes) {
    const auto ranked = TopKImages(ckpt.model, features,
                                   in.spaces.class_vectors.row(cls),
                                   std::min(c.top_k, eval.images.size()));
    for (std::size_t r = 0; r < ranked.size(); ++r) {
      topk += fmt::format("{}\t{}\t{}\n", names[cls], r + 1,
                          eval.images[ranked[r]]);
    }
  }
  WriteFile(dir / "topk.tsv", topk);
  WriteEvalText(out, eval.result, names);
  return kExitOk;
}

int CmdSynth(RunConfig c, std::ostream& out, Warnings& warnings) {
  const fs::path dir = OutputDir(c);
  SyntheticData data = GenerateSynthetic(c.synthetic, &warnings);
  const DatasetPaths paths = SaveDataset(dir, data.dataset);
  const fs::path words_path = dir / "words.txt";
  WriteWordVectors(words_path, data.words);

  RunConfig run = c;
  run.features = paths.features;
  run.labels = paths.labels;
  run.split = paths.split;
  run.attributes.reset();
  run.predicate = paths.predicate;
  run.attribute_scores = paths.attribute_scores;
  run.word_vectors = words_path;
  run.word_dim = c.synthetic.word_dim;
  run.out = dir;
  run.checkpoint.reset();
  run.margins.reset();
  WriteFile(dir / "config.json", RunConfigToJson(run, dir));

  fmt::print(out,
             "wrote {} images ({} seen / {} unseen classes, {} attributes) "
             "to {}\n",
             data.dataset.features.rows(), data.dataset.seen_classes.size(),
             data.dataset.unseen_classes.size(),
             data.dataset.attribute_names.size(), dir.string());
  fmt::print(out, "config: {}\n", (dir / "config.json").string());
  return kExitOk;
}

int CmdGradcheck(const RunConfig& c, std::size_t n_seeds, double step,
                 std::ostream& out) {
  std::vector<std::uint64_t> seeds(n_seeds);
  for (std::size_t i = 0; i < n_seeds; ++i) seeds[i] = c.train.seed + i;
  const GradCheckResult r =
      RunGradientChecks(seeds, DefaultGradCheckShapes(), step);
  fmt::print(out, "blocks checked: {}\nworst relative error: {:.3e}\n"
                  "worst case: {}\n",
             r.blocks_checked, r.worst_relative_error, r.worst_case);
  if (!(r.worst_relative_error <= kGradCheckFailThreshold)) {
    throw Error(ErrorCode::kNumerical,
                fmt::format("gradient check failed: {:.3e} > {:.0e}",
                            r.worst_relative_error, kGradCheckFailThreshold));
  }
  return kExitOk;
}

int CmdInspect(const std::string& path, std::ostream& out,
               Warnings& warnings) {
  const ModelCheckpoint ckpt = LoadModel(path, std::nullopt, &warnings);
  const TransformNet& net = ckpt.model.transform;
  fmt::print(out, "format version: {}\n", ckpt.version);
  fmt::print(out, "word space fingerprint: {:016x}\n",
             ckpt.word_space_fingerprint);
  fmt::print(out, "leaky slope: {}\n", net.leaky_slope());
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    const DenseLayer& layer = net.layers()[l];
    fmt::print(out, "layer {}: weight {} bias {}\n", l,
               layer.weight.ShapeString(), layer.bias.ShapeString());
  }
  fmt::print(out, "bilinear W: {}\n", ckpt.model.bilinear.ShapeString());
  fmt::print(out, "config: {}\n", ckpt.config_json);
  return kExitOk;
}

}  // namespace

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNumerical:
      return kExitNumerical;
    case ErrorCode::kConfig:
      return kExitConfig;
    default:
      return kExitInput;
  }
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Zero-shot classification with transformed word vectors",
               "zslvec"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string checkpoint;
  std::optional<std::size_t> top_k;
  bool generalized = false;
  std::size_t n_seeds = 20;
  double step = 1e-5;

  CLI::App* train = app.add_subcommand("train", "train a joint model");
  CLI::App* eval = app.add_subcommand("eval", "zero-shot evaluation");
  CLI::App* cv = app.add_subcommand("cv", "2-fold cross-validation over "
                                          "hidden widths");
  CLI::App* synth = app.add_subcommand("synth", "write a synthetic dataset");
  CLI::App* gradcheck =
      app.add_subcommand("gradcheck", "finite-difference gradient checks");
  CLI::App* inspect = app.add_subcommand("inspect", "describe a checkpoint");
  for (CLI::App* cmd : {train, eval, cv, synth, gradcheck}) {
    AddCommonFlags(cmd, flags);
  }
  eval->add_option("--checkpoint", checkpoint, "model checkpoint");
  eval->add_option("--top-k", top_k, "images listed per class in topk.tsv");
  eval->add_flag("--generalized", generalized,
                 "score test images against seen and unseen classes");
  gradcheck->add_option("--seeds", n_seeds, "number of random seeds")
      ->check(CLI::PositiveNumber);
  gradcheck->add_option("--step", step, "central-difference step")
      ->check(CLI::PositiveNumber);
  inspect->add_option("checkpoint", checkpoint, "model checkpoint")
      ->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  Warnings warnings;
  int code = kExitOk;
  try {
    if (inspect->parsed()) {
      code = CmdInspect(checkpoint, out, warnings);
    } else {
      RunConfig config = ResolveConfig(flags);
      if (train->parsed()) {
        code = CmdTrain(std::move(config), out, warnings);
      } else if (eval->parsed()) {
        code = CmdEval(std::move(config), checkpoint, top_k, generalized, out,
                       warnings);
      } else if (cv->parsed()) {
        code = CmdCv(std::move(config), out, warnings);
      } else if (synth->parsed()) {
        code = CmdSynth(std::move(config), out, warnings);
      } else {
        code = CmdGradcheck(config, n_seeds, step, out);
      }
    }
  } catch (const Error& e) {
    FlushWarnings(warnings, err);
    err << "error [" << ErrorCodeName(e.code()) << "]: " << e.what() << '\n';
    return ExitCodeFor(e.code());
  } catch (const fs::filesystem_error& e) {
    FlushWarnings(warnings, err);
    err << "error [io]: " << e.what() << '\n';
    return kExitInput;
  }
  FlushWarnings(warnings, err);
  return code;
}

}  // namespace zslvec::cli
