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

#include "run_config.h"

#include <fstream>
#include <functional>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "zslvec/error.h"

namespace zslvec::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

[[noreturn]] void Fail(const std::string& message) {
  throw Error(ErrorCode::kConfig, message);
}

std::size_t AsSize(const json& v, const std::string& key) {
  if (!v.is_number_unsigned()) {
    Fail(fmt::format("'{}' must be a non-negative integer", key));
  }
  return v.get<std::size_t>();
}

std::uint64_t AsU64(const json& v, const std::string& key) {
  if (!v.is_number_unsigned()) {
    Fail(fmt::format("'{}' must be a non-negative integer", key));
  }
  return v.get<std::uint64_t>();
}

double AsDouble(const json& v, const std::string& key) {
  if (!v.is_number()) Fail(fmt::format("'{}' must be a number", key));
  return v.get<double>();
}

bool AsBool(const json& v, const std::string& key) {
  if (!v.is_boolean()) Fail(fmt::format("'{}' must be true or false", key));
  return v.get<bool>();
}

fs::path AsPath(const json& v, const std::string& key, const fs::path& base) {
  if (!v.is_string() || v.get<std::string>().empty()) {
    Fail(fmt::format("'{}' must be a non-empty path string", key));
  }
  fs::path p = v.get<std::string>();
  return (p.is_relative() && !base.empty() ? base / p : p).lexically_normal();
}

json PathJson(const fs::path& p, const fs::path& base) {
  if (!base.empty()) {
    const fs::path rel = p.lexically_relative(base);
    if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
  }
  return p.generic_string();
}

using Setter = std::function<void(RunConfig&, const json&, const fs::path&)>;
using Getter = std::function<json(const RunConfig&, const fs::path&)>;

struct Field {
  std::string key;
  Setter set;
  Getter get;
};

template <typename T>
Field SizeField(std::string key, T RunConfig::*group, std::size_t T::*member) {
  return {key,
          [=](RunConfig& c, const json& v, const fs::path&) {
            (c.*group).*member = AsSize(v, key);
          },
          [=](const RunConfig& c, const fs::path&) -> json {
            return (c.*group).*member;
          }};
}

template <typename T>
Field DoubleField(std::string key, T RunConfig::*group, double T::*member) {
  return {key,
          [=](RunConfig& c, const json& v, const fs::path&) {
            (c.*group).*member = AsDouble(v, key);
          },
          [=](const RunConfig& c, const fs::path&) -> json {
            return (c.*group).*member;
          }};
}

template <typename T>
Field BoolField(std::string key, T RunConfig::*group, bool T::*member) {
  return {key,
          [=](RunConfig& c, const json& v, const fs::path&) {
            (c.*group).*member = AsBool(v, key);
          },
          [=](const RunConfig& c, const fs::path&) -> json {
            return (c.*group).*member;
          }};
}

Field PathField(std::string key,
                std::optional<fs::path> RunConfig::*member) {
  return {key,
          [=](RunConfig& c, const json& v, const fs::path& base) {
            c.*member = AsPath(v, key, base);
          },
          [=](const RunConfig& c, const fs::path& base) -> json {
            return c.*member ? PathJson(*(c.*member), base) : json();
          }};
}

const std::vector<Field>& TopLevelFields() {
  using T = TrainConfig;
  static const std::vector<Field> fields = [] {
    std::vector<Field> f;
    f.push_back({"mode",
                 [](RunConfig& c, const json& v, const fs::path&) {
                   if (!v.is_string()) Fail("'mode' must be \"pbt\" or \"ibt\"");
                   c.train.mode = ParseTrainingMode(v.get<std::string>());
                 },
                 [](const RunConfig& c, const fs::path&) -> json {
                   return std::string(TrainingModeName(c.train.mode));
                 }});
    f.push_back(DoubleField("learning_rate", &RunConfig::train, &T::learning_rate));
    f.push_back(SizeField("epochs", &RunConfig::train, &T::epochs));
    f.push_back(SizeField("batch_size", &RunConfig::train, &T::batch_size));
    f.push_back(DoubleField("lambda", &RunConfig::train, &T::lambda));
    f.push_back({"lambda_bilinear",
                 [](RunConfig& c, const json& v, const fs::path&) {
                   if (v.is_null()) {
                     c.train.lambda_bilinear.reset();
                   } else {
                     c.train.lambda_bilinear = AsDouble(v, "lambda_bilinear");
                   }
                 },
                 [](const RunConfig& c, const fs::path&) -> json {
                   return c.train.lambda_bilinear ? json(*c.train.lambda_bilinear)
                                                  : json();
                 }});
    f.push_back(DoubleField("ce_weight", &RunConfig::train, &T::ce_weight));
    f.push_back({"hidden_widths",
                 [](RunConfig& c, const json& v, const fs::path&) {
                   std::vector<std::size_t> widths;
                   if (v.is_array()) {
                     for (const auto& w : v) {
                       widths.push_back(AsSize(w, "hidden_widths"));
                     }
                   } else {
                     widths.push_back(AsSize(v, "hidden_widths"));
                   }
                   c.train.hidden_widths = std::move(widths);
                 },
                 [](const RunConfig& c, const fs::path&) -> json {
                   return c.train.hidden_widths;
                 }});
    f.push_back(SizeField("hidden_layers", &RunConfig::train, &T::hidden_layers));
    f.push_back(SizeField("output_dim", &RunConfig::train, &T::output_dim));
    f.push_back(DoubleField("leaky_slope", &RunConfig::train, &T::leaky_slope));
    f.push_back({"seed",
                 [](RunConfig& c, const json& v, const fs::path&) {
                   c.train.seed = AsU64(v, "seed");
                   c.synthetic.seed = c.train.seed;
                 },
                 [](const RunConfig& c, const fs::path&) -> json {
                   return c.train.seed;
                 }});
    f.push_back(DoubleField("adam_beta1", &RunConfig::train, &T::adam_beta1));
    f.push_back(DoubleField("adam_beta2", &RunConfig::train, &T::adam_beta2));
    f.push_back(DoubleField("adam_epsilon", &RunConfig::train, &T::adam_epsilon));
    f.push_back(SizeField("patience", &RunConfig::train, &T::patience));
    f.push_back(BoolField("mean_reduction", &RunConfig::train, &T::mean_reduction));
    f.push_back(BoolField("strict_paper_softmax", &RunConfig::train,
                          &T::strict_paper_softmax));
    f.push_back({"scorer_epochs",
                 [](RunConfig& c, const json& v, const fs::path&) {
                   c.train.attribute_scorer.epochs = AsSize(v, "scorer_epochs");
                 },
                 [](const RunConfig& c, const fs::path&) -> json {
                   return c.train.attribute_scorer.epochs;
                 }});
    f.push_back({"scorer_l2",
                 [](RunConfig& c, const json& v, const fs::path&) {
                   c.train.attribute_scorer.l2 = AsDouble(v, "scorer_l2");
                 },
                 [](const RunConfig& c, const fs::path&) -> json {
                   return c.train.attribute_scorer.l2;
                 }});
    f.push_back({"scorer_learning_rate",
                 [](RunConfig& c, const json& v, const fs::path&) {
                   c.train.attribute_scorer.adam.learning_rate =
                       AsDouble(v, "scorer_learning_rate");
                 },
                 [](const RunConfig& c, const fs::path&) -> json {
                   return c.train.attribute_scorer.adam.learning_rate;
                 }});

    f.push_back(PathField("features", &RunConfig::features));
    f.push_back(PathField("labels", &RunConfig::labels));
    f.push_back(PathField("split", &RunConfig::split));
    f.push_back(PathField("attributes", &RunConfig::attributes));
    f.push_back(PathField("predicate", &RunConfig::predicate));
    f.push_back(PathField("attribute_scores", &RunConfig::attribute_scores));
    f.push_back(PathField("word_vectors", &RunConfig::word_vectors));
    f.push_back(PathField("margins", &RunConfig::margins));
    f.push_back(PathField("checkpoint", &RunConfig::checkpoint));
    f.push_back(PathField("out", &RunConfig::out));

    f.push_back({"word_dim",
                 [](RunConfig& c, const json& v, const fs::path&) {
                   c.word_dim = AsSize(v, "word_dim");
                 },
                 [](const RunConfig& c, const fs::path&) -> json {
                   return c.word_dim;
                 }});
    f.push_back({"normalize_words",
                 [](RunConfig& c, const json& v, const fs::path&) {
                   c.normalize_words = AsBool(v, "normalize_words");
                 },
                 [](const RunConfig& c, const fs::path&) -> json {
                   return c.normalize_words;
                 }});
    f.push_back({"top_k",
                 [](RunConfig& c, const json& v, const fs::path&) {
                   c.top_k = AsSize(v, "top_k");
                 },
                 [](const RunConfig& c, const fs::path&) -> json {
                   return c.top_k;
                 }});
    f.push_back({"generalized",
                 [](RunConfig& c, const json& v, const fs::path&) {
                   c.generalized = AsBool(v, "generalized");
                 },
                 [](const RunConfig& c, const fs::path&) -> json {
                   return c.generalized;
                 }});
    return f;
  }();
  return fields;
}

const std::vector<Field>& SyntheticFields() {
  using S = SyntheticSpec;
  static const std::vector<Field> fields = [] {
    std::vector<Field> f;
    f.push_back(SizeField("n_seen", &RunConfig::synthetic, &S::n_seen));
    f.push_back(SizeField("n_unseen", &RunConfig::synthetic, &S::n_unseen));
    f.push_back(SizeField("n_attr", &RunConfig::synthetic, &S::n_attr));
    f.push_back(SizeField("word_dim", &RunConfig::synthetic, &S::word_dim));
    f.push_back(SizeField("vis_dim", &RunConfig::synthetic, &S::vis_dim));
    f.push_back(SizeField("images_per_class", &RunConfig::synthetic,
                          &S::images_per_class));
    f.push_back(DoubleField("noise", &RunConfig::synthetic, &S::noise));
    f.push_back(SizeField("latent_rank", &RunConfig::synthetic, &S::latent_rank));
    f.push_back(BoolField("unit_class_vectors", &RunConfig::synthetic,
                          &S::unit_class_vectors));
    return f;
  }();
  return fields;
}

const Field* FindField(const std::vector<Field>& fields, const std::string& key) {
  for (const auto& f : fields) {
    if (f.key == key) return &f;
  }
  return nullptr;
}

void SetSynthetic(RunConfig& config, const std::string& key, const json& value) {
  const Field* field = FindField(SyntheticFields(), key);
  if (field == nullptr) Fail(fmt::format("unknown config key 'synthetic.{}'", key));
  field->set(config, value, {});
}

void SetKey(RunConfig& config, const std::string& key, const json& value,
            const fs::path& base) {
  if (key == "synthetic") {
    if (!value.is_object()) Fail("'synthetic' must be an object");
    for (const auto& [k, v] : value.items()) SetSynthetic(config, k, v);
    return;
  }
  const Field* field = FindField(TopLevelFields(), key);
  if (field == nullptr) Fail(fmt::format("unknown config key '{}'", key));
  field->set(config, value, base);
}

}  // namespace

RunConfig ParseRunConfig(const std::string& json_text,
                         const fs::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    Fail(fmt::format("config is not valid JSON: {}", e.what()));
  }
  if (!doc.is_object()) Fail("config must be a JSON object");
  RunConfig config;
  for (const auto& [key, value] : doc.items()) {
    SetKey(config, key, value, base_dir);
  }
  return config;
}

RunConfig LoadRunConfig(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo,
                fmt::format("cannot open config '{}'", path.string()));
  }
  std::stringstream text;
  text << in.rdbuf();
  return ParseRunConfig(text.str(), path.parent_path());
}

void ApplyOverride(RunConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    Fail(fmt::format("override '{}' is not of the form key=value", assignment));
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) value = text;
  constexpr std::string_view kPrefix = "synthetic.";
  if (key.starts_with(kPrefix)) {
    SetSynthetic(config, key.substr(kPrefix.size()), value);
  } else {
    SetKey(config, key, value, {});
  }
}

std::string RunConfigToJson(const RunConfig& config, const fs::path& base_dir) {
  json doc;
  for (const auto& field : TopLevelFields()) {
    json v = field.get(config, base_dir);
    if (!v.is_null() || field.key == "lambda_bilinear") doc[field.key] = v;
  }
  json synth;
  for (const auto& field : SyntheticFields()) {
    synth[field.key] = field.get(config, base_dir);
  }
  doc["synthetic"] = synth;
  return doc.dump(2) + "\n";
}

}  // namespace zslvec::cli
