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

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <system_error>
#include <utility>

#include <fmt/format.h>

namespace zslvec {
namespace {

namespace fs = std::filesystem;

std::string_view Trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string> ReadLines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo,
                fmt::format("cannot open '{}'", path.string()));
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string_view> SplitOn(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto end = s.find(sep, start);
    if (end == std::string_view::npos) {
      parts.push_back(Trim(s.substr(start)));
      return parts;
    }
    parts.push_back(Trim(s.substr(start, end - start)));
    start = end + 1;
  }
}

std::vector<std::string_view> SplitWhitespace(std::string_view s) {
  std::vector<std::string_view> parts;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) parts.push_back(s.substr(i, j - i));
    i = j;
  }
  return parts;
}

std::optional<double> ParseDouble(std::string_view text) {
  text = Trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                   value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    return std::nullopt;
  }
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

std::optional<std::size_t> ParseIndex(std::string_view text) {
  text = Trim(text);
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                   value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    return std::nullopt;
  }
  return value;
}

[[noreturn]] void ParseFail(const fs::path& path, std::size_t line_no,
                            const std::string& what) {
  throw Error(ErrorCode::kParse,
              fmt::format("{}:{}: {}", path.string(), line_no, what));
}

bool IsBlankOrComment(std::string_view line) {
  line = Trim(line);
  return line.empty() || line.front() == '#';
}

// Writes `value` as little-endian bytes.
template <typename T>
void PutLe(std::ostream& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  U bits = std::bit_cast<U>(value);
  std::array<char, sizeof(U)> bytes;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T GetLe(const unsigned char* p) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    bits |= static_cast<U>(p[i]) << (8 * i);
  }
  return std::bit_cast<T>(bits);
}

std::vector<unsigned char> ReadBytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo,
                fmt::format("cannot open '{}'", path.string()));
  }
  return std::vector<unsigned char>(std::istreambuf_iterator<char>(in), {});
}

DenseMatrix ReadFeatureCsv(const fs::path& path) {
  auto lines = ReadLines(path);
  std::size_t i = 0;
  while (i < lines.size() && IsBlankOrComment(lines[i])) ++i;
  if (i == lines.size()) {
    throw Error(ErrorCode::kParse,
                fmt::format("'{}' is empty", path.string()));
  }
  auto header = SplitOn(lines[i], ',');
  std::optional<std::size_t> rows, cols;
  if (header.size() == 2) {
    rows = ParseIndex(header[0]);
    cols = ParseIndex(header[1]);
  }
  if (!rows || !cols) {
    ParseFail(path, i + 1, "expected a `rows,cols` header");
  }
  std::vector<double> data;
  data.reserve(*rows * *cols);
  std::size_t seen_rows = 0;
  for (++i; i < lines.size(); ++i) {
    if (IsBlankOrComment(lines[i])) continue;
    auto cells = SplitOn(lines[i], ',');
    if (cells.size() != *cols) {
      ParseFail(path, i + 1,
                fmt::format("expected {} values, found {}", *cols,
                            cells.size()));
    }
    for (auto cell : cells) {
      auto v = ParseDouble(cell);
      if (!v) ParseFail(path, i + 1, fmt::format("bad number '{}'", cell));
      data.push_back(*v);
    }
    ++seen_rows;
  }
  if (seen_rows != *rows) {
    throw Error(ErrorCode::kParse,
                fmt::format("{}: header declares {} rows, found {}",
                            path.string(), *rows, seen_rows));
  }
  return DenseMatrix(*rows, *cols, std::move(data));
}

struct AttributeTable {
  std::vector<std::string> attribute_names;
  std::vector<std::string> keys;
  std::vector<std::vector<double>> rows;
};

AttributeTable ReadAttributeCsv(const fs::path& path) {
  auto lines = ReadLines(path);
  AttributeTable table;
  bool have_header = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (IsBlankOrComment(lines[i])) continue;
    auto cells = SplitOn(lines[i], ',');
    if (!have_header) {
      if (cells.size() < 2) {
        ParseFail(path, i + 1, "header needs a key column and >= 1 attribute");
      }
      for (std::size_t c = 1; c < cells.size(); ++c) {
        table.attribute_names.emplace_back(cells[c]);
      }
      have_header = true;
      continue;
    }
    if (cells.size() != table.attribute_names.size() + 1) {
      ParseFail(path, i + 1,
                fmt::format("expected {} cells, found {}",
                            table.attribute_names.size() + 1, cells.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size() - 1);
    for (std::size_t c = 1; c < cells.size(); ++c) {
      auto v = ParseDouble(cells[c]);
      if (!v) ParseFail(path, i + 1, fmt::format("bad number '{}'", cells[c]));
      if (*v < 0.0 || *v > 1.0) {
        throw Error(ErrorCode::kValidation,
                    fmt::format("{}:{}: attribute value {} outside [0,1] at "
                                "row '{}', column '{}'",
                                path.string(), i + 1, *v, cells[0],
                                table.attribute_names[c - 1]));
      }
      row.push_back(*v);
    }
    table.keys.emplace_back(cells[0]);
    table.rows.push_back(std::move(row));
  }
  if (!have_header) {
    throw Error(ErrorCode::kParse, fmt::format("'{}' is empty", path.string()));
  }
  return table;
}

void CheckAttributeNames(const ZslDataset& ds, const AttributeTable& table,
                         const fs::path& path) {
  if (!ds.attribute_names.empty() &&
      ds.attribute_names != table.attribute_names) {
    throw Error(ErrorCode::kValidation,
                fmt::format("attribute header of '{}' differs from the other "
                            "attribute file",
                            path.string()));
  }
}

std::size_t ClassIndex(const ZslDataset& ds, std::string_view name) {
  auto it = std::lower_bound(ds.class_names.begin(), ds.class_names.end(),
                             name);
  if (it == ds.class_names.end() || *it != name) return ds.class_names.size();
  return static_cast<std::size_t>(it - ds.class_names.begin());
}

void AttachPredicate(ZslDataset& ds, const AttributeTable& table,
                     const fs::path& path) {
  CheckAttributeNames(ds, table, path);
  ds.attribute_names = table.attribute_names;
  const std::size_t n_attr = table.attribute_names.size();
  DenseMatrix pred(ds.num_classes(), n_attr);
  std::vector<bool> filled(ds.num_classes(), false);
  for (std::size_t r = 0; r < table.keys.size(); ++r) {
    std::size_t c = ClassIndex(ds, table.keys[r]);
    if (c == ds.num_classes()) {
      throw Error(ErrorCode::kValidation,
                  fmt::format("{}: predicate row for unknown class '{}'",
                              path.string(), table.keys[r]));
    }
    if (filled[c]) {
      throw Error(ErrorCode::kValidation,
                  fmt::format("{}: duplicate predicate row for class '{}'",
                              path.string(), table.keys[r]));
    }
    std::copy(table.rows[r].begin(), table.rows[r].end(), pred.row(c).begin());
    filled[c] = true;
  }
  for (std::size_t c = 0; c < ds.num_classes(); ++c) {
    if (!filled[c]) {
      throw Error(ErrorCode::kValidation,
                  fmt::format("{}: no predicate row for class '{}'",
                              path.string(), ds.class_names[c]));
    }
  }
  ds.predicate_matrix = std::move(pred);
}

void AttachImageScores(ZslDataset& ds, const AttributeTable& table,
                       const fs::path& path) {
  CheckAttributeNames(ds, table, path);
  ds.attribute_names = table.attribute_names;
  const std::size_t n = ds.num_images();
  DenseMatrix scores(n, table.attribute_names.size());
  std::vector<bool> filled(n, false);
  for (std::size_t r = 0; r < table.keys.size(); ++r) {
    auto idx = ParseIndex(table.keys[r]);
    if (!idx || *idx >= n) {
      throw Error(ErrorCode::kValidation,
                  fmt::format("{}: row key '{}' is not an image index in "
                              "[0, {})",
                              path.string(), table.keys[r], n));
    }
    if (filled[*idx]) {
      throw Error(ErrorCode::kValidation,
                  fmt::format("{}: duplicate scores for image {}",
                              path.string(), *idx));
    }
    std::copy(table.rows[r].begin(), table.rows[r].end(),
              scores.row(*idx).begin());
    filled[*idx] = true;
  }
  auto missing = std::find(filled.begin(), filled.end(), false);
  if (missing != filled.end()) {
    throw Error(ErrorCode::kValidation,
                fmt::format("{}: no attribute scores for image {}",
                            path.string(), missing - filled.begin()));
  }
  ds.attribute_scores = std::move(scores);
}

void WriteAttributeCsv(const fs::path& path, const std::string& key_header,
                       const std::vector<std::string>& keys,
                       const std::vector<std::string>& attribute_names,
                       const DenseMatrix& values) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::kIo,
                fmt::format("cannot write '{}'", path.string()));
  }
  out << key_header;
  for (const auto& a : attribute_names) out << ',' << a;
  out << '\n';
  for (std::size_t r = 0; r < values.rows(); ++r) {
    out << keys[r];
    for (double v : values.row(r)) out << ',' << FormatExact(v);
    out << '\n';
  }
}

}  // namespace

std::string_view TrainingModeName(TrainingMode mode) {
  return mode == TrainingMode::kPbt ? "pbt" : "ibt";
}

TrainingMode ParseTrainingMode(std::string_view text) {
  std::string t = NormalizeToken(text);
  if (t == "pbt") return TrainingMode::kPbt;
  if (t == "ibt") return TrainingMode::kIbt;
  throw Error(ErrorCode::kConfig,
              fmt::format("unknown training mode '{}' (expected pbt|ibt)",
                          text));
}

std::string FormatExact(double value) {
  std::array<char, 64> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

bool ZslDataset::IsSeen(std::size_t class_index) const {
  return std::binary_search(seen_classes.begin(), seen_classes.end(),
                            class_index);
}

std::vector<std::size_t> ZslDataset::TrainImages() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (is_train[i]) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> ZslDataset::UnseenTestImages() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!is_train[i] && !IsSeen(labels[i])) out.push_back(i);
  }
  return out;
}

void ZslDataset::Validate() const {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::kValidation, msg);
  };
  const std::size_t n = features.rows();
  if (labels.size() != n || is_train.size() != n) {
    fail(fmt::format("{} feature rows but {} labels / {} train flags", n,
                     labels.size(), is_train.size()));
  }
  if (!std::is_sorted(class_names.begin(), class_names.end()) ||
      std::adjacent_find(class_names.begin(), class_names.end()) !=
          class_names.end()) {
    fail("class names must be unique and sorted");
  }
  std::vector<int> membership(class_names.size(), 0);
  for (auto c : seen_classes) {
    if (c >= class_names.size()) fail("seen class index out of range");
    membership[c] += 1;
  }
  for (auto c : unseen_classes) {
    if (c >= class_names.size()) fail("unseen class index out of range");
    membership[c] += 2;
  }
  for (std::size_t c = 0; c < membership.size(); ++c) {
    if (membership[c] == 3) {
      fail(fmt::format("class '{}' is both seen and unseen", class_names[c]));
    }
    if (membership[c] == 0) {
      fail(fmt::format("class '{}' is neither seen nor unseen",
                       class_names[c]));
    }
  }
  if (!std::is_sorted(seen_classes.begin(), seen_classes.end()) ||
      !std::is_sorted(unseen_classes.begin(), unseen_classes.end())) {
    fail("class index sets must be ascending");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] >= class_names.size()) {
      fail(fmt::format("image {} has label index {} out of range", i,
                       labels[i]));
    }
    if (is_train[i] && !IsSeen(labels[i])) {
      fail(fmt::format("training image {} is labeled with unseen class '{}'",
                       i, class_names[labels[i]]));
    }
  }
  auto check_range = [&](const DenseMatrix& m, const char* what,
                         std::size_t rows, auto row_name) {
    if (m.rows() != rows || m.cols() != attribute_names.size()) {
      fail(fmt::format("{} has shape {}, expected {}x{}", what,
                       m.ShapeString(), rows, attribute_names.size()));
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t a = 0; a < m.cols(); ++a) {
        double v = m(r, a);
        if (!(v >= 0.0 && v <= 1.0)) {
          fail(fmt::format("{} entry {} outside [0,1] at row '{}', column "
                           "'{}'",
                           what, v, row_name(r), attribute_names[a]));
        }
      }
    }
  };
  if (predicate_matrix) {
    check_range(*predicate_matrix, "predicate matrix", class_names.size(),
                [&](std::size_t r) { return class_names[r]; });
  }
  if (attribute_scores) {
    check_range(*attribute_scores, "attribute scores", n,
                [](std::size_t r) { return std::to_string(r); });
  }
  if (!predicate_matrix && !attribute_scores) {
    fail("dataset needs a predicate matrix or per-image attribute scores");
  }
}

void ZslDataset::ValidateFor(TrainingMode mode) const {
  Validate();
  if (mode == TrainingMode::kPbt && !predicate_matrix) {
    throw Error(ErrorCode::kValidation,
                "PBT training needs a class-level predicate matrix");
  }
}

bool DerivePredicateFromImageScores(ZslDataset& ds, Warnings* warnings) {
  if (ds.predicate_matrix || !ds.attribute_scores) return false;
  const auto& scores = *ds.attribute_scores;
  DenseMatrix pred(ds.num_classes(), scores.cols());
  std::vector<std::size_t> counts(ds.num_classes(), 0);
  for (std::size_t i = 0; i < ds.num_images(); ++i) {
    auto dst = pred.row(ds.labels[i]);
    auto src = scores.row(i);
    for (std::size_t a = 0; a < src.size(); ++a) dst[a] += src[a];
    ++counts[ds.labels[i]];
  }
  for (std::size_t c = 0; c < ds.num_classes(); ++c) {
    if (counts[c] == 0) {
      Warn(warnings, fmt::format("class '{}' has no annotated images; its "
                                 "derived predicate row is zero",
                                 ds.class_names[c]));
      continue;
    }
    for (double& v : pred.row(c)) v /= static_cast<double>(counts[c]);
  }
  Warn(warnings,
       "predicate matrix derived as the per-class mean of per-image "
       "attribute annotations");
  ds.predicate_matrix = std::move(pred);
  return true;
}

WordSpace LoadWordVectors(const fs::path& path, std::size_t expected_dim,
                          Warnings* warnings) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo,
                fmt::format("cannot open word-vector file '{}'",
                            path.string()));
  }
  std::size_t dim = expected_dim;
  std::optional<WordSpace> words;
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    auto parts = SplitWhitespace(line);
    if (parts.empty()) continue;
    if (dim == 0) dim = parts.size() - 1;
    if (dim == 0 || parts.size() - 1 != dim) {
      ParseFail(path, line_no,
                fmt::format("token '{}' has {} values, expected {}", parts[0],
                            parts.size() - 1, dim));
    }
    if (!words) words.emplace(dim);
    values.assign(dim, 0.0);
    for (std::size_t k = 0; k < dim; ++k) {
      auto v = ParseDouble(parts[k + 1]);
      if (!v) {
        ParseFail(path, line_no, fmt::format("bad number '{}'", parts[k + 1]));
      }
      values[k] = *v;
    }
    if (words->Insert(parts[0], values)) {
      Warn(warnings, fmt::format("{}:{}: duplicate token '{}', keeping the "
                                 "last occurrence",
                                 path.string(), line_no, parts[0]));
    }
  }
  if (!words) {
    throw Error(ErrorCode::kParse,
                fmt::format("word-vector file '{}' is empty", path.string()));
  }
  return std::move(*words);
}

void WriteWordVectors(const fs::path& path, const WordSpace& words) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::kIo,
                fmt::format("cannot write '{}'", path.string()));
  }
  for (const auto& [token, vec] : words.table()) {
    out << token;
    for (double v : vec) out << ' ' << FormatExact(v);
    out << '\n';
  }
}

DenseMatrix ReadFeatureMatrix(const fs::path& path) {
  auto bytes = ReadBytes(path);
  if (bytes.size() < 4 ||
      !std::equal(bytes.begin(), bytes.begin() + 4,
                  reinterpret_cast<const unsigned char*>(kFeatureMagic))) {
    return ReadFeatureCsv(path);
  }
  if (bytes.size() < 16) {
    throw Error(ErrorCode::kCorrupt,
                fmt::format("'{}': truncated feature header", path.string()));
  }
  const auto version = GetLe<std::uint32_t>(bytes.data() + 4);
  if (version != kFeatureFormatVersion) {
    throw Error(ErrorCode::kVersion,
                fmt::format("'{}': feature format version {} is not "
                            "supported (expected {})",
                            path.string(), version, kFeatureFormatVersion));
  }
  const std::size_t rows = GetLe<std::uint32_t>(bytes.data() + 8);
  const std::size_t cols = GetLe<std::uint32_t>(bytes.data() + 12);
  const std::size_t expected = 16 + 8 * rows * cols;
  if (bytes.size() != expected) {
    throw Error(ErrorCode::kCorrupt,
                fmt::format("'{}': expected {} bytes for a {}x{} matrix, "
                            "found {}",
                            path.string(), expected, rows, cols,
                            bytes.size()));
  }
  std::vector<double> data(rows * cols);
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = GetLe<double>(bytes.data() + 16 + 8 * i);
  }
  return DenseMatrix(rows, cols, std::move(data));
}

void WriteFeatureMatrix(const fs::path& path, const DenseMatrix& matrix) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::kIo,
                fmt::format("cannot write '{}'", path.string()));
  }
  out.write(kFeatureMagic, 4);
  PutLe(out, kFeatureFormatVersion);
  PutLe(out, static_cast<std::uint32_t>(matrix.rows()));
  PutLe(out, static_cast<std::uint32_t>(matrix.cols()));
  for (double v : matrix.data()) PutLe(out, v);
}

ZslDataset LoadDataset(const DatasetPaths& paths, TrainingMode mode,
                       Warnings* warnings) {
  ZslDataset ds;
  ds.features = ReadFeatureMatrix(paths.features);

  // Split file: sets of class names.
  std::set<std::string> seen, unseen;
  {
    auto lines = ReadLines(paths.split);
    std::set<std::string>* section = nullptr;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (IsBlankOrComment(lines[i])) continue;
      std::string_view line = Trim(lines[i]);
      if (line == "seen:") {
        section = &seen;
      } else if (line == "unseen:") {
        section = &unseen;
      } else if (section == nullptr) {
        ParseFail(paths.split, i + 1,
                  "class name before any `seen:`/`unseen:` section");
      } else {
        section->insert(std::string(line));
      }
    }
  }
  for (const auto& name : seen) {
    if (unseen.contains(name)) {
      throw Error(ErrorCode::kValidation,
                  fmt::format("class '{}' listed as both seen and unseen",
                              name));
    }
  }
  if (seen.empty() || unseen.empty()) {
    throw Error(ErrorCode::kValidation,
                fmt::format("'{}' must list at least one seen and one unseen "
                            "class",
                            paths.split.string()));
  }
  ds.class_names.assign(seen.begin(), seen.end());
  ds.class_names.insert(ds.class_names.end(), unseen.begin(), unseen.end());
  std::sort(ds.class_names.begin(), ds.class_names.end());
  for (std::size_t c = 0; c < ds.class_names.size(); ++c) {
    (seen.contains(ds.class_names[c]) ? ds.seen_classes : ds.unseen_classes)
        .push_back(c);
  }

  // Labels: every image exactly once.
  const std::size_t n = ds.features.rows();
  ds.labels.assign(n, 0);
  ds.is_train.assign(n, false);
  {
    std::vector<bool> labeled(n, false);
    auto lines = ReadLines(paths.labels);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (IsBlankOrComment(lines[i])) continue;
      auto cells = SplitOn(lines[i], '\t');
      if (cells.size() != 2 && cells.size() != 3) {
        ParseFail(paths.labels, i + 1,
                  "expected `image_index<TAB>class_name[<TAB>train|test]`");
      }
      auto idx = ParseIndex(cells[0]);
      if (!idx || *idx >= n) {
        ParseFail(paths.labels, i + 1,
                  fmt::format("image index '{}' not in [0, {})", cells[0], n));
      }
      if (labeled[*idx]) {
        ParseFail(paths.labels, i + 1,
                  fmt::format("image {} labeled twice", *idx));
      }
      std::size_t c = ClassIndex(ds, cells[1]);
      if (c == ds.num_classes()) {
        throw Error(ErrorCode::kValidation,
                    fmt::format("{}:{}: label references unknown class '{}'",
                                paths.labels.string(), i + 1, cells[1]));
      }
      bool train = seen.contains(ds.class_names[c]);
      if (cells.size() == 3) {
        if (cells[2] == "train") {
          train = true;
        } else if (cells[2] == "test") {
          train = false;
        } else {
          ParseFail(paths.labels, i + 1,
                    fmt::format("role '{}' is not train|test", cells[2]));
        }
      }
      if (train && !seen.contains(ds.class_names[c])) {
        throw Error(ErrorCode::kValidation,
                    fmt::format("{}:{}: training image {} is labeled with "
                                "unseen class '{}'",
                                paths.labels.string(), i + 1, *idx, cells[1]));
      }
      ds.labels[*idx] = c;
      ds.is_train[*idx] = train;
      labeled[*idx] = true;
    }
    auto missing = std::find(labeled.begin(), labeled.end(), false);
    if (missing != labeled.end()) {
      throw Error(ErrorCode::kValidation,
                  fmt::format("{}: image {} has no label",
                              paths.labels.string(), missing - labeled.begin()));
    }
  }

  if (paths.predicate) {
    AttachPredicate(ds, ReadAttributeCsv(*paths.predicate), *paths.predicate);
  }
  if (paths.attribute_scores) {
    AttachImageScores(ds, ReadAttributeCsv(*paths.attribute_scores),
                      *paths.attribute_scores);
  }
  if (mode == TrainingMode::kPbt) DerivePredicateFromImageScores(ds, warnings);
  ds.ValidateFor(mode);
  return ds;
}

ZslDataset LoadDataset(const fs::path& features_path,
                       const fs::path& labels_path, const fs::path& split_path,
                       const fs::path& attributes_path, TrainingMode mode,
                       Warnings* warnings) {
  DatasetPaths paths{features_path, labels_path, split_path, std::nullopt,
                     std::nullopt};
  // Class-keyed tables are predicate matrices; anything else must be
  // image-keyed scores.
  AttributeTable table = ReadAttributeCsv(attributes_path);
  std::set<std::string> split_names;
  for (const auto& line : ReadLines(split_path)) {
    auto t = Trim(line);
    if (!t.empty() && t != "seen:" && t != "unseen:" && t.front() != '#') {
      split_names.insert(std::string(t));
    }
  }
  bool class_keyed = !table.keys.empty() &&
                     std::all_of(table.keys.begin(), table.keys.end(),
                                 [&](const std::string& k) {
                                   return split_names.contains(k);
                                 });
  if (class_keyed) {
    paths.predicate = attributes_path;
  } else {
    paths.attribute_scores = attributes_path;
  }
  return LoadDataset(paths, mode, warnings);
}

DatasetPaths SaveDataset(const fs::path& dir, const ZslDataset& dataset) {
  dataset.Validate();
  fs::create_directories(dir);
  DatasetPaths paths;
  paths.features = dir / "features.zslf";
  paths.labels = dir / "labels.tsv";
  paths.split = dir / "split.txt";
  WriteFeatureMatrix(paths.features, dataset.features);
  {
    std::ofstream out(paths.labels);
    if (!out) {
      throw Error(ErrorCode::kIo,
                  fmt::format("cannot write '{}'", paths.labels.string()));
    }
    for (std::size_t i = 0; i < dataset.num_images(); ++i) {
      out << i << '\t' << dataset.class_names[dataset.labels[i]] << '\t'
          << (dataset.is_train[i] ? "train" : "test") << '\n';
    }
  }
  {
    std::ofstream out(paths.split);
    if (!out) {
      throw Error(ErrorCode::kIo,
                  fmt::format("cannot write '{}'", paths.split.string()));
    }
    out << "seen:\n";
    for (auto c : dataset.seen_classes) out << dataset.class_names[c] << '\n';
    out << "unseen:\n";
    for (auto c : dataset.unseen_classes) {
      out << dataset.class_names[c] << '\n';
    }
  }
  if (dataset.predicate_matrix) {
    paths.predicate = dir / "predicate.csv";
    WriteAttributeCsv(*paths.predicate, "class", dataset.class_names,
                      dataset.attribute_names, *dataset.predicate_matrix);
  }
  if (dataset.attribute_scores) {
    paths.attribute_scores = dir / "attribute_scores.csv";
    std::vector<std::string> keys;
    for (std::size_t i = 0; i < dataset.num_images(); ++i) {
      keys.push_back(std::to_string(i));
    }
    WriteAttributeCsv(*paths.attribute_scores, "image", keys,
                      dataset.attribute_names, *dataset.attribute_scores);
  }
  return paths;
}

DenseMatrix ReadMarginMatrix(const fs::path& path,
                             const std::vector<std::string>& class_names) {
  auto lines = ReadLines(path);
  std::vector<std::vector<std::string_view>> rows;
  std::vector<std::size_t> line_numbers;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (IsBlankOrComment(lines[i])) continue;
    rows.push_back(SplitOn(lines[i], ','));
    line_numbers.push_back(i + 1);
  }
  const std::size_t n = class_names.size();
  DenseMatrix margins(n, n);
  if (rows.empty()) {
    throw Error(ErrorCode::kParse, fmt::format("'{}' is empty", path.string()));
  }
  const bool labeled = !ParseDouble(rows[0][0]).has_value();
  if (labeled) {
    // Header: key cell then class names; each row: class name then values.
    const auto& header = rows[0];
    if (header.size() != n + 1 || rows.size() != n + 1) {
      throw Error(ErrorCode::kDimension,
                  fmt::format("'{}' must be a labeled {}x{} table",
                              path.string(), n, n));
    }
    auto index_of = [&](std::string_view name, std::size_t line_no) {
      auto it = std::find(class_names.begin(), class_names.end(), name);
      if (it == class_names.end()) {
        ParseFail(path, line_no, fmt::format("unknown class '{}'", name));
      }
      return static_cast<std::size_t>(it - class_names.begin());
    };
    std::vector<std::size_t> col_class(n);
    for (std::size_t j = 0; j < n; ++j) {
      col_class[j] = index_of(header[j + 1], line_numbers[0]);
    }
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (rows[r].size() != n + 1) {
        ParseFail(path, line_numbers[r], "wrong number of cells");
      }
      std::size_t ci = index_of(rows[r][0], line_numbers[r]);
      for (std::size_t j = 0; j < n; ++j) {
        auto v = ParseDouble(rows[r][j + 1]);
        if (!v) ParseFail(path, line_numbers[r], "bad number");
        margins(ci, col_class[j]) = *v;
      }
    }
  } else {
    if (rows.size() != n) {
      throw Error(ErrorCode::kDimension,
                  fmt::format("'{}' has {} rows, expected {}", path.string(),
                              rows.size(), n));
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (rows[r].size() != n) {
        ParseFail(path, line_numbers[r],
                  fmt::format("expected {} values", n));
      }
      for (std::size_t j = 0; j < n; ++j) {
        auto v = ParseDouble(rows[r][j]);
        if (!v) ParseFail(path, line_numbers[r], "bad number");
        margins(r, j) = *v;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (margins(i, i) != 0.0) {
      throw Error(ErrorCode::kValidation,
                  fmt::format("'{}': margin diagonal entry for '{}' must be 0",
                              path.string(), class_names[i]));
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (margins(i, j) < 0.0) {
        throw Error(ErrorCode::kValidation,
                    fmt::format("'{}': negative margin", path.string()));
      }
    }
  }
  return margins;
}

}  // namespace zslvec
