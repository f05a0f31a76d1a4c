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

#include "zslvec/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include <fmt/format.h>

namespace zslvec {
namespace {

class ByteWriter {
 public:
  template <typename T>
  void Put(T value) {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
    U bits = std::bit_cast<U>(value);
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      bytes_.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
    }
  }
  void PutBytes(const char* data, std::size_t n) {
    bytes_.insert(bytes_.end(), data, data + n);
  }
  void PutMatrix(const DenseMatrix& m) {
    Put(static_cast<std::uint32_t>(m.rows()));
    Put(static_cast<std::uint32_t>(m.cols()));
    for (double v : m.data()) Put(v);
  }
  const std::vector<char>& bytes() const { return bytes_; }

 private:
  std::vector<char> bytes_;
};

class ByteReader {
 public:
  ByteReader(std::vector<unsigned char> bytes, std::string source)
      : bytes_(std::move(bytes)), source_(std::move(source)) {}

  template <typename T>
  T Get() {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
    Need(sizeof(U));
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      bits |= static_cast<U>(bytes_[pos_ + i]) << (8 * i);
    }
    pos_ += sizeof(U);
    return std::bit_cast<T>(bits);
  }

  std::string GetString(std::size_t n) {
    Need(n);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }

  DenseMatrix GetMatrix() {
    const std::size_t rows = Get<std::uint32_t>();
    const std::size_t cols = Get<std::uint32_t>();
    // Reject absurd headers before allocating.
    if (rows != 0 && cols > (bytes_.size() - pos_) / 8 / rows) Need(SIZE_MAX);
    std::vector<double> data(rows * cols);
    for (double& v : data) v = Get<double>();
    try {
      return DenseMatrix(rows, cols, std::move(data));
    } catch (const Error& e) {
      throw Error(ErrorCode::kCorrupt,
                  fmt::format("'{}': {}", source_, e.what()));
    }
  }

  bool AtEnd() const { return pos_ == bytes_.size(); }

 private:
  void Need(std::size_t n) const {
    if (n > bytes_.size() - pos_) {
      throw Error(ErrorCode::kCorrupt,
                  fmt::format("checkpoint '{}' is truncated or corrupt "
                              "(offset {})",
                              source_, pos_));
    }
  }

  std::vector<unsigned char> bytes_;
  std::string source_;
  std::size_t pos_ = 0;
};

}  // namespace

void SaveModel(const std::filesystem::path& path,
               const ModelCheckpoint& checkpoint) {
  checkpoint.model.CheckShapes();
  ByteWriter w;
  w.PutBytes(kCheckpointMagic, 4);
  w.Put(checkpoint.version);
  w.Put(checkpoint.word_space_fingerprint);
  w.Put(static_cast<std::uint32_t>(checkpoint.config_json.size()));
  w.PutBytes(checkpoint.config_json.data(), checkpoint.config_json.size());
  const TransformNet& net = checkpoint.model.transform;
  w.Put(net.leaky_slope());
  w.Put(static_cast<std::uint32_t>(net.num_layers()));
  for (const auto& layer : net.layers()) {
    w.PutMatrix(layer.weight);
    w.PutMatrix(layer.bias);
  }
  w.PutMatrix(checkpoint.model.bilinear);

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::kIo,
                fmt::format("cannot write checkpoint '{}'", path.string()));
  }
  out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
  if (!out) {
    throw Error(ErrorCode::kIo,
                fmt::format("failed writing checkpoint '{}'", path.string()));
  }
}

ModelCheckpoint LoadModel(const std::filesystem::path& path,
                          std::optional<std::uint64_t> expected_fingerprint,
                          Warnings* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo,
                fmt::format("cannot open checkpoint '{}'", path.string()));
  }
  ByteReader r(std::vector<unsigned char>(std::istreambuf_iterator<char>(in),
                                          {}),
               path.string());
  if (r.GetString(4) != std::string(kCheckpointMagic, 4)) {
    throw Error(ErrorCode::kCorrupt,
                fmt::format("'{}' is not a zslvec checkpoint", path.string()));
  }
  ModelCheckpoint ckpt;
  ckpt.version = r.Get<std::uint32_t>();
  if (ckpt.version != kCheckpointVersion) {
    throw Error(ErrorCode::kVersion,
                fmt::format("checkpoint '{}' has format version {}; this "
                            "build reads version {}",
                            path.string(), ckpt.version, kCheckpointVersion));
  }
  ckpt.word_space_fingerprint = r.Get<std::uint64_t>();
  ckpt.config_json = r.GetString(r.Get<std::uint32_t>());
  const double slope = r.Get<double>();
  const std::size_t n_layers = r.Get<std::uint32_t>();
  std::vector<DenseLayer> layers;
  for (std::size_t l = 0; l < n_layers; ++l) {
    DenseLayer layer;
    layer.weight = r.GetMatrix();
    layer.bias = r.GetMatrix();
    layers.push_back(std::move(layer));
  }
  ckpt.model.bilinear = r.GetMatrix();
  if (!r.AtEnd()) {
    throw Error(ErrorCode::kCorrupt,
                fmt::format("checkpoint '{}' has trailing bytes",
                            path.string()));
  }
  try {
    ckpt.model.transform = TransformNet(std::move(layers), slope);
    ckpt.model.CheckShapes();
  } catch (const Error& e) {
    throw Error(ErrorCode::kCorrupt,
                fmt::format("checkpoint '{}': {}", path.string(), e.what()));
  }
  if (expected_fingerprint &&
      *expected_fingerprint != ckpt.word_space_fingerprint) {
    Warn(warnings,
         fmt::format("checkpoint '{}' was trained against word space "
                     "{:016x}, current word space is {:016x}",
                     path.string(), ckpt.word_space_fingerprint,
                     *expected_fingerprint));
  }
  return ckpt;
}

}  // namespace zslvec
