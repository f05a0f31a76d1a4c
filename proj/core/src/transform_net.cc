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

#include "zslvec/transform_net.h"

#include <cmath>
#include <random>
#include <utility>

#include <fmt/format.h>

#include "zslvec/error.h"

namespace zslvec {
namespace {

DenseMatrix LeakyRelu(const DenseMatrix& z, double slope) {
  DenseMatrix out = z;
  for (double& v : out.data()) {
    if (!(v > 0.0)) v *= slope;
  }
  return out;
}

}  // namespace

void TransformGradients::AddScaled(const TransformGradients& other,
                                   double factor) {
  if (layers.size() != other.layers.size()) {
    throw Error(ErrorCode::kDimension, "gradient layer counts differ");
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    AddScaledInPlace(layers[l].weight, other.layers[l].weight, factor);
    AddScaledInPlace(layers[l].bias, other.layers[l].bias, factor);
  }
}

TransformNet::TransformNet(const TransformNetConfig& config,
                           std::uint64_t seed)
    : leaky_slope_(config.leaky_slope) {
  std::vector<std::size_t> dims;
  dims.push_back(config.input_dim);
  dims.insert(dims.end(), config.hidden_widths.begin(),
              config.hidden_widths.end());
  dims.push_back(config.output_dim);
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const std::size_t fan_in = dims[l];
    const std::size_t fan_out = dims[l + 1];
    if (fan_in == 0 || fan_out == 0) {
      throw Error(ErrorCode::kConfig, "transform net layer of width zero");
    }
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-bound, bound);
    DenseLayer layer{DenseMatrix(fan_in, fan_out), DenseMatrix(1, fan_out)};
    for (double& w : layer.weight.data()) w = dist(rng);
    layers_.push_back(std::move(layer));
  }
}

TransformNet::TransformNet(std::vector<DenseLayer> layers, double leaky_slope)
    : layers_(std::move(layers)), leaky_slope_(leaky_slope) {
  CheckChain();
}

TransformNet TransformNet::Zeros(const TransformNetConfig& config) {
  TransformNet net(config, 0);
  for (auto& layer : net.layers_) {
    layer.weight.Fill(0.0);
    layer.bias.Fill(0.0);
  }
  return net;
}

void TransformNet::CheckChain() const {
  if (layers_.empty()) {
    throw Error(ErrorCode::kDimension, "transform net has no layers");
  }
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& layer = layers_[l];
    if (layer.bias.rows() != 1 || layer.bias.cols() != layer.weight.cols()) {
      throw Error(ErrorCode::kDimension,
                  fmt::format("layer {}: bias {} does not match weight {}", l,
                              layer.bias.ShapeString(),
                              layer.weight.ShapeString()));
    }
    if (l > 0 && layers_[l - 1].weight.cols() != layer.weight.rows()) {
      throw Error(ErrorCode::kDimension,
                  fmt::format("layer {} weight {} does not chain after {}", l,
                              layer.weight.ShapeString(),
                              layers_[l - 1].weight.ShapeString()));
    }
  }
}

std::size_t TransformNet::input_dim() const {
  return layers_.empty() ? 0 : layers_.front().weight.rows();
}

std::size_t TransformNet::output_dim() const {
  return layers_.empty() ? 0 : layers_.back().weight.cols();
}

TransformNetConfig TransformNet::config() const {
  TransformNetConfig c;
  c.input_dim = input_dim();
  c.output_dim = output_dim();
  c.leaky_slope = leaky_slope_;
  c.hidden_widths.clear();
  for (std::size_t l = 0; l + 1 < layers_.size(); ++l) {
    c.hidden_widths.push_back(layers_[l].weight.cols());
  }
  return c;
}

DenseMatrix TransformNet::Forward(const DenseMatrix& x) const {
  return ForwardWithCache(x).output;
}

std::vector<double> TransformNet::Forward(std::span<const double> v) const {
  DenseMatrix out = Forward(DenseMatrix::RowVector(v));
  return std::vector<double>(out.data().begin(), out.data().end());
}

ForwardCache TransformNet::ForwardWithCache(const DenseMatrix& x) const {
  if (x.cols() != input_dim()) {
    throw Error(ErrorCode::kDimension,
                fmt::format("transform input {} does not match word dim {}",
                            x.ShapeString(), input_dim()));
  }
  ForwardCache cache;
  DenseMatrix h = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    DenseMatrix z = AddRowBroadcast(MatMul(h, layers_[l].weight),
                                    layers_[l].bias);
    cache.inputs.push_back(std::move(h));
    h = (l + 1 < layers_.size()) ? LeakyRelu(z, leaky_slope_) : z;
    cache.preactivations.push_back(std::move(z));
  }
  cache.output = std::move(h);
  return cache;
}

TransformGradients TransformNet::Backward(const ForwardCache& cache,
                                          const DenseMatrix& grad_output) const {
  if (grad_output.rows() != cache.output.rows() ||
      grad_output.cols() != cache.output.cols()) {
    throw Error(ErrorCode::kDimension,
                fmt::format("output gradient {} does not match output {}",
                            grad_output.ShapeString(),
                            cache.output.ShapeString()));
  }
  TransformGradients grads;
  grads.layers.resize(layers_.size());
  DenseMatrix delta = grad_output;  // dLoss/dz of the current layer
  for (std::size_t l = layers_.size(); l-- > 0;) {
    grads.layers[l].weight = MatMulTransA(cache.inputs[l], delta);
    grads.layers[l].bias = SumRows(delta);
    if (l == 0) break;
    delta = MatMulTransB(delta, layers_[l].weight);
    const DenseMatrix& z = cache.preactivations[l - 1];
    for (std::size_t i = 0; i < delta.size(); ++i) {
      if (!(z.data()[i] > 0.0)) delta.data()[i] *= leaky_slope_;
    }
  }
  return grads;
}

double TransformNet::WeightNormSq() const {
  double total = 0.0;
  for (const auto& layer : layers_) total += L2NormSq(layer.weight);
  return total;
}

void TransformNet::AddWeightDecayGradient(TransformGradients& grads,
                                          double coefficient) const {
  if (coefficient == 0.0) return;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    AddScaledInPlace(grads.layers[l].weight, layers_[l].weight,
                     2.0 * coefficient);
  }
}

TransformGradients TransformNet::ZeroGradients() const {
  TransformGradients grads;
  for (const auto& layer : layers_) {
    grads.layers.push_back(
        DenseLayer{DenseMatrix(layer.weight.rows(), layer.weight.cols()),
                   DenseMatrix(layer.bias.rows(), layer.bias.cols())});
  }
  return grads;
}

}  // namespace zslvec
