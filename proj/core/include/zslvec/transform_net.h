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

#ifndef ZSLVEC_TRANSFORM_NET_H_
#define ZSLVEC_TRANSFORM_NET_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "zslvec/matrix.h"

namespace zslvec {

struct TransformNetConfig {
  std::size_t input_dim = 300;
  // One entry per hidden layer. Two hidden layers plus the output layer make
  // the default three-layer network.
  std::vector<std::size_t> hidden_widths = {64, 64};
  std::size_t output_dim = 300;
  double leaky_slope = 0.01;

  friend bool operator==(const TransformNetConfig&,
                         const TransformNetConfig&) = default;
};

// Weight is fan_in x fan_out, bias is 1 x fan_out. Inputs are row vectors.
struct DenseLayer {
  DenseMatrix weight;
  DenseMatrix bias;

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

// Per-layer gradients, shaped like the network's layers.
struct TransformGradients {
  std::vector<DenseLayer> layers;

  void AddScaled(const TransformGradients& other, double factor);
};

// Activations retained by ForwardWithCache for the backward pass.
struct ForwardCache {
  std::vector<DenseMatrix> inputs;          // input to each layer
  std::vector<DenseMatrix> preactivations;  // x W + b of each layer
  DenseMatrix output;
};

// Multilayer perceptron mapping word vectors into the transformed space:
// leaky-rectified hidden layers, linear output layer.
class TransformNet {
 public:
  TransformNet() = default;
  // Uniform init with bound sqrt(6 / (fan_in + fan_out)), zero biases.
  TransformNet(const TransformNetConfig& config, std::uint64_t seed);
  // Takes explicit layers; shapes must chain.
  TransformNet(std::vector<DenseLayer> layers, double leaky_slope);

  static TransformNet Zeros(const TransformNetConfig& config);

  std::size_t input_dim() const;
  std::size_t output_dim() const;
  std::size_t num_layers() const { return layers_.size(); }
  double leaky_slope() const { return leaky_slope_; }
  TransformNetConfig config() const;

  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& mutable_layers() { return layers_; }

  // Each row of `x` is one word-space vector.
  DenseMatrix Forward(const DenseMatrix& x) const;
  std::vector<double> Forward(std::span<const double> v) const;
  ForwardCache ForwardWithCache(const DenseMatrix& x) const;

  // Gradient of a scalar loss w.r.t. all parameters, given dLoss/dOutput.
  TransformGradients Backward(const ForwardCache& cache,
                              const DenseMatrix& grad_output) const;

  // Sum of squared weights. Biases are not regularized.
  double WeightNormSq() const;
  // Adds 2 * coefficient * W to each weight gradient.
  void AddWeightDecayGradient(TransformGradients& grads,
                              double coefficient) const;

  TransformGradients ZeroGradients() const;

  friend bool operator==(const TransformNet&, const TransformNet&) = default;

 private:
  void CheckChain() const;

  std::vector<DenseLayer> layers_;
  double leaky_slope_ = 0.01;
};

}  // namespace zslvec

#endif  // ZSLVEC_TRANSFORM_NET_H_
