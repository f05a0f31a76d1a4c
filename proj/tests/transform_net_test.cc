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

#include <gtest/gtest.h>

#include "oracles.h"
#include "zslvec/error.h"

namespace zslvec {
namespace {

using testing::RandomMatrix;
using testing::ScalarMlp;

TransformNetConfig SmallConfig() {
  return {.input_dim = 6, .hidden_widths = {5, 4}, .output_dim = 3,
          .leaky_slope = 0.01};
}

TEST(TransformNetTest, ZeroNetMapsEverythingToZero) {
  const TransformNet net = TransformNet::Zeros(SmallConfig());
  const DenseMatrix y = net.Forward(RandomMatrix(4, 6, 1, -10, 10));
  EXPECT_EQ(y, DenseMatrix(4, 3));
}

TEST(TransformNetTest, SingleIdentityLayerIsIdentity) {
  const TransformNet net({{DenseMatrix::Identity(3), DenseMatrix(1, 3)}}, 0.01);
  const DenseMatrix x = RandomMatrix(5, 3, 2, -1, 1);
  EXPECT_EQ(net.Forward(x), x);
}

TEST(TransformNetTest, InitializationIsBoundedWithZeroBiases) {
  const TransformNet net(SmallConfig(), 3);
  const std::size_t fans[][2] = {{6, 5}, {5, 4}, {4, 3}};
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    const double bound = std::sqrt(6.0 / double(fans[l][0] + fans[l][1]));
    EXPECT_EQ(net.layers()[l].weight.rows(), fans[l][0]);
    EXPECT_EQ(net.layers()[l].weight.cols(), fans[l][1]);
    for (double w : net.layers()[l].weight.data()) EXPECT_LE(std::abs(w), bound);
    EXPECT_EQ(net.layers()[l].bias, DenseMatrix(1, fans[l][1]));
  }
  EXPECT_EQ(net.config(), SmallConfig());
}

TEST(TransformNetTest, SameSeedSameNet) {
  EXPECT_EQ(TransformNet(SmallConfig(), 9), TransformNet(SmallConfig(), 9));
  EXPECT_NE(TransformNet(SmallConfig(), 9), TransformNet(SmallConfig(), 10));
}

TEST(TransformNetTest, MatchesScalarOracle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    TransformNet net(SmallConfig(), seed);
    for (auto& layer : net.mutable_layers()) {
      layer.bias = RandomMatrix(1, layer.bias.cols(), 100 + seed);
    }
    const DenseMatrix x = RandomMatrix(7, 6, 200 + seed, -3, 3);
    const DenseMatrix y = net.Forward(x);
    for (std::size_t r = 0; r < x.rows(); ++r) {
      const auto expected =
          ScalarMlp(net, std::vector<double>(x.row(r).begin(), x.row(r).end()));
      for (std::size_t c = 0; c < y.cols(); ++c) {
        EXPECT_NEAR(y(r, c), expected[c], 1e-12);
      }
      const auto single = net.Forward(x.row(r));
      for (std::size_t c = 0; c < y.cols(); ++c) EXPECT_EQ(single[c], y(r, c));
    }
  }
}

TEST(TransformNetTest, LeakySlopeAppliesToNegativeHiddenUnits) {
  // One hidden unit computing -x, output copies it.
  const TransformNet net({{DenseMatrix{{-1.0}}, DenseMatrix(1, 1)},
                          {DenseMatrix{{1.0}}, DenseMatrix(1, 1)}},
                         0.01);
  EXPECT_DOUBLE_EQ(net.Forward(DenseMatrix{{2.0}})(0, 0), -0.02);
  EXPECT_DOUBLE_EQ(net.Forward(DenseMatrix{{-2.0}})(0, 0), 2.0);
}

TEST(TransformNetTest, OutputLayerIsLinear) {
  const TransformNet net({{DenseMatrix{{1.0}}, DenseMatrix(1, 1)}}, 0.01);
  EXPECT_EQ(net.Forward(DenseMatrix{{-5.0}})(0, 0), -5.0);
}

TEST(TransformNetTest, ChainErrors) {
  EXPECT_THROW(TransformNet({}, 0.01), Error);
  EXPECT_THROW(TransformNet({{DenseMatrix(2, 3), DenseMatrix(1, 3)},
                             {DenseMatrix(4, 1), DenseMatrix(1, 1)}},
                            0.01),
               Error);
  EXPECT_THROW(TransformNet({{DenseMatrix(2, 3), DenseMatrix(1, 2)}}, 0.01),
               Error);
  const TransformNet net(SmallConfig(), 0);
  try {
    net.Forward(DenseMatrix(2, 5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimension);
  }
  TransformNetConfig zero = SmallConfig();
  zero.hidden_widths = {0};
  EXPECT_THROW(TransformNet(zero, 0), Error);
}

TEST(TransformNetTest, WeightNormExcludesBiases) {
  TransformNet net({{DenseMatrix{{3.0, 4.0}}, DenseMatrix{{100.0, 100.0}}}},
                   0.01);
  EXPECT_EQ(net.WeightNormSq(), 25.0);
  TransformGradients g = net.ZeroGradients();
  net.AddWeightDecayGradient(g, 0.5);
  EXPECT_EQ(g.layers[0].weight, (DenseMatrix{{3.0, 4.0}}));
  EXPECT_EQ(g.layers[0].bias, DenseMatrix(1, 2));
}

TEST(TransformNetTest, BackwardMatchesFiniteDifferences) {
  TransformNet net(SmallConfig(), 5);
  for (auto& layer : net.mutable_layers()) {
    layer.bias = RandomMatrix(1, layer.bias.cols(), 55, -0.5, 0.5);
  }
  const DenseMatrix x = RandomMatrix(4, 6, 6, -2, 2);
  const DenseMatrix upstream = RandomMatrix(4, 3, 7);
  auto loss = [&] { return SumAll(Hadamard(net.Forward(x), upstream)); };
  const TransformGradients g = net.Backward(net.ForwardWithCache(x), upstream);
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    auto& layer = net.mutable_layers()[l];
    const DenseMatrix nw = testing::CentralDifference(layer.weight, loss);
    const DenseMatrix nb = testing::CentralDifference(layer.bias, loss);
    EXPECT_LT(testing::RelativeError(g.layers[l].weight, nw), 1e-7) << l;
    EXPECT_LT(testing::RelativeError(g.layers[l].bias, nb), 1e-7) << l;
  }
}

}  // namespace
}  // namespace zslvec
