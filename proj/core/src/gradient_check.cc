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

#include "zslvec/gradient_check.h"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "zslvec/attribute_scorer.h"
#include "zslvec/label_embedding.h"
#include "zslvec/ranking_loss.h"

namespace zslvec {
namespace {

DenseMatrix RandomMatrix(std::size_t rows, std::size_t cols, double lo,
                         double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(lo, hi);
  DenseMatrix m(rows, cols);
  for (double& v : m.data()) v = dist(rng);
  return m;
}

struct Tracker {
  GradCheckResult result;
  void Record(const DenseMatrix& analytic, const DenseMatrix& numeric,
              const std::string& label) {
    const double err = BlockRelativeError(analytic, numeric);
    ++result.blocks_checked;
    if (err >= result.worst_relative_error) {
      result.worst_relative_error = err;
      result.worst_case = label;
    }
  }
};

}  // namespace

std::vector<GradCheckShape> DefaultGradCheckShapes() {
  return {
      GradCheckShape{5, 4, 2, 3, 6, 3, 4},
      GradCheckShape{7, 6, 2, 7, 4, 4, 6},
      GradCheckShape{4, 3, 1, 5, 8, 5, 7},
  };
}

double BlockRelativeError(const DenseMatrix& analytic,
                          const DenseMatrix& numeric) {
  const double diff = std::sqrt(L2NormSq(Sub(analytic, numeric)));
  const double scale = std::max({std::sqrt(L2NormSq(analytic)),
                                 std::sqrt(L2NormSq(numeric)),
                                 kGradCheckScaleFloor});
  return diff / scale;
}

DenseMatrix NumericGradient(DenseMatrix& param,
                            const std::function<double()>& loss, double step) {
  DenseMatrix grad(param.rows(), param.cols());
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double saved = param.data()[i];
    param.data()[i] = saved + step;
    const double plus = loss();
    param.data()[i] = saved - step;
    const double minus = loss();
    param.data()[i] = saved;
    grad.data()[i] = (plus - minus) / (2.0 * step);
  }
  return grad;
}

GradCheckResult RunGradientChecks(const std::vector<std::uint64_t>& seeds,
                                  const std::vector<GradCheckShape>& shapes,
                                  double step) {
  Tracker tracker;
  for (std::uint64_t seed : seeds) {
    for (std::size_t s = 0; s < shapes.size(); ++s) {
      const GradCheckShape& shape = shapes[s];
      std::mt19937_64 rng(seed * 7919 + s);
      TransformNetConfig net_cfg;
      net_cfg.input_dim = shape.word_dim;
      net_cfg.hidden_widths.assign(shape.hidden_layers, shape.hidden);
      net_cfg.output_dim = shape.output_dim;
      JointModel model =
          JointModel::Create(net_cfg, shape.vis_dim, seed * 131 + s);
      // Non-zero biases so every bias path is exercised.
      for (auto& layer : model.transform.mutable_layers()) {
        layer.bias = RandomMatrix(1, layer.bias.cols(), -0.5, 0.5, rng);
      }
      const DenseMatrix class_vectors =
          RandomMatrix(shape.n_classes, shape.word_dim, -1, 1, rng);
      const DenseMatrix pooled =
          RandomMatrix(shape.n_samples, shape.word_dim, -1, 1, rng);
      const DenseMatrix features =
          RandomMatrix(shape.n_samples, shape.vis_dim, -1, 1, rng);
      std::vector<std::size_t> labels(shape.n_samples);
      for (std::size_t i = 0; i < labels.size(); ++i) {
        labels[i] = rng() % shape.n_classes;
      }
      auto tag = [&](const char* loss, std::size_t block) {
        return fmt::format("{} seed={} shape={} block={}", loss, seed, s,
                           block);
      };

      RankingLossOptions rank_opts;
      rank_opts.lambda = 0.05;
      RankingLossResult rank = RankingLoss(model.transform, pooled, labels,
                                           class_vectors, rank_opts);
      {
        auto params = model.Parameters();
        JointGradients g{rank.grads, DenseMatrix()};
        auto blocks = g.Blocks();
        // The last block (W) does not enter the ranking loss.
        for (std::size_t b = 0; b + 1 < params.size(); ++b) {
          DenseMatrix numeric = NumericGradient(
              *params[b],
              [&] {
                return RankingLoss(model.transform, pooled, labels,
                                   class_vectors, rank_opts, false)
                    .loss;
              },
              step);
          tracker.Record(*blocks[b], numeric, tag("ranking", b));
        }
      }

      for (bool strict : {false, true}) {
        CrossEntropyOptions ce_opts;
        ce_opts.l2_bilinear = 0.03;
        ce_opts.l2_transform = 0.02;
        ce_opts.strict_paper_softmax = strict;
        CrossEntropyResult ce =
            CrossEntropyLoss(model, features, labels, class_vectors, ce_opts);
        auto params = model.Parameters();
        auto blocks = ce.grads.Blocks();
        for (std::size_t b = 0; b < params.size(); ++b) {
          DenseMatrix numeric = NumericGradient(
              *params[b],
              [&] {
                return CrossEntropyLoss(model, features, labels, class_vectors,
                                        ce_opts, false)
                    .loss;
              },
              step);
          tracker.Record(*blocks[b], numeric,
                         tag(strict ? "cross_entropy_strict" : "cross_entropy",
                             b));
        }
      }

      {
        AttributeScorer scorer{
            RandomMatrix(shape.vis_dim, shape.n_classes, -1, 1, rng),
            RandomMatrix(1, shape.n_classes, -1, 1, rng)};
        const DenseMatrix targets =
            RandomMatrix(shape.n_samples, shape.n_classes, 0, 1, rng);
        AttributeScorerLoss obj =
            AttributeScorerObjective(scorer, features, targets, 0.01);
        auto value = [&] {
          return AttributeScorerObjective(scorer, features, targets, 0.01).loss;
        };
        tracker.Record(obj.grad_weight,
                       NumericGradient(scorer.weight, value, step),
                       tag("attribute_scorer", 0));
        tracker.Record(obj.grad_bias, NumericGradient(scorer.bias, value, step),
                       tag("attribute_scorer", 1));
      }
    }
  }
  return tracker.result;
}

}  // namespace zslvec
