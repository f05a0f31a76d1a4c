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

// Independent reference implementations for tests. None of these call into
// the library's numerical kernels.

#ifndef ZSLVEC_TESTS_ORACLES_H_
#define ZSLVEC_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "zslvec/label_embedding.h"
#include "zslvec/matrix.h"
#include "zslvec/transform_net.h"

namespace zslvec::testing {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

inline DenseMatrix RandomMatrix(std::size_t rows, std::size_t cols,
                                std::uint64_t seed, double lo = -1.0,
                                double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  DenseMatrix m(rows, cols);
  for (double& v : m.data()) v = dist(rng);
  return m;
}

inline Mat ToNested(const DenseMatrix& m) {
  Mat out(m.rows(), Vec(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = m(r, c);
  }
  return out;
}

inline Mat NaiveMatMul(const Mat& a, const Mat& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  Mat out(n, Vec(m, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (std::size_t t = 0; t < k; ++t) s += a[i][t] * b[t][j];
      out[i][j] = s;
    }
  }
  return out;
}

inline double MaxAbs(const DenseMatrix& a, const Mat& b) {
  double worst = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      worst = std::max(worst, std::abs(a(r, c) - b[r][c]));
    }
  }
  return worst;
}

// Softmax of one row accumulated in long double.
inline Vec LongDoubleSoftmax(const Vec& row) {
  long double mx = row[0];
  for (double v : row) mx = std::max<long double>(mx, v);
  long double total = 0.0L;
  std::vector<long double> e(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) {
    e[i] = std::exp(static_cast<long double>(row[i]) - mx);
    total += e[i];
  }
  Vec out(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) {
    out[i] = static_cast<double>(e[i] / total);
  }
  return out;
}

// Layer by layer with scalar loops; leaky rectifier on every hidden layer.
inline Vec ScalarMlp(const TransformNet& net, const Vec& input) {
  Vec x = input;
  const auto& layers = net.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const DenseMatrix& w = layers[l].weight;
    Vec y(w.cols());
    for (std::size_t j = 0; j < w.cols(); ++j) {
      double s = layers[l].bias(0, j);
      for (std::size_t i = 0; i < w.rows(); ++i) s += x[i] * w(i, j);
      if (l + 1 < layers.size() && s < 0.0) s *= net.leaky_slope();
      y[j] = s;
    }
    x = std::move(y);
  }
  return x;
}

// score(i, c) = sum_a sum_b x[i][a] W[a][b] Phi(class_c)[b].
inline Mat BruteForceScores(const JointModel& model,
                            const DenseMatrix& features,
                            const DenseMatrix& class_vectors) {
  Mat phi;
  for (std::size_t c = 0; c < class_vectors.rows(); ++c) {
    auto row = class_vectors.row(c);
    phi.push_back(ScalarMlp(model.transform, Vec(row.begin(), row.end())));
  }
  Mat out(features.rows(), Vec(class_vectors.rows(), 0.0));
  for (std::size_t i = 0; i < features.rows(); ++i) {
    for (std::size_t c = 0; c < class_vectors.rows(); ++c) {
      double s = 0.0;
      for (std::size_t a = 0; a < features.cols(); ++a) {
        for (std::size_t b = 0; b < model.bilinear.cols(); ++b) {
          s += features(i, a) * model.bilinear(a, b) * phi[c][b];
        }
      }
      out[i][c] = s;
    }
  }
  return out;
}

// Full sort by (score descending, index ascending), then truncation.
inline std::vector<std::size_t> SortOracleTopK(const Vec& scores,
                                               std::size_t k) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  idx.resize(k);
  return idx;
}

// Central differences over every element of `param`.
inline DenseMatrix CentralDifference(DenseMatrix& param,
                                     const std::function<double()>& f,
                                     double h = 1e-5) {
  DenseMatrix g(param.rows(), param.cols());
  for (std::size_t r = 0; r < param.rows(); ++r) {
    for (std::size_t c = 0; c < param.cols(); ++c) {
      const double keep = param(r, c);
      param(r, c) = keep + h;
      const double up = f();
      param(r, c) = keep - h;
      const double down = f();
      param(r, c) = keep;
      g(r, c) = (up - down) / (2.0 * h);
    }
  }
  return g;
}

inline double RelativeError(const DenseMatrix& a, const DenseMatrix& b) {
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a.data()[i] - b.data()[i]) * (a.data()[i] - b.data()[i]);
    na += a.data()[i] * a.data()[i];
    nb += b.data()[i] * b.data()[i];
  }
  return std::sqrt(diff) /
         std::max({std::sqrt(na), std::sqrt(nb), 1e-4});
}

// Per-test scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("zslvec_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

}  // namespace zslvec::testing

#endif  // ZSLVEC_TESTS_ORACLES_H_
