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

#include "zslvec/matrix.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "zslvec/error.h"

namespace zslvec {
namespace {

[[noreturn]] void ThrowShape(const char* op, const DenseMatrix& a,
                             const DenseMatrix& b) {
  throw Error(ErrorCode::kDimension,
              fmt::format("{}: incompatible shapes {} and {}", op,
                          a.ShapeString(), b.ShapeString()));
}

void RequireSameShape(const char* op, const DenseMatrix& a,
                      const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) ThrowShape(op, a, b);
}

template <typename F>
DenseMatrix ZipWith(const char* op, const DenseMatrix& a, const DenseMatrix& b,
                    F f) {
  RequireSameShape(op, a, b);
  DenseMatrix out(a.rows(), a.cols());
  auto x = a.data();
  auto y = b.data();
  auto z = out.data();
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = f(x[i], y[i]);
  CheckFinite(out, op);
  return out;
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorCode::kDimension,
                fmt::format("buffer of {} elements cannot form a {}x{} matrix",
                            data_.size(), rows_, cols_));
  }
  CheckFinite(*this, "DenseMatrix");
}

DenseMatrix::DenseMatrix(
    std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw Error(ErrorCode::kDimension, "ragged matrix literal");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
  CheckFinite(*this, "DenseMatrix");
}

DenseMatrix DenseMatrix::Identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::RowVector(std::span<const double> values) {
  return DenseMatrix(1, values.size(),
                     std::vector<double>(values.begin(), values.end()));
}

void DenseMatrix::Fill(double value) {
  std::fill(data_.begin(), data_.end(), value);
}

std::string DenseMatrix::ShapeString() const {
  return fmt::format("{}x{}", rows_, cols_);
}

bool IsFinite(const DenseMatrix& m) {
  return std::all_of(m.data().begin(), m.data().end(),
                     [](double v) { return std::isfinite(v); });
}

void CheckFinite(const DenseMatrix& m, const char* context) {
  auto d = m.data();
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!std::isfinite(d[i])) {
      throw Error(ErrorCode::kNumerical,
                  fmt::format("{}: non-finite value {} at ({}, {}) of {}",
                              context, d[i], i / m.cols(), i % m.cols(),
                              m.ShapeString()));
    }
  }
}

DenseMatrix MatMul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) ThrowShape("matmul", a, b);
  DenseMatrix out(a.rows(), b.cols());
  // i-k-j order: each output cell accumulates over k in ascending order.
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out_row = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      auto b_row = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aik * b_row[j];
    }
  }
  CheckFinite(out, "matmul");
  return out;
}

DenseMatrix MatMulTransB(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) ThrowShape("matmul_trans_b", a, b);
  DenseMatrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.rows(); ++j) {
      out(i, j) = Dot(a.row(i), b.row(j));
    }
  }
  CheckFinite(out, "matmul_trans_b");
  return out;
}

DenseMatrix MatMulTransA(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) ThrowShape("matmul_trans_a", a, b);
  DenseMatrix out(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    auto a_row = a.row(k);
    auto b_row = b.row(k);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double aki = a_row[i];
      auto out_row = out.row(i);
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aki * b_row[j];
    }
  }
  CheckFinite(out, "matmul_trans_a");
  return out;
}

DenseMatrix Transpose(const DenseMatrix& a) {
  DenseMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  }
  return out;
}

DenseMatrix Add(const DenseMatrix& a, const DenseMatrix& b) {
  return ZipWith("add", a, b, [](double x, double y) { return x + y; });
}

DenseMatrix Sub(const DenseMatrix& a, const DenseMatrix& b) {
  return ZipWith("sub", a, b, [](double x, double y) { return x - y; });
}

DenseMatrix Hadamard(const DenseMatrix& a, const DenseMatrix& b) {
  return ZipWith("hadamard", a, b, [](double x, double y) { return x * y; });
}

DenseMatrix Scale(const DenseMatrix& a, double factor) {
  DenseMatrix out = a;
  for (double& v : out.data()) v *= factor;
  CheckFinite(out, "scale");
  return out;
}

DenseMatrix AddRowBroadcast(const DenseMatrix& a, const DenseMatrix& row) {
  if (row.rows() != 1 || row.cols() != a.cols()) {
    ThrowShape("add_row_broadcast", a, row);
  }
  DenseMatrix out = a;
  auto r = row.row(0);
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto o = out.row(i);
    for (std::size_t j = 0; j < o.size(); ++j) o[j] += r[j];
  }
  CheckFinite(out, "add_row_broadcast");
  return out;
}

DenseMatrix SumRows(const DenseMatrix& a) {
  DenseMatrix out(1, a.cols());
  auto o = out.row(0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto r = a.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) o[j] += r[j];
  }
  CheckFinite(out, "sum_rows");
  return out;
}

double SumAll(const DenseMatrix& a) {
  double total = 0.0;
  for (double v : a.data()) total += v;
  return total;
}

double L2NormSq(const DenseMatrix& a) {
  double total = 0.0;
  for (double v : a.data()) total += v * v;
  return total;
}

double Dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimension,
                fmt::format("dot: lengths {} and {} differ", a.size(),
                            b.size()));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += a[i] * b[i];
  return total;
}

DenseMatrix RowwiseSoftmax(const DenseMatrix& a) {
  if (a.empty()) {
    throw Error(ErrorCode::kDimension, "rowwise_softmax: empty input");
  }
  DenseMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto in = a.row(i);
    auto o = out.row(i);
    const double peak = *std::max_element(in.begin(), in.end());
    double total = 0.0;
    for (std::size_t j = 0; j < in.size(); ++j) {
      o[j] = std::exp(in[j] - peak);
      total += o[j];
    }
    for (double& v : o) v /= total;
  }
  CheckFinite(out, "rowwise_softmax");
  return out;
}

void AddScaledInPlace(DenseMatrix& a, const DenseMatrix& b, double factor) {
  RequireSameShape("add_scaled", a, b);
  auto x = a.data();
  auto y = b.data();
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += factor * y[i];
}

DenseMatrix GatherRows(const DenseMatrix& a,
                       std::span<const std::size_t> indices) {
  DenseMatrix out(indices.size(), a.cols());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= a.rows()) {
      throw Error(ErrorCode::kDimension,
                  fmt::format("gather_rows: index {} out of range for {}",
                              indices[i], a.ShapeString()));
    }
    auto src = a.row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

double MaxAbsDiff(const DenseMatrix& a, const DenseMatrix& b) {
  RequireSameShape("max_abs_diff", a, b);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  }
  return worst;
}

}  // namespace zslvec
