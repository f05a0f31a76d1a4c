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

#ifndef ZSLVEC_MATRIX_H_
#define ZSLVEC_MATRIX_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace zslvec {

// Row-major matrix of doubles. Every free function below returns a new
// matrix, sums in a fixed order, and rejects non-finite results with an
// ErrorCode::kNumerical error.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  // Takes ownership of a row-major buffer; data.size() must be rows * cols.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix Identity(std::size_t n);
  static DenseMatrix RowVector(std::span<const double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  std::span<double> row(std::size_t r) {
    return std::span<double>(data_).subspan(r * cols_, cols_);
  }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data_).subspan(r * cols_, cols_);
  }

  void Fill(double value);
  std::string ShapeString() const;

  // Bit-exact comparison of shape and contents.
  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Throws ErrorCode::kNumerical naming `context` if any element is NaN/Inf.
void CheckFinite(const DenseMatrix& m, const char* context);
bool IsFinite(const DenseMatrix& m);

DenseMatrix MatMul(const DenseMatrix& a, const DenseMatrix& b);
// a * transpose(b) and transpose(a) * b without materialising the transpose.
DenseMatrix MatMulTransB(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix MatMulTransA(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix Transpose(const DenseMatrix& a);
DenseMatrix Add(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix Sub(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix Scale(const DenseMatrix& a, double factor);
DenseMatrix Hadamard(const DenseMatrix& a, const DenseMatrix& b);
// Adds a 1 x cols row vector to every row.
DenseMatrix AddRowBroadcast(const DenseMatrix& a, const DenseMatrix& row);

// Column-wise totals as a 1 x cols matrix (sums down the rows).
DenseMatrix SumRows(const DenseMatrix& a);
double SumAll(const DenseMatrix& a);
double L2NormSq(const DenseMatrix& a);
double Dot(std::span<const double> a, std::span<const double> b);

// Each row mapped to exp(x - max) / sum; rows sum to one.
DenseMatrix RowwiseSoftmax(const DenseMatrix& a);

// In-place a += factor * b. Shapes must match.
void AddScaledInPlace(DenseMatrix& a, const DenseMatrix& b, double factor);

// Rows `indices` of `a`, in order.
DenseMatrix GatherRows(const DenseMatrix& a, std::span<const std::size_t> indices);

double MaxAbsDiff(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace zslvec

#endif  // ZSLVEC_MATRIX_H_
