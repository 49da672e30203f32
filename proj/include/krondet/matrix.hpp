#pragma once

#include <cstddef>
#include <initializer_list>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "krondet/errors.hpp"
#include "krondet/scalar.hpp"

namespace krondet {

// Row-major dense matrix over double (float mode) or mpq_class (exact mode).
// Indices are 0-based throughout; classical 1-based formulas map by
// subtracting one from each index. Immutable use after construction is the
// norm; mutable access exists for assembly code.
template <class T>
class DenseMatrix {
 public:
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(checked_size(rows, cols), T(0)) {}

  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<T> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != checked_size(rows, cols)) {
      throw shape_error("entry count " + std::to_string(data_.size()) +
                        " does not match " + std::to_string(rows) + "x" +
                        std::to_string(cols));
    }
    for (const T& v : data_) scalar_traits<T>::validate(v);
  }

  DenseMatrix(std::initializer_list<std::initializer_list<T>> rows)
      : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    checked_size(rows_, cols_);
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) {
        throw shape_error("ragged initializer list");
      }
      data_.insert(data_.end(), row.begin(), row.end());
    }
    for (const T& v : data_) scalar_traits<T>::validate(v);
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  const T& operator()(std::size_t i, std::size_t j) const {
    return data_[index(i, j)];
  }
  T& operator()(std::size_t i, std::size_t j) { return data_[index(i, j)]; }

  std::vector<T> column(std::size_t j) const {
    if (j >= cols_) {
      throw bounds_error("column " + std::to_string(j) + " out of range");
    }
    std::vector<T> out;
    out.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(data_[i * cols_ + j]);
    return out;
  }

  const std::vector<T>& entries() const { return data_; }

  bool operator==(const DenseMatrix&) const = default;

 private:
  static std::size_t checked_size(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) {
      throw shape_error("matrix dimensions must be positive");
    }
    if (cols > std::numeric_limits<std::size_t>::max() / rows) {
      throw resource_error("matrix dimensions overflow");
    }
    return rows * cols;
  }

  std::size_t index(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) {
      throw bounds_error("entry (" + std::to_string(i) + "," +
                         std::to_string(j) + ") out of range for " +
                         std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    return i * cols_ + j;
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<T> data_;
};

// Scalar conversion between modes. double -> mpq_class is exact; the reverse
// rounds to nearest.
template <class To, class From>
To convert_scalar(const From& v) {
  if constexpr (std::is_same_v<To, From>) {
    return v;
  } else {
    return scalar_traits<To>::from_double(scalar_traits<From>::to_double(v));
  }
}

template <class To, class From>
DenseMatrix<To> matrix_cast(const DenseMatrix<From>& m) {
  std::vector<To> entries;
  entries.reserve(m.rows() * m.cols());
  for (const From& v : m.entries()) entries.push_back(convert_scalar<To>(v));
  return DenseMatrix<To>(m.rows(), m.cols(), std::move(entries));
}

}  // namespace krondet
