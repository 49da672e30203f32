#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "krondet/errors.hpp"
#include "krondet/matrix.hpp"

namespace krondet {

// The problem instance (F, N, {A^(n)}, X, Y) behind
//
//   G = sum_n A^(n) (x) x^(n) y^(n)^T,
//
// where A^(n) is F x F, X and Y are N x N, and x^(n), y^(n) are their n-th
// columns (0-based here). The rank-one factors B^(n) = x^(n) y^(n)^T are
// derived on demand and never stored.
template <class T>
class KronRankOneInstance {
 public:
  KronRankOneInstance(std::vector<DenseMatrix<T>> a, DenseMatrix<T> x,
                      DenseMatrix<T> y)
      : a_(std::move(a)), x_(std::move(x)), y_(std::move(y)) {
    if (a_.empty()) throw shape_error("instance needs at least one A factor");
    n_ = static_cast<int>(a_.size());
    if (!a_[0].square()) throw shape_error("A factors must be square");
    f_ = static_cast<int>(a_[0].rows());
    for (const auto& m : a_) {
      if (m.rows() != static_cast<std::size_t>(f_) ||
          m.cols() != static_cast<std::size_t>(f_)) {
        throw shape_error("every A factor must be " + std::to_string(f_) +
                          "x" + std::to_string(f_));
      }
    }
    const auto nn = static_cast<std::size_t>(n_);
    if (x_.rows() != nn || x_.cols() != nn) {
      throw shape_error("X must be NxN with N = number of A factors");
    }
    if (y_.rows() != nn || y_.cols() != nn) {
      throw shape_error("Y must be NxN with N = number of A factors");
    }
  }

  int n() const { return n_; }
  int f() const { return f_; }

  // Dimension of the materialized operator G.
  std::size_t dim() const {
    return static_cast<std::size_t>(n_) * static_cast<std::size_t>(f_);
  }

  const DenseMatrix<T>& a(int k) const {
    if (k < 0 || k >= n_) throw bounds_error("A factor index out of range");
    return a_[static_cast<std::size_t>(k)];
  }
  const std::vector<DenseMatrix<T>>& a_factors() const { return a_; }
  const DenseMatrix<T>& x() const { return x_; }
  const DenseMatrix<T>& y() const { return y_; }

  std::vector<T> x_col(int k) const {
    return x_.column(static_cast<std::size_t>(k));
  }
  std::vector<T> y_col(int k) const {
    return y_.column(static_cast<std::size_t>(k));
  }

  bool operator==(const KronRankOneInstance&) const = default;

 private:
  std::vector<DenseMatrix<T>> a_;
  DenseMatrix<T> x_;
  DenseMatrix<T> y_;
  int n_ = 0;
  int f_ = 0;
};

template <class To, class From>
KronRankOneInstance<To> instance_cast(const KronRankOneInstance<From>& inst) {
  std::vector<DenseMatrix<To>> a;
  a.reserve(inst.a_factors().size());
  for (const auto& m : inst.a_factors()) a.push_back(matrix_cast<To>(m));
  return KronRankOneInstance<To>(std::move(a), matrix_cast<To>(inst.x()),
                                 matrix_cast<To>(inst.y()));
}

}  // namespace krondet
