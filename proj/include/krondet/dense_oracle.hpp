#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "krondet/det_kernels.hpp"
#include "krondet/instance.hpp"
#include "krondet/permutation.hpp"

namespace krondet {

// Largest NF for which G is materialized; brute force is O((NF)^3).
inline constexpr std::size_t kDefaultDenseCap = 4096;

// Explicit Leibniz expansion tops out at 9! terms.
inline constexpr std::size_t kLeibnizSizeLimit = 9;

// Kronecker product with the left operand carrying the block indices:
// entry (i*rb + k, j*cb + l) = a(i,j) * b(k,l), so block (i,j) is a(i,j)*B.
template <class T>
DenseMatrix<T> kron(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  DenseMatrix<T> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const T& aij = a(i, j);
      if (scalar_traits<T>::is_zero(aij)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k) {
        for (std::size_t l = 0; l < b.cols(); ++l) {
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
      }
    }
  }
  return out;
}

// Rank-one matrix x y^T of two equal-length vectors.
template <class T>
DenseMatrix<T> outer(const std::vector<T>& x, const std::vector<T>& y) {
  if (x.size() != y.size()) {
    throw shape_error("outer product needs equal-length vectors");
  }
  if (x.empty()) throw shape_error("outer product of empty vectors");
  DenseMatrix<T> out(x.size(), y.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    for (std::size_t l = 0; l < y.size(); ++l) out(k, l) = x[k] * y[l];
  }
  return out;
}

// The NF x NF operator G = sum_n A^(n) (x) x^(n) y^(n)^T, assembled
// entrywise: G(f*N + k, g*N + l) = sum_n A^(n)(f,g) * X(k,n) * Y(l,n).
template <class T>
DenseMatrix<T> materialize(const KronRankOneInstance<T>& inst) {
  const auto nn = static_cast<std::size_t>(inst.n());
  const auto ff = static_cast<std::size_t>(inst.f());
  DenseMatrix<T> g(nn * ff, nn * ff);
  for (int term = 0; term < inst.n(); ++term) {
    const DenseMatrix<T>& a = inst.a(term);
    const auto t = static_cast<std::size_t>(term);
    for (std::size_t f = 0; f < ff; ++f) {
      for (std::size_t gcol = 0; gcol < ff; ++gcol) {
        const T& afg = a(f, gcol);
        if (scalar_traits<T>::is_zero(afg)) continue;
        for (std::size_t k = 0; k < nn; ++k) {
          const T left = afg * inst.x()(k, t);
          if (scalar_traits<T>::is_zero(left)) continue;
          for (std::size_t l = 0; l < nn; ++l) {
            g(f * nn + k, gcol * nn + l) += left * inst.y()(l, t);
          }
        }
      }
    }
  }
  return g;
}

// Ground-truth determinant of the materialized G: LU in float mode,
// fraction-free elimination in exact mode.
template <class T>
SignLogDet materialized_det(const KronRankOneInstance<T>& inst,
                            std::size_t dense_cap = kDefaultDenseCap) {
  if (inst.dim() > dense_cap) {
    throw resource_error("dense dimension " + std::to_string(inst.dim()) +
                         " exceeds cap " + std::to_string(dense_cap));
  }
  return det_sign_log(materialize(inst));
}

// Determinant straight from the definition: sum over all permutations of
// sign(sigma) * prod_i M(i, sigma(i)), enumerated in lexicographic order.
// Fully independent of the elimination-based kernels.
template <class T>
T leibniz_det(const DenseMatrix<T>& m) {
  if (!m.square()) throw shape_error("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n > kLeibnizSizeLimit) {
    throw resource_error("Leibniz expansion limited to size " +
                         std::to_string(kLeibnizSizeLimit) + ", got " +
                         std::to_string(n));
  }
  std::vector<int> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  T sum(0);
  do {
    T prod(1);
    bool vanished = false;
    for (std::size_t i = 0; i < n; ++i) {
      const T& e = m(i, static_cast<std::size_t>(sigma[i]));
      if (scalar_traits<T>::is_zero(e)) {
        vanished = true;
        break;
      }
      prod *= e;
    }
    if (vanished) continue;
    if (sign_of_images(sigma) < 0) {
      sum -= prod;
    } else {
      sum += prod;
    }
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return sum;
}

}  // namespace krondet
