#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "krondet/dense_oracle.hpp"
#include "krondet/det_kernels.hpp"
#include "krondet/instance.hpp"
#include "krondet/permutation.hpp"

namespace krondet {

// Cap on N!^F, the number of tuples a single enumeration may visit.
inline constexpr std::uint64_t kDefaultTupleLimit = 1'000'000;

inline constexpr double kDualPathRelTol = 1e-8;

namespace detail {

// Exact mode compares exactly; float mode allows a small relative slack.
template <class T>
bool values_agree(const T& a, const T& b) {
  if constexpr (scalar_traits<T>::is_exact) {
    return a == b;
  } else {
    const double da = a;
    const double db = b;
    const double scale = std::max({1.0, std::fabs(da), std::fabs(db)});
    return std::fabs(da - db) <= kDualPathRelTol * scale;
  }
}

}  // namespace detail

// Enumerates (S_N)^F in lexicographic tuple order: gamma^1 is the most
// significant component and gamma^F varies fastest, each component running
// through S_N in lexicographic image order starting at the identity. The
// order is part of the contract so that failures can be replayed by tuple
// index.
class GammaEnumeration {
 public:
  GammaEnumeration(int n, int f, std::uint64_t limit = kDefaultTupleLimit)
      : n_(n), f_(f) {
    if (n < 1 || f < 1) throw shape_error("enumeration sizes must be positive");
    const std::uint64_t base = factorial_checked(n, limit);
    count_ = 1;
    for (int i = 0; i < f; ++i) {
      if (count_ > limit / base) {
        throw resource_error("(N!)^F exceeds tuple limit " +
                             std::to_string(limit));
      }
      count_ *= base;
    }
    perms_ = all_permutations(n);
  }

  int n() const { return n_; }
  int f() const { return f_; }
  std::uint64_t count() const { return count_; }

  // Component permutations of S_N in enumeration order.
  const std::vector<Permutation>& permutations() const { return perms_; }

  // Visits every tuple as a vector of indices into permutations(), together
  // with its position in the enumeration.
  template <class Fn>
  void for_each_index(Fn&& fn) const {
    std::vector<std::size_t> idx(static_cast<std::size_t>(f_), 0);
    std::uint64_t pos = 0;
    const std::size_t base = perms_.size();
    for (;;) {
      fn(static_cast<const std::vector<std::size_t>&>(idx), pos);
      ++pos;
      std::size_t c = idx.size();
      while (c > 0) {
        --c;
        if (++idx[c] < base) break;
        idx[c] = 0;
        if (c == 0) return;
      }
    }
  }

  template <class Fn>
  void for_each(Fn&& fn) const {
    for_each_index([&](const std::vector<std::size_t>& idx, std::uint64_t pos) {
      std::vector<Permutation> gammas;
      gammas.reserve(idx.size());
      for (std::size_t i : idx) gammas.push_back(perms_[i]);
      fn(PermutationTuple(n_, f_, std::move(gammas)), pos);
    });
  }

 private:
  static std::uint64_t factorial_checked(int n, std::uint64_t limit) {
    std::uint64_t r = 1;
    for (int i = 2; i <= n; ++i) {
      if (r > limit / static_cast<std::uint64_t>(i)) {
        throw resource_error("N! exceeds tuple limit " + std::to_string(limit));
      }
      r *= static_cast<std::uint64_t>(i);
    }
    return r;
  }

  int n_;
  int f_;
  std::uint64_t count_ = 0;
  std::vector<Permutation> perms_;
};

// det[ B^(gamma(0))_0  B^(gamma(1))_1 ... B^(gamma(N-1))_{N-1} ], the matrix
// whose column j is column j of B^(gamma(j)) = y^(gamma(j))_j * x^(gamma(j)).
// Computed two ways and cross-checked on every call:
//   (a) assemble the column matrix and take its determinant;
//   (b) the closed form (prod_k Y(k, gamma(k))) * det(X) * sign(gamma),
// which follows by pulling the scalar y^(gamma(j))_j out of each column and
// recognizing the remainder as X with permuted columns.
// A disagreement means an index-convention bug and raises verification_error.
template <class T>
T b_columns_det(const KronRankOneInstance<T>& inst, const Permutation& gamma) {
  if (gamma.degree() != inst.n()) {
    throw shape_error("permutation degree must equal N");
  }
  const auto nn = static_cast<std::size_t>(inst.n());

  DenseMatrix<T> assembled(nn, nn);
  for (std::size_t j = 0; j < nn; ++j) {
    const auto g = static_cast<std::size_t>(gamma(static_cast<int>(j)));
    const T& yj = inst.y()(j, g);
    for (std::size_t k = 0; k < nn; ++k) {
      assembled(k, j) = inst.x()(k, g) * yj;
    }
  }
  const T direct = det_value(assembled);

  T y_prod(1);
  for (std::size_t k = 0; k < nn; ++k) {
    y_prod *= inst.y()(k, static_cast<std::size_t>(gamma(static_cast<int>(k))));
  }
  T closed = det_value(inst.x()) * y_prod;
  if (gamma.sign() < 0) closed = -closed;

  if (!detail::values_agree(direct, closed)) {
    throw verification_error(
        "b_columns_det paths disagree for gamma = " + gamma.describe() +
        ": assembled " + scalar_traits<T>::to_string(direct) +
        " vs closed form " + scalar_traits<T>::to_string(closed));
  }
  return closed;
}

// One block-diagonal contribution det(C_diag^gamma): block f contributes
// (prod_n A^(gamma^f(n))(f,f)) * b_columns_det(gamma^f), and the total is the
// product over the F diagonal blocks.
template <class T>
struct BlockDiagonalContribution {
  PermutationTuple gamma;
  std::vector<T> per_block_dets;
  T total;
};

template <class T>
BlockDiagonalContribution<T> c_diag_det(const KronRankOneInstance<T>& inst,
                                        const PermutationTuple& gamma) {
  if (gamma.n != inst.n() || gamma.f != inst.f()) {
    throw shape_error("tuple shape must match the instance");
  }
  std::vector<T> blocks;
  blocks.reserve(static_cast<std::size_t>(inst.f()));
  T total(1);
  for (int f = 0; f < inst.f(); ++f) {
    const Permutation& gf = gamma.gammas[static_cast<std::size_t>(f)];
    T diag_prod(1);
    for (int n = 0; n < inst.n(); ++n) {
      diag_prod *= inst.a(gf(n))(static_cast<std::size_t>(f),
                                 static_cast<std::size_t>(f));
    }
    T block = diag_prod * b_columns_det(inst, gf);
    total *= block;
    blocks.push_back(std::move(block));
  }
  return BlockDiagonalContribution<T>{gamma, std::move(blocks), std::move(total)};
}

// C_diag^gamma as an explicit NF x NF matrix: within diagonal block f,
// entry (k, j) = A^(gamma^f(j))(f,f) * X(k, gamma^f(j)) * Y(j, gamma^f(j));
// off-diagonal blocks are zero. Independent oracle for c_diag_det.
template <class T>
DenseMatrix<T> assemble_c_diag(const KronRankOneInstance<T>& inst,
                               const PermutationTuple& gamma) {
  if (gamma.n != inst.n() || gamma.f != inst.f()) {
    throw shape_error("tuple shape must match the instance");
  }
  const auto nn = static_cast<std::size_t>(inst.n());
  const auto ff = static_cast<std::size_t>(inst.f());
  DenseMatrix<T> c(nn * ff, nn * ff);
  for (std::size_t f = 0; f < ff; ++f) {
    const Permutation& gf = gamma.gammas[f];
    for (std::size_t j = 0; j < nn; ++j) {
      const auto term = static_cast<std::size_t>(gf(static_cast<int>(j)));
      const T scale = inst.a(static_cast<int>(term))(f, f) * inst.y()(j, term);
      for (std::size_t k = 0; k < nn; ++k) {
        c(f * nn + k, f * nn + j) = scale * inst.x()(k, term);
      }
    }
  }
  return c;
}

// Sum of det(C_diag^gamma) over every tuple in (S_N)^F, checked against its
// closed form (prod_f prod_n A^(n)(f,f)) * det(X)^F * det(Y)^F. Per-gamma
// factors are cached so the sweep costs O(N! * (F + N^3)) determinant work
// plus one product per tuple; the reduction runs in enumeration order.
template <class T>
T sum_block_diagonal(const KronRankOneInstance<T>& inst,
                     std::uint64_t limit = kDefaultTupleLimit) {
  GammaEnumeration en(inst.n(), inst.f(), limit);
  const auto& perms = en.permutations();

  std::vector<T> b_dets;
  b_dets.reserve(perms.size());
  for (const Permutation& g : perms) b_dets.push_back(b_columns_det(inst, g));

  // diag_prod[f][p] = prod_n A^(perms[p](n))(f,f)
  const auto ff = static_cast<std::size_t>(inst.f());
  std::vector<std::vector<T>> diag_prod(ff);
  for (std::size_t f = 0; f < ff; ++f) {
    diag_prod[f].reserve(perms.size());
    for (const Permutation& g : perms) {
      T prod(1);
      for (int n = 0; n < inst.n(); ++n) prod *= inst.a(g(n))(f, f);
      diag_prod[f].push_back(std::move(prod));
    }
  }

  T sum(0);
  en.for_each_index([&](const std::vector<std::size_t>& idx, std::uint64_t) {
    T term(1);
    for (std::size_t f = 0; f < ff; ++f) {
      term *= diag_prod[f][idx[f]] * b_dets[idx[f]];
    }
    sum += term;
  });

  T expected(1);
  for (std::size_t f = 0; f < ff; ++f) {
    for (int n = 0; n < inst.n(); ++n) {
      expected *= inst.a(n)(f, f);
    }
  }
  const T det_x = det_value(inst.x());
  const T det_y = det_value(inst.y());
  for (int i = 0; i < inst.f(); ++i) expected *= det_x * det_y;

  if (!detail::values_agree(sum, expected)) {
    throw verification_error(
        "block-diagonal sum " + scalar_traits<T>::to_string(sum) +
        " does not match closed form " + scalar_traits<T>::to_string(expected));
  }
  return sum;
}

// sum over (S_N)^F of prod_i sign(gamma^i) * prod_k Y(k, gamma^i(k)),
// checked against det(Y)^F. The sum factorizes into F independent Leibniz
// sums, which is exactly why det(Y)^F appears in the identity.
template <class T>
T y_power_identity(const DenseMatrix<T>& y, int f,
                   std::uint64_t limit = kDefaultTupleLimit) {
  if (!y.square()) throw shape_error("Y must be square");
  if (f < 1) throw shape_error("F must be positive");
  GammaEnumeration en(static_cast<int>(y.rows()), f, limit);
  const auto& perms = en.permutations();

  std::vector<T> terms;
  terms.reserve(perms.size());
  for (const Permutation& g : perms) {
    T prod(1);
    for (std::size_t k = 0; k < y.rows(); ++k) {
      prod *= y(k, static_cast<std::size_t>(g(static_cast<int>(k))));
    }
    if (g.sign() < 0) prod = -prod;
    terms.push_back(std::move(prod));
  }

  T sum(0);
  en.for_each_index([&](const std::vector<std::size_t>& idx, std::uint64_t) {
    T term(1);
    for (std::size_t i : idx) term *= terms[i];
    sum += term;
  });

  T expected(1);
  const T det_y = det_value(y);
  for (int i = 0; i < f; ++i) expected *= det_y;

  if (!detail::values_agree(sum, expected)) {
    throw verification_error(
        "permutation-tuple sum " + scalar_traits<T>::to_string(sum) +
        " does not match det(Y)^F = " + scalar_traits<T>::to_string(expected));
  }
  return sum;
}

}  // namespace krondet
