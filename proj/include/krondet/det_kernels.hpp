#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "krondet/errors.hpp"
#include "krondet/matrix.hpp"
#include "krondet/scalar.hpp"
#include "krondet/sign_log_det.hpp"

namespace krondet {

// A pivot chosen by partial pivoting whose magnitude is at most this fraction
// of the largest input entry declares the matrix numerically singular. The
// threshold is scale-invariant; exact mode needs no threshold at all.
inline constexpr double kPivotRelThreshold = 1e-12;

inline double max_abs_entry(const DenseMatrix<double>& m) {
  double mx = 0.0;
  for (double v : m.entries()) mx = std::max(mx, std::fabs(v));
  return mx;
}

// LU with partial pivoting, accumulating det as (sign, sum of log|pivot|).
inline SignLogDet lu_sign_log_det(const DenseMatrix<double>& m) {
  if (!m.square()) throw shape_error("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  std::vector<double> w(m.entries());
  const double scale = max_abs_entry(m);
  if (scale == 0.0) return SignLogDet::zero();
  const double threshold = kPivotRelThreshold * scale;

  int sign = 1;
  double log_abs = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double piv_abs = std::fabs(w[k * n + k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double a = std::fabs(w[i * n + k]);
      if (a > piv_abs) {
        piv_abs = a;
        piv = i;
      }
    }
    if (piv_abs <= threshold) return SignLogDet::zero();
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(w[k * n + j], w[piv * n + j]);
      sign = -sign;
    }
    const double pivot = w[k * n + k];
    if (pivot < 0) sign = -sign;
    log_abs += std::log(std::fabs(pivot));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double factor = w[i * n + k] / pivot;
      if (factor == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) {
        w[i * n + j] -= factor * w[k * n + j];
      }
      w[i * n + k] = 0.0;
    }
  }
  return SignLogDet::from_sign_log(sign, log_abs);
}

// Exact determinant by fraction-free (Bareiss) elimination. Rows are first
// scaled by their denominator lcm so the elimination runs over integers;
// every intermediate value is then a minor of the scaled matrix, which keeps
// coefficient growth polynomial instead of the blowup of naive rational
// elimination. det = +/- last_pivot / prod(row scales).
inline mpq_class bareiss_det(const DenseMatrix<mpq_class>& m) {
  if (!m.square()) throw shape_error("determinant of a non-square matrix");
  const std::size_t n = m.rows();

  std::vector<mpz_class> w(n * n);
  mpz_class scale_product = 1;
  {
    mpz_class row_lcm, q;
    for (std::size_t i = 0; i < n; ++i) {
      row_lcm = 1;
      for (std::size_t j = 0; j < n; ++j) {
        row_lcm = lcm(row_lcm, m(i, j).get_den());
      }
      for (std::size_t j = 0; j < n; ++j) {
        const mpq_class& v = m(i, j);
        mpz_divexact(q.get_mpz_t(), row_lcm.get_mpz_t(),
                     v.get_den().get_mpz_t());
        w[i * n + j] = v.get_num() * q;
      }
      scale_product *= row_lcm;
    }
  }

  int sign = 1;
  mpz_class prev = 1;
  mpz_class t;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t piv = k;
    while (piv < n && sgn(w[piv * n + k]) == 0) ++piv;
    if (piv == n) return mpq_class(0);
    if (piv != k) {
      for (std::size_t j = k; j < n; ++j) std::swap(w[k * n + j], w[piv * n + j]);
      sign = -sign;
    }
    const mpz_class& pivot = w[k * n + k];
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        t = w[i * n + j] * pivot - w[i * n + k] * w[k * n + j];
        mpz_divexact(w[i * n + j].get_mpz_t(), t.get_mpz_t(),
                     prev.get_mpz_t());
      }
      w[i * n + k] = 0;
    }
    prev = pivot;
  }

  mpq_class det(w[n * n - 1]);
  if (sign < 0) det = -det;
  det /= mpq_class(scale_product);
  det.canonicalize();
  return det;
}

// q^k for k >= 0, componentwise on the canonical num/den pair.
inline mpq_class rational_pow(const mpq_class& q, unsigned long k) {
  mpq_class r;
  mpz_pow_ui(r.get_num().get_mpz_t(), q.get_num().get_mpz_t(), k);
  mpz_pow_ui(r.get_den().get_mpz_t(), q.get_den().get_mpz_t(), k);
  return r;
}

// Mode-generic determinant entry points. Float mode runs LU with partial
// pivoting; exact mode runs fraction-free elimination.
template <class T>
SignLogDet det_sign_log(const DenseMatrix<T>& m) {
  if constexpr (scalar_traits<T>::is_exact) {
    return SignLogDet::from_rational(bareiss_det(m));
  } else {
    return lu_sign_log_det(m);
  }
}

// Plain-scalar determinant. Exact mode is exact; float mode is the lossy view
// of the sign/log representation.
template <class T>
T det_value(const DenseMatrix<T>& m) {
  if constexpr (scalar_traits<T>::is_exact) {
    return bareiss_det(m);
  } else {
    return lu_sign_log_det(m).value().value;
  }
}

}  // namespace krondet
