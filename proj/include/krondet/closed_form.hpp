#pragma once

#include <string>
#include <vector>

#include "krondet/det_kernels.hpp"
#include "krondet/instance.hpp"
#include "krondet/sign_log_det.hpp"

namespace krondet {

// Per-factor view of the product identity
//
//   det(G) = (prod_n det A^(n)) * det(X)^F * det(Y)^F.
//
// total is assembled in (sign, log) space: total.sign is the product of the
// factor signs with det(X), det(Y) contributing their sign to the F-th power,
// and total.log_abs is sum(log|det A^(n)|) + F*log|det X| + F*log|det Y|.
struct ClosedFormBreakdown {
  std::vector<SignLogDet> det_a;
  SignLogDet det_x;
  SignLogDet det_y;
  SignLogDet total;
};

// Labels of the singular factors, 1-based to match the usual notation:
// "A[3]", "X", "Y".
inline std::vector<std::string> zero_factors(const ClosedFormBreakdown& b) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < b.det_a.size(); ++k) {
    if (b.det_a[k].is_zero()) out.push_back("A[" + std::to_string(k + 1) + "]");
  }
  if (b.det_x.is_zero()) out.push_back("X");
  if (b.det_y.is_zero()) out.push_back("Y");
  return out;
}

// Evaluates the identity without materializing G: N determinants of FxF
// factors plus two NxN determinants, O(N*F^3 + N^3). Powers enter as
// F * log|det|, never by repeated multiplication.
template <class T>
ClosedFormBreakdown closed_form_det(const KronRankOneInstance<T>& inst) {
  ClosedFormBreakdown out;
  out.det_a.reserve(static_cast<std::size_t>(inst.n()));
  for (int k = 0; k < inst.n(); ++k) {
    out.det_a.push_back(det_sign_log(inst.a(k)));
  }
  out.det_x = det_sign_log(inst.x());
  out.det_y = det_sign_log(inst.y());

  SignLogDet total = SignLogDet::one();
  for (const SignLogDet& d : out.det_a) total *= d;
  total *= out.det_x.pow(inst.f());
  total *= out.det_y.pow(inst.f());
  out.total = total;
  return out;
}

template <class T>
struct ScalarWithFlags {
  T value;
  bool overflow = false;
  bool underflow = false;
};

// Plain-scalar determinant of G by the identity. Exact mode multiplies the
// rational factors outright and cannot overflow; float mode exposes the
// lossy view of the log-space total, with flags when exp() leaves the
// representable range.
template <class T>
ScalarWithFlags<T> closed_form_value(const KronRankOneInstance<T>& inst) {
  if constexpr (scalar_traits<T>::is_exact) {
    mpq_class total = 1;
    for (int k = 0; k < inst.n(); ++k) total *= bareiss_det(inst.a(k));
    const auto f = static_cast<unsigned long>(inst.f());
    total *= rational_pow(bareiss_det(inst.x()), f);
    total *= rational_pow(bareiss_det(inst.y()), f);
    return {total, false, false};
  } else {
    const auto v = closed_form_det(inst).total.value();
    return {v.value, v.overflow, v.underflow};
  }
}

}  // namespace krondet
