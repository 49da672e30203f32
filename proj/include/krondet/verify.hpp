#pragma once

#include <cmath>
#include <string>

#include "krondet/closed_form.hpp"
#include "krondet/dense_oracle.hpp"
#include "krondet/instance.hpp"
#include "krondet/sign_log_det.hpp"

namespace krondet {

inline constexpr double kVerifyLogAbsTol = 1e-8;
inline constexpr double kVerifyLogRelTol = 1e-6;

// Float-mode acceptance: signs must agree, and for nonzero determinants the
// log magnitudes must satisfy |dlog| <= 1e-8 + 1e-6 * max(1, |log|). Working
// in log space keeps the comparison scale-free and overflow-proof; |log| is
// taken as the larger of the two magnitudes.
inline bool log_space_pass(const SignLogDet& a, const SignLogDet& b) {
  if (a.sign() != b.sign()) return false;
  if (a.sign() == 0) return true;
  const double scale =
      std::max(1.0, std::max(std::fabs(a.log_abs()), std::fabs(b.log_abs())));
  return std::fabs(a.log_abs() - b.log_abs()) <=
         kVerifyLogAbsTol + kVerifyLogRelTol * scale;
}

// One formula-vs-oracle comparison. In exact mode `pass` means rational
// equality; in float mode it means the log-space policy above.
struct VerificationReport {
  ScalarMode mode = ScalarMode::kFloat;
  SignLogDet closed_total;
  SignLogDet dense_total;
  std::string closed_value;  // decimal (float) or p/q (exact) rendering
  std::string dense_value;
  bool sign_match = false;
  double log_diff = 0.0;  // |delta log|; 0 when both singular, inf on sign split
  double abs_diff = 0.0;  // |closed - dense| in value space, best effort
  bool exact_equal = false;
  bool pass = false;
  bool corrupted = false;
};

struct VerifyOptions {
  std::size_t dense_cap = kDefaultDenseCap;
  // Debug negative control: adds 1 to one entry of the materialized G so the
  // comparison must fail; guards against vacuous passes.
  bool corrupt = false;
};

template <class T>
VerificationReport verify_instance(const KronRankOneInstance<T>& inst,
                                   const VerifyOptions& opt = {}) {
  VerificationReport rep;
  rep.mode = scalar_traits<T>::mode;
  rep.corrupted = opt.corrupt;

  if (inst.dim() > opt.dense_cap) {
    throw resource_error("dense dimension " + std::to_string(inst.dim()) +
                         " exceeds cap " + std::to_string(opt.dense_cap));
  }
  DenseMatrix<T> g = materialize(inst);
  if (opt.corrupt) g(0, 0) += T(1);

  rep.closed_total = closed_form_det(inst).total;
  rep.dense_total = det_sign_log(g);
  rep.sign_match = rep.closed_total.sign() == rep.dense_total.sign();

  if (rep.closed_total.is_zero() && rep.dense_total.is_zero()) {
    rep.log_diff = 0.0;
  } else if (rep.closed_total.is_zero() || rep.dense_total.is_zero()) {
    rep.log_diff = std::numeric_limits<double>::infinity();
  } else {
    rep.log_diff = std::fabs(rep.closed_total.log_abs() - rep.dense_total.log_abs());
  }

  if constexpr (scalar_traits<T>::is_exact) {
    const mpq_class closed = closed_form_value(inst).value;
    const mpq_class dense = bareiss_det(g);
    rep.closed_value = closed.get_str();
    rep.dense_value = dense.get_str();
    rep.exact_equal = (closed == dense);
    rep.abs_diff = mpq_class(::abs(mpq_class(closed - dense))).get_d();
    rep.pass = rep.exact_equal;
  } else {
    const auto cv = rep.closed_total.value();
    const auto dv = rep.dense_total.value();
    rep.closed_value = scalar_traits<double>::to_string(cv.value);
    rep.dense_value = scalar_traits<double>::to_string(dv.value);
    if (cv.overflow || dv.overflow) {
      rep.abs_diff = std::numeric_limits<double>::infinity();
    } else {
      rep.abs_diff = std::fabs(cv.value - dv.value);
    }
    rep.exact_equal = false;
    rep.pass = log_space_pass(rep.closed_total, rep.dense_total);
  }
  return rep;
}

}  // namespace krondet
