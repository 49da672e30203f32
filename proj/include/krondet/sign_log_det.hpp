#pragma once

#include <gmpxx.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "krondet/errors.hpp"

namespace krondet {

// Overflow-safe determinant carrier: a sign in {-1, 0, +1} plus ln|det|.
// Products of many factors accumulate as log sums, so the representation
// never overflows where a plain double would. sign == 0 marks a singular
// determinant; log_abs is then an undefined sentinel (NaN) and must not be
// read into arithmetic.
class SignLogDet {
 public:
  SignLogDet() = default;  // zero

  static SignLogDet zero() { return SignLogDet(); }

  static SignLogDet one() { return from_sign_log(1, 0.0); }

  static SignLogDet from_sign_log(int sign, double log_abs) {
    if (sign == 0) return zero();
    if (sign != 1 && sign != -1) {
      throw validation_error("sign must be -1, 0 or +1");
    }
    if (!std::isfinite(log_abs)) {
      throw validation_error("log_abs must be finite for a nonzero value");
    }
    SignLogDet d;
    d.sign_ = sign;
    d.log_abs_ = log_abs;
    return d;
  }

  static SignLogDet from_value(double v) {
    if (!std::isfinite(v)) {
      throw validation_error("cannot take sign/log of a non-finite value");
    }
    if (v == 0.0) return zero();
    return from_sign_log(v > 0 ? 1 : -1, std::log(std::fabs(v)));
  }

  // Exact rationals convert via num/den mantissa-exponent splits, accurate to
  // a few ulps regardless of magnitude.
  static SignLogDet from_rational(const mpq_class& v) {
    const int s = sgn(v);
    if (s == 0) return zero();
    SignLogDet d;
    d.sign_ = s;
    d.log_abs_ = log_abs_mpz(v.get_num()) - log_abs_mpz(v.get_den());
    return d;
  }

  int sign() const { return sign_; }
  bool is_zero() const { return sign_ == 0; }

  double log_abs() const { return log_abs_; }

  struct ValueResult {
    double value = 0.0;
    bool overflow = false;
    bool underflow = false;
  };

  // Lossy view: sign * exp(log_abs). Sets the overflow flag when the result
  // exceeds the double range and the underflow flag when it falls below the
  // smallest normal magnitude.
  ValueResult value() const {
    ValueResult r;
    if (sign_ == 0) return r;
    if (log_abs_ > kMaxLog) {
      r.value = sign_ > 0 ? std::numeric_limits<double>::infinity()
                          : -std::numeric_limits<double>::infinity();
      r.overflow = true;
      return r;
    }
    r.value = sign_ * std::exp(log_abs_);
    if (log_abs_ < kMinLog) r.underflow = true;
    return r;
  }

  SignLogDet& operator*=(const SignLogDet& o) {
    if (sign_ == 0 || o.sign_ == 0) {
      *this = zero();
    } else {
      sign_ *= o.sign_;
      log_abs_ += o.log_abs_;
    }
    return *this;
  }

  friend SignLogDet operator*(SignLogDet a, const SignLogDet& b) {
    a *= b;
    return a;
  }

  // Nonnegative integer power; pow(0) is the empty product +1.
  SignLogDet pow(int exponent) const {
    if (exponent < 0) throw validation_error("negative determinant power");
    if (exponent == 0) return one();
    if (sign_ == 0) return zero();
    const int s = (sign_ < 0 && (exponent % 2) != 0) ? -1 : 1;
    return from_sign_log(s, log_abs_ * exponent);
  }

  std::string describe() const {
    if (sign_ == 0) return "sign=0";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "sign=%+d log_abs=%.17g", sign_, log_abs_);
    return buf;
  }

 private:
  static double log_abs_mpz(const mpz_class& z) {
    signed long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
    return std::log(std::fabs(mant)) + double(exp) * std::numbers::ln2;
  }

  static constexpr double kMaxLog = 709.782712893383996;   // ln(DBL_MAX)
  static constexpr double kMinLog = -708.396418532264106;  // ln(DBL_MIN)

  int sign_ = 0;
  double log_abs_ = std::numeric_limits<double>::quiet_NaN();
};

}  // namespace krondet
