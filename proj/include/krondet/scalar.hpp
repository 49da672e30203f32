#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdio>
#include <string>

#include "krondet/errors.hpp"

namespace krondet {

// Every pipeline runs under exactly one scalar mode. The mode selects the
// scalar type at compile time (double vs. mpq_class); mixing modes is a type
// error, the enum only exists for runtime dispatch at the CLI boundary.
enum class ScalarMode { kFloat, kExact };

inline const char* mode_name(ScalarMode m) {
  return m == ScalarMode::kFloat ? "float" : "exact";
}

inline ScalarMode parse_mode(const std::string& s) {
  if (s == "float") return ScalarMode::kFloat;
  if (s == "exact") return ScalarMode::kExact;
  throw parse_error("unknown scalar mode '" + s + "' (expected float|exact)");
}

template <class T>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  static constexpr bool is_exact = false;
  static constexpr ScalarMode mode = ScalarMode::kFloat;

  static double abs(double v) { return std::fabs(v); }
  static bool is_zero(double v) { return v == 0.0; }
  static double to_double(double v) { return v; }
  static double from_double(double v) { return v; }

  // Float-mode matrices accept finite entries only.
  static void validate(double v) {
    if (!std::isfinite(v)) {
      throw validation_error("non-finite entry in float-mode matrix");
    }
  }

  static std::string to_string(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
  }
};

template <>
struct scalar_traits<mpq_class> {
  static constexpr bool is_exact = true;
  static constexpr ScalarMode mode = ScalarMode::kExact;

  static mpq_class abs(const mpq_class& v) { return ::abs(v); }
  static bool is_zero(const mpq_class& v) { return sgn(v) == 0; }
  static double to_double(const mpq_class& v) { return v.get_d(); }

  // Exact conversion: every finite double is a dyadic rational.
  static mpq_class from_double(double v) {
    if (!std::isfinite(v)) {
      throw validation_error("non-finite value has no rational equivalent");
    }
    return mpq_class(v);
  }

  static void validate(const mpq_class&) {}
  static std::string to_string(const mpq_class& v) { return v.get_str(); }
};

// Parses "p", "-p" or "p/q" into a scalar. Decimal entries travel as JSON
// numbers, not strings, so this only has to understand integer ratios.
template <class T>
T parse_scalar_string(const std::string& text) {
  mpq_class q;
  try {
    q = mpq_class(text);
  } catch (const std::invalid_argument&) {
    throw parse_error("cannot parse scalar '" + text + "' (expected p or p/q)");
  }
  if (sgn(q.get_den()) == 0) {
    throw validation_error("zero denominator in scalar '" + text + "'");
  }
  q.canonicalize();
  if constexpr (scalar_traits<T>::is_exact) {
    return q;
  } else {
    return q.get_d();
  }
}

}  // namespace krondet
