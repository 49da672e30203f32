#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "krondet/instance.hpp"
#include "krondet/matrix.hpp"
#include "krondet/scalar.hpp"

namespace krondet {

// Instance file schema, one JSON document:
//
//   {
//     "F": 2, "N": 3,
//     "A": [ [[..F numbers..] x F rows] x N ],
//     "X": [ [..N numbers..] x N rows ],
//     "Y": [ [..N numbers..] x N rows ]
//   }
//
// All matrices are row-major. Entries are JSON numbers, or strings "p/q"
// carrying exact integer ratios. Float mode rounds ratios to the nearest
// double; exact mode converts numbers to their (exact) binary value.

namespace detail {

template <class T>
T scalar_from_json(const nlohmann::json& v) {
  if (v.is_number_integer()) {
    const auto i = v.get<std::int64_t>();
    if constexpr (scalar_traits<T>::is_exact) {
      return mpq_class(static_cast<long>(i));
    } else {
      return static_cast<double>(i);
    }
  }
  if (v.is_number_unsigned()) {
    const auto u = v.get<std::uint64_t>();
    if constexpr (scalar_traits<T>::is_exact) {
      return mpq_class(static_cast<unsigned long>(u));
    } else {
      return static_cast<double>(u);
    }
  }
  if (v.is_number_float()) {
    return scalar_traits<T>::from_double(v.get<double>());
  }
  if (v.is_string()) {
    return parse_scalar_string<T>(v.get<std::string>());
  }
  throw parse_error("matrix entry must be a number or a 'p/q' string");
}

inline nlohmann::json scalar_to_json(double v) { return nlohmann::json(v); }
inline nlohmann::json scalar_to_json(const mpq_class& v) {
  return nlohmann::json(v.get_str());
}

template <class T>
DenseMatrix<T> matrix_from_json(const nlohmann::json& j, std::size_t rows,
                                std::size_t cols, const std::string& name) {
  if (!j.is_array()) throw parse_error(name + " must be an array of rows");
  if (j.size() != rows) {
    throw shape_error(name + " must have " + std::to_string(rows) + " rows");
  }
  std::vector<T> entries;
  entries.reserve(rows * cols);
  for (const auto& row : j) {
    if (!row.is_array()) throw parse_error(name + " rows must be arrays");
    if (row.size() != cols) {
      throw shape_error(name + " rows must have " + std::to_string(cols) +
                        " entries");
    }
    for (const auto& v : row) entries.push_back(scalar_from_json<T>(v));
  }
  return DenseMatrix<T>(rows, cols, std::move(entries));
}

template <class T>
nlohmann::json matrix_to_json(const DenseMatrix<T>& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      row.push_back(scalar_to_json(m(i, j)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

template <class T>
KronRankOneInstance<T> instance_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw parse_error("instance must be a JSON object");
  for (const char* key : {"F", "N", "A", "X", "Y"}) {
    if (!j.contains(key)) {
      throw parse_error(std::string("missing field '") + key + "'");
    }
  }
  if (!j["F"].is_number_integer() || !j["N"].is_number_integer()) {
    throw parse_error("F and N must be integers");
  }
  const auto f = j["F"].get<std::int64_t>();
  const auto n = j["N"].get<std::int64_t>();
  if (f < 1 || n < 1) throw validation_error("F and N must be positive");

  if (!j["A"].is_array()) throw parse_error("A must be an array of matrices");
  if (j["A"].size() != static_cast<std::size_t>(n)) {
    throw shape_error("A must contain exactly N matrices");
  }
  std::vector<DenseMatrix<T>> a;
  a.reserve(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < j["A"].size(); ++k) {
    a.push_back(detail::matrix_from_json<T>(
        j["A"][k], static_cast<std::size_t>(f), static_cast<std::size_t>(f),
        "A[" + std::to_string(k + 1) + "]"));
  }
  DenseMatrix<T> x = detail::matrix_from_json<T>(
      j["X"], static_cast<std::size_t>(n), static_cast<std::size_t>(n), "X");
  DenseMatrix<T> y = detail::matrix_from_json<T>(
      j["Y"], static_cast<std::size_t>(n), static_cast<std::size_t>(n), "Y");
  return KronRankOneInstance<T>(std::move(a), std::move(x), std::move(y));
}

template <class T>
nlohmann::json instance_to_json(const KronRankOneInstance<T>& inst) {
  nlohmann::json j;
  j["F"] = inst.f();
  j["N"] = inst.n();
  nlohmann::json a = nlohmann::json::array();
  for (int k = 0; k < inst.n(); ++k) {
    a.push_back(detail::matrix_to_json(inst.a(k)));
  }
  j["A"] = std::move(a);
  j["X"] = detail::matrix_to_json(inst.x());
  j["Y"] = detail::matrix_to_json(inst.y());
  return j;
}

template <class T>
KronRankOneInstance<T> parse_instance_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("invalid JSON: ") + e.what());
  }
  return instance_from_json<T>(j);
}

template <class T>
KronRankOneInstance<T> load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open instance file '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_instance_text<T>(text);
}

}  // namespace krondet
