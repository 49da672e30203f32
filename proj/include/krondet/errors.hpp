#pragma once

#include <stdexcept>
#include <string>

namespace krondet {

// Error taxonomy shared by the library and the CLI. The CLI maps these onto
// stable exit codes: parse_error -> 2, validation_error (and derived) -> 3,
// resource_error -> 4. A failed verification is reported, not thrown, except
// for the internal dual-path checks which raise verification_error.

class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class validation_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Dimension mismatches: non-square input, wrong factor shapes, ...
class shape_error : public validation_error {
 public:
  using validation_error::validation_error;
};

class bounds_error : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A configured cap was exceeded (dense dimension, enumeration size, ...).
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal cross-check failed. This signals a convention bug in the
// caller's data or in the library itself and is never expected on valid runs.
class verification_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace krondet
