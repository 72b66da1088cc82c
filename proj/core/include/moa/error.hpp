// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace moa {

enum class ErrorKind {
  kShape,          // shape mismatch, element-count mismatch, rank error
  kIndex,          // index out of bounds or of the wrong length
  kRange,          // flat offset out of range
  kDomain,         // gradeup input outside [0, n)
  kPermutation,    // not a permutation of 0..n-1
  kOverflow,       // 64-bit extent product overflow
  kValue,          // non-finite scalar, non-unit vector, non-orthonormal basis
  kEval,           // unbound leaf, division by zero
  kPartition,      // processor count does not split the output
  kLowering,       // non-affine access discovered while lowering
  kPlanIntegrity,  // plan reads or writes outside its buffers
  kParse,          // expression text or JSON document is malformed
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library. `kind()` lets front ends map
/// failures onto exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failures carry the 1-based source position.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column);

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace moa
