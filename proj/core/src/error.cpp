// SPDX-License-Identifier: Apache-2.0

#include "moa/error.hpp"

namespace moa {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kShape: return "shape error";
    case ErrorKind::kIndex: return "index error";
    case ErrorKind::kRange: return "range error";
    case ErrorKind::kDomain: return "domain error";
    case ErrorKind::kPermutation: return "permutation error";
    case ErrorKind::kOverflow: return "overflow error";
    case ErrorKind::kValue: return "value error";
    case ErrorKind::kEval: return "evaluation error";
    case ErrorKind::kPartition: return "partition error";
    case ErrorKind::kLowering: return "lowering error";
    case ErrorKind::kPlanIntegrity: return "plan-integrity error";
    case ErrorKind::kParse: return "parse error";
  }
  return "error";
}

ParseError::ParseError(const std::string& message, int line, int column)
    : Error(ErrorKind::kParse,
            std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

}  // namespace moa
