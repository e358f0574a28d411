#pragma once

#include <stdexcept>
#include <string>

namespace tenv {

// Error taxonomy mirrored by the C API status codes and the CLI exit codes:
//   2 = malformed input (schema violation, unknown backend/family, bad shapes)
//   3 = a configured resource bound was exceeded (the message names the bound)
//   4 = a mathematical contract was violated (failed axiom check, kind mismatch,
//       non-surjective input where a surjection is required, ...)
struct Error : std::runtime_error {
  int code;
  Error(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

struct SchemaError : Error {
  explicit SchemaError(const std::string& msg) : Error(2, msg) {}
};

struct ResourceError : Error {
  explicit ResourceError(const std::string& msg) : Error(3, msg) {}
};

struct ContractError : Error {
  explicit ContractError(const std::string& msg) : Error(4, msg) {}
};

}  // namespace tenv
