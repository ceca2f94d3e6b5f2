#pragma once

#include <stdexcept>
#include <string>

namespace bellgate {

/// Error categories double as the CLI's exit codes.
enum class ErrorKind : int {
  validation = 1,  // bad config, violated invariant, malformed input table
  io = 2,
  numerical = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error validation_error(const std::string& what) { return {ErrorKind::validation, what}; }
inline Error io_error(const std::string& what) { return {ErrorKind::io, what}; }
inline Error numerical_error(const std::string& what) { return {ErrorKind::numerical, what}; }

}  // namespace bellgate
