#pragma once

#include <stdexcept>
#include <string>

namespace floqept {

// Error categories; the numeric values double as CLI exit codes where the
// two overlap (validation = 2, numerical = 3, io = 4).
enum class ErrorKind {
  invalid_argument = 1,
  validation = 2,
  numerical = 3,
  io = 4,
  range = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace floqept
