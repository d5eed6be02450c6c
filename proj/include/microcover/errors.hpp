#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace microcover {

// A documented precondition of an operation does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A finite base-7 digit prefix ran out before the answer was determined.
class PrefixExhaustedError : public std::runtime_error {
 public:
  PrefixExhaustedError(const std::string& what, std::size_t needed_index)
      : std::runtime_error(what), needed_index_(needed_index) {}

  std::size_t needed_index() const noexcept { return needed_index_; }

 private:
  std::size_t needed_index_;
};

// The declared finite window is too small to produce a certified answer.
// This never means the underlying infinite statement is false.
class WindowInsufficientError : public std::runtime_error {
 public:
  WindowInsufficientError(const std::string& what, std::int64_t level = -1)
      : std::runtime_error(what), level_(level) {}

  std::int64_t level() const noexcept { return level_; }

 private:
  std::int64_t level_;
};

}  // namespace microcover
