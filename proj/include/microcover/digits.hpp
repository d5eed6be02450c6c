#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "microcover/rational.hpp"

namespace microcover {

// Finite prefix of the base-7 expansion
//   r = sum_j digits[j] / 7^(m + 1 + j),   0 <= r < 7^-m.
// When `exact` is set the expansion terminates inside the prefix and every
// later digit is known to be zero.
class Digit7Stream {
 public:
  Digit7Stream(std::uint64_t base_exponent, std::vector<int> digits,
               bool exact);

  std::uint64_t base_exponent() const { return m_; }
  const std::vector<int>& digits() const { return digits_; }
  bool exact() const { return exact_; }
  std::size_t size() const { return digits_.size(); }

  // Digit at position j, or nullopt if j lies beyond a non-terminating prefix.
  std::optional<int> digit(std::size_t j) const;

  // The rational spelled by the prefix; equals r exactly when exact().
  Rational prefix_value() const;

  friend bool operator==(const Digit7Stream&, const Digit7Stream&) = default;

 private:
  std::uint64_t m_;
  std::vector<int> digits_;
  bool exact_;
};

// First `count` digits of r * 7^m after the point. Requires 0 < r < 7^-m.
Digit7Stream digits_base7(const Rational& r, std::uint64_t m,
                          std::size_t count);

}  // namespace microcover
