#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <type_traits>

namespace microcover {

using BigInt = mpz_class;

// Exact fraction in lowest terms with a positive denominator.
//
// There is deliberately no conversion from or to floating point: every
// geometric predicate in the library is decided on these values.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n);  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den);
  Rational(const BigInt& num, const BigInt& den);
  explicit Rational(const mpq_class& q);

  template <typename F, std::enable_if_t<std::is_floating_point_v<F>, int> = 0>
  Rational(F) = delete;

  // Accepts "p", "p/q" and "-p/q" with decimal digits.
  static Rational parse(std::string_view text);

  // 1 / 7^k.
  static Rational inverse_power_of_seven(std::uint64_t k);

  BigInt numerator() const { return value_.get_num(); }
  BigInt denominator() const { return value_.get_den(); }
  std::string numerator_string() const { return value_.get_num().get_str(); }
  std::string denominator_string() const { return value_.get_den().get_str(); }
  std::string to_string() const;

  int sign() const { return sgn(value_); }
  bool is_zero() const { return sign() == 0; }
  BigInt floor() const;

  Rational pow(std::uint64_t exponent) const;
  Rational abs() const;

  const mpq_class& raw() const { return value_; }

  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a);

  friend bool operator==(const Rational& a, const Rational& b) {
    return cmp(a.value_, b.value_) == 0;
  }
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  mpq_class value_{0};
};

std::string to_string(const Rational& r);

}  // namespace microcover
