#include "microcover/digits.hpp"

#include <utility>

#include "microcover/errors.hpp"

namespace microcover {

Digit7Stream::Digit7Stream(std::uint64_t base_exponent, std::vector<int> digits,
                           bool exact)
    : m_(base_exponent), digits_(std::move(digits)), exact_(exact) {
  if (digits_.empty()) throw PreconditionError("empty digit stream");
  for (int d : digits_) {
    if (d < 0 || d > 6) throw PreconditionError("base-7 digit out of range");
  }
}

std::optional<int> Digit7Stream::digit(std::size_t j) const {
  if (j < digits_.size()) return digits_[j];
  if (exact_) return 0;
  return std::nullopt;
}

Rational Digit7Stream::prefix_value() const {
  BigInt num = 0;
  for (int d : digits_) num = num * 7 + d;
  BigInt den;
  mpz_ui_pow_ui(den.get_mpz_t(), 7, m_ + digits_.size());
  return Rational(num, den);
}

Digit7Stream digits_base7(const Rational& r, std::uint64_t m,
                          std::size_t count) {
  if (count == 0) throw PreconditionError("digits_base7: count must be >= 1");
  const Rational upper = Rational::inverse_power_of_seven(m);
  if (r.sign() <= 0 || r >= upper) {
    throw PreconditionError("digits_base7: need 0 < r < 7^-" +
                            std::to_string(m) + ", got " + r.to_string());
  }
  // x = r * 7^m in (0, 1); each step peels one digit off the front.
  BigInt num = r.numerator();
  const BigInt den = r.denominator();
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 7, m);
  num *= scale;
  std::vector<int> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    num *= 7;
    BigInt q;
    mpz_fdiv_qr(q.get_mpz_t(), num.get_mpz_t(), num.get_mpz_t(),
                den.get_mpz_t());
    out.push_back(static_cast<int>(q.get_si()));
  }
  return Digit7Stream(m, std::move(out), num == 0);
}

}  // namespace microcover
