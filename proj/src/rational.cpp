#include "microcover/rational.hpp"

#include <cctype>

#include "microcover/errors.hpp"

namespace microcover {

namespace {

BigInt parse_integer(std::string_view text) {
  std::size_t pos = 0;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) pos = 1;
  if (pos == text.size()) {
    throw PreconditionError("malformed integer '" + std::string(text) + "'");
  }
  for (std::size_t i = pos; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      throw PreconditionError("malformed integer '" + std::string(text) + "'");
    }
  }
  std::string digits(text);
  if (digits[0] == '+') digits.erase(0, 1);
  return BigInt(digits, 10);
}

}  // namespace

Rational::Rational(std::int64_t n) : value_(static_cast<long>(n)) {}

Rational::Rational(std::int64_t num, std::int64_t den)
    : Rational(BigInt(static_cast<long>(num)), BigInt(static_cast<long>(den))) {}

Rational::Rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw PreconditionError("zero denominator");
  value_ = mpq_class(num, den);
  value_.canonicalize();
}

Rational::Rational(const mpq_class& q) : value_(q) { value_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    return Rational(parse_integer(text), BigInt(1));
  }
  const BigInt den = parse_integer(text.substr(slash + 1));
  if (den < 0) throw PreconditionError("negative denominator in '" +
                                       std::string(text) + "'");
  return Rational(parse_integer(text.substr(0, slash)), den);
}

Rational Rational::inverse_power_of_seven(std::uint64_t k) {
  BigInt den;
  mpz_ui_pow_ui(den.get_mpz_t(), 7, k);
  mpq_class q;
  mpq_set_num(q.get_mpq_t(), BigInt(1).get_mpz_t());
  mpq_set_den(q.get_mpq_t(), den.get_mpz_t());
  return Rational(q);
}

std::string Rational::to_string() const {
  if (value_.get_den() == 1) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

BigInt Rational::floor() const {
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
  return out;
}

Rational Rational::pow(std::uint64_t exponent) const {
  BigInt num;
  BigInt den;
  mpz_pow_ui(num.get_mpz_t(), value_.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), value_.get_den_mpz_t(), exponent);
  // Powers of coprime integers stay coprime; no canonicalization needed.
  mpq_class q;
  mpq_set_num(q.get_mpq_t(), num.get_mpz_t());
  mpq_set_den(q.get_mpq_t(), den.get_mpz_t());
  Rational out;
  out.value_ = q;
  return out;
}

Rational Rational::abs() const { return sign() < 0 ? -*this : *this; }

Rational& Rational::operator+=(const Rational& o) {
  value_ += o.value_;
  return *this;
}
Rational& Rational::operator-=(const Rational& o) {
  value_ -= o.value_;
  return *this;
}
Rational& Rational::operator*=(const Rational& o) {
  value_ *= o.value_;
  return *this;
}
Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw PreconditionError("division by zero");
  value_ /= o.value_;
  return *this;
}

Rational operator-(const Rational& a) {
  Rational out;
  out.value_ = -a.value_;
  return out;
}

std::string to_string(const Rational& r) { return r.to_string(); }

}  // namespace microcover
