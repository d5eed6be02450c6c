#include "microcover/interval.hpp"

#include <algorithm>
#include <utility>

#include "microcover/errors.hpp"

namespace microcover {

Interval::Interval(Rational lo, Rational hi)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (hi_ < lo_) {
    throw PreconditionError("interval endpoints out of order: [" +
                            lo_.to_string() + ", " + hi_.to_string() + "]");
  }
}

Interval Interval::with_length(const Rational& lo, const Rational& length) {
  return Interval(lo, lo + length);
}

Rational length(const Interval& i) { return i.length(); }

bool intersects(const Interval& i, const Interval& j) {
  return std::max(i.lo(), j.lo()) <= std::min(i.hi(), j.hi());
}

Rational distance(const Interval& i, const Interval& j) {
  if (i.hi() < j.lo()) return j.lo() - i.hi();
  if (j.hi() < i.lo()) return i.lo() - j.hi();
  return Rational(0);
}

Interval shift(const Interval& i, const Rational& r) {
  return Interval(i.lo() + r, i.hi() + r);
}

std::string to_string(const Interval& i) {
  return "[" + i.lo().to_string() + ", " + i.hi().to_string() + "]";
}

}  // namespace microcover
