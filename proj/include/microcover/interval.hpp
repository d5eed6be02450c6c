#pragma once

#include <string>

#include "microcover/rational.hpp"

namespace microcover {

// Closed interval [lo, hi] with rational endpoints, lo <= hi.
class Interval {
 public:
  Interval(Rational lo, Rational hi);

  static Interval with_length(const Rational& lo, const Rational& length);

  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }

  Rational length() const { return hi_ - lo_; }
  bool contains(const Rational& x) const { return lo_ <= x && x <= hi_; }
  bool contains(const Interval& other) const {
    return lo_ <= other.lo_ && other.hi_ <= hi_;
  }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  Rational lo_;
  Rational hi_;
};

Rational length(const Interval& i);

// Closed semantics: touching endpoints count as a nonempty intersection.
bool intersects(const Interval& i, const Interval& j);

// Zero when the intervals intersect, otherwise the gap between them.
Rational distance(const Interval& i, const Interval& j);

Interval shift(const Interval& i, const Rational& r);

std::string to_string(const Interval& i);

}  // namespace microcover
