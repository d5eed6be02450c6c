#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "microcover/interval.hpp"

namespace microcover {

// Pairwise disjoint keyed intervals sorted by position, for fast
// "which members meet J" queries. Sorting by lo also sorts by hi.
class DisjointIntervalIndex {
 public:
  DisjointIntervalIndex() = default;
  explicit DisjointIntervalIndex(std::vector<std::pair<std::uint64_t, Interval>> items);

  std::size_t size() const { return items_.size(); }
  const std::vector<std::pair<std::uint64_t, Interval>>& items() const { return items_; }

  // Keys whose interval meets j (closed semantics), in positional order.
  std::vector<std::uint64_t> keys_meeting(const Interval& j) const;
  // Same query against the family translated by `offset`.
  std::vector<std::uint64_t> keys_meeting_shifted(const Interval& j,
                                                  const Rational& offset) const;
  bool any_meeting(const Interval& j) const;
  bool any_meeting_shifted(const Interval& j, const Rational& offset) const;

 private:
  std::size_t first_candidate(const Rational& lo) const;

  std::vector<std::pair<std::uint64_t, Interval>> items_;
};

}  // namespace microcover
