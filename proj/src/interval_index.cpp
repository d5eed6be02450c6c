#include "microcover/interval_index.hpp"

#include <algorithm>

#include "microcover/errors.hpp"

namespace microcover {

DisjointIntervalIndex::DisjointIntervalIndex(
    std::vector<std::pair<std::uint64_t, Interval>> items)
    : items_(std::move(items)) {
  std::sort(items_.begin(), items_.end(), [](const auto& x, const auto& y) {
    return x.second.lo() < y.second.lo();
  });
  for (std::size_t i = 1; i < items_.size(); ++i) {
    if (intersects(items_[i - 1].second, items_[i].second)) {
      throw PreconditionError("DisjointIntervalIndex: members " +
                              std::to_string(items_[i - 1].first) + " and " +
                              std::to_string(items_[i].first) + " intersect");
    }
  }
}

std::size_t DisjointIntervalIndex::first_candidate(const Rational& lo) const {
  auto it = std::partition_point(items_.begin(), items_.end(),
                                 [&](const auto& x) { return x.second.hi() < lo; });
  return static_cast<std::size_t>(it - items_.begin());
}

std::vector<std::uint64_t> DisjointIntervalIndex::keys_meeting(const Interval& j) const {
  std::vector<std::uint64_t> out;
  for (std::size_t i = first_candidate(j.lo()); i < items_.size(); ++i) {
    if (items_[i].second.lo() > j.hi()) break;
    out.push_back(items_[i].first);
  }
  return out;
}

std::vector<std::uint64_t> DisjointIntervalIndex::keys_meeting_shifted(
    const Interval& j, const Rational& offset) const {
  return keys_meeting(shift(j, -offset));
}

bool DisjointIntervalIndex::any_meeting(const Interval& j) const {
  const std::size_t i = first_candidate(j.lo());
  return i < items_.size() && items_[i].second.lo() <= j.hi();
}

bool DisjointIntervalIndex::any_meeting_shifted(const Interval& j,
                                                const Rational& offset) const {
  return any_meeting(shift(j, -offset));
}

}  // namespace microcover
