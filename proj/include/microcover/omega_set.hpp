#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "microcover/rational.hpp"

namespace microcover {

// {start, start + step, start + 2 step, ...}
struct Progression {
  std::uint64_t start = 0;
  std::uint64_t step = 1;

  friend bool operator==(const Progression&, const Progression&) = default;
  friend auto operator<=>(const Progression&, const Progression&) = default;
};

// Subset of omega of the form (finite ∪ progressions) \ excluded.
//
// Construction normalizes the progressions into a residue table modulo the
// least common multiple of their steps, valid from the largest start on.
// Membership and prefix counting are then O(log #finite).
class OmegaSet {
 public:
  OmegaSet() { normalize(); }
  OmegaSet(std::set<std::uint64_t> finite, std::vector<Progression> progressions,
           std::set<std::uint64_t> excluded = {});

  static OmegaSet empty() { return {}; }
  static OmegaSet all() { return progression(0, 1); }
  static OmegaSet finite(std::set<std::uint64_t> elements);
  static OmegaSet progression(std::uint64_t start, std::uint64_t step);
  // (k)·(omega+1) = {k, 2k, 3k, ...}
  static OmegaSet multiples(std::uint64_t k) { return progression(k, k); }

  const std::set<std::uint64_t>& finite_part() const { return finite_; }
  const std::vector<Progression>& progressions() const { return progressions_; }
  const std::set<std::uint64_t>& excluded() const { return excluded_; }

  bool contains(std::uint64_t n) const;
  bool is_finite() const { return progressions_.empty(); }

  // card(S ∩ {0, ..., j}).
  std::uint64_t count_prefix(std::uint64_t j) const;

  // Exact asymptotic density.
  Rational density_exact() const;

  // Disjoint progressions (one per residue class modulo the period) that
  // agree with the progression part of the set from `threshold()` on.
  std::vector<Progression> normalized_progressions() const;
  std::uint64_t period() const { return period_; }
  std::uint64_t threshold() const { return threshold_; }

  // Sorted members <= j.
  std::vector<std::uint64_t> elements_up_to(std::uint64_t j) const;
  // First `count` members in increasing order; throws if the set is finite
  // and has fewer members.
  std::vector<std::uint64_t> first_elements(std::size_t count) const;
  std::optional<std::uint64_t> min_element() const;

  OmegaSet shifted_down(std::uint64_t offset) const;
  OmegaSet united(const OmegaSet& other) const;

  friend bool operator==(const OmegaSet& a, const OmegaSet& b) {
    return a.finite_ == b.finite_ && a.progressions_ == b.progressions_ &&
           a.excluded_ == b.excluded_;
  }

 private:
  void normalize();
  bool in_progressions(std::uint64_t n) const;
  std::uint64_t progression_count_prefix(std::uint64_t j) const;

  std::set<std::uint64_t> finite_;
  std::vector<Progression> progressions_;
  std::set<std::uint64_t> excluded_;

  std::uint64_t period_ = 1;
  std::uint64_t threshold_ = 0;
  std::vector<bool> residue_member_;
  std::vector<std::uint64_t> residue_cumulative_;  // size period_ + 1
  std::vector<std::uint64_t> head_cumulative_;     // size threshold_ + 1
  std::vector<std::uint64_t> extra_members_;       // finite, not in progressions
  std::vector<std::uint64_t> removed_members_;     // excluded, in progressions
};

struct DensityReport {
  std::uint64_t window_end = 0;
  std::map<std::uint64_t, Rational> prefix_ratios;
  Rational lower_estimate;
  Rational upper_estimate;
  std::optional<Rational> exact_density;
};

std::uint64_t count_prefix(const OmegaSet& s, std::uint64_t j);
Rational density_exact(const OmegaSet& s);

// Sampled min/max of card(S ∩ (j+1))/(j+1) over an evenly spaced grid on
// [j_max/2, j_max]. Requires j_max >= samples >= 1.
DensityReport density_estimate(const OmegaSet& s, std::uint64_t j_max,
                               std::uint64_t samples);

// A^m_j = 2^(m+j+1) + 2^(m+j+2)·omega for j < j_count.
std::vector<OmegaSet> partition_dyadic(std::uint64_t m, std::uint64_t j_count);
OmegaSet dyadic_part(std::uint64_t m, std::uint64_t j);

// CLI micro-syntax: "a+qw", "(w+1)", "k*(w+1)", "w", "{1,2,3}", joined by "|".
OmegaSet parse_omega_set(const std::string& text);

}  // namespace microcover
