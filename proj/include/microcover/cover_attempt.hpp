#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "microcover/interval.hpp"
#include "microcover/omega_set.hpp"

namespace microcover {

enum class ConstraintKind { kGeometric, kLogarithmic };

// Geometric:   |J_d| <= eps^(d+1)
// Logarithmic: |J_d| <= eps^(ln(d+2))
struct Constraint {
  ConstraintKind kind = ConstraintKind::kGeometric;
  Rational eps = Rational(1, 7);

  static Constraint geometric(Rational eps) {
    return {ConstraintKind::kGeometric, std::move(eps)};
  }
  static Constraint logarithmic(Rational eps) {
    return {ConstraintKind::kLogarithmic, std::move(eps)};
  }

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

// Indexed interval sequence (J_d) over a finite window of its index set D.
// Indices of D inside the window with no stored interval stand for J_d = ∅;
// indices beyond window_end are unknown and never treated as present.
class CoverAttempt {
 public:
  CoverAttempt(OmegaSet index_set, Constraint constraint, std::uint64_t window_end,
               std::map<std::uint64_t, Interval> intervals);

  const OmegaSet& index_set() const { return index_set_; }
  const Constraint& constraint() const { return constraint_; }
  std::uint64_t window_end() const { return window_end_; }
  const std::map<std::uint64_t, Interval>& intervals() const { return intervals_; }

  const Interval* find(std::uint64_t d) const;

 private:
  OmegaSet index_set_;
  Constraint constraint_;
  std::uint64_t window_end_;
  std::map<std::uint64_t, Interval> intervals_;
};

enum class ValidationStatus { kOk, kViolation, kIndeterminate };

struct ValidationReport {
  std::map<std::uint64_t, ValidationStatus> status;
  // Largest working precision any logarithmic comparison needed (0 if none).
  unsigned precision_bits = 0;
  unsigned precision_cap = 0;

  bool all_ok() const;
  bool any_indeterminate() const;
  std::vector<std::uint64_t> with_status(ValidationStatus s) const;
};

ValidationReport validate(const CoverAttempt& cover, unsigned precision_cap = 256);

// Decides |J| <= eps^(ln(d+2)) with directed rounding, doubling the working
// precision from 64 bits up to `precision_cap`. Needs 0 < eps < 1.
ValidationStatus check_logarithmic_bound(const Rational& length, std::uint64_t d,
                                         const Rational& eps, unsigned precision_cap,
                                         unsigned* bits_used = nullptr);

// Smallest integer e >= ln(n), certified with directed rounding.
std::uint64_t ceil_log(std::uint64_t n);

struct RegionCoverage {
  bool covered = true;
  // Leftmost maximal uncovered piece of the region (closure), if any.
  std::optional<Interval> uncovered;
};

// Region intervals must be pairwise disjoint.
RegionCoverage covers_region(const CoverAttempt& cover, const std::vector<Interval>& region);

}  // namespace microcover
