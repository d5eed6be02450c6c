#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "microcover/cover_attempt.hpp"
#include "microcover/spacing.hpp"

namespace microcover {

struct DisjointnessCheck {
  std::uint64_t a = 0;
  std::uint64_t d = 0;
  bool disjoint = false;
};

struct Witness {
  std::uint64_t a = 0;
  Interval interval{Rational(0), Rational(0)};
  // One entry per stored J_d with d < a.
  std::vector<DisjointnessCheck> checks;
  std::uint64_t candidates_scanned = 0;
};

// Least candidate (in the given increasing order of a) whose interval misses
// every stored J_d with d < a. Only candidates with a <= window_end + 1 can be
// certified; if none qualifies, throws WindowInsufficientError.
Witness find_witness(const std::vector<std::pair<std::uint64_t, Interval>>& candidates,
                     const CoverAttempt& cover);

// Re-checks every fact of a witness by direct interval comparison.
bool replay_witness(const Witness& w, const CoverAttempt& cover);

struct CorollaryWitness {
  Witness witness;
  // Window lower-density estimate of D against the threshold d(A)/4.
  Rational d_lower_estimate;
  Rational threshold;
  bool hypothesis_met = false;
};

// Requires a valid cover with D ⊂ omega \ m. The density hypothesis is
// recorded, not enforced.
CorollaryWitness corollary_witness(const PlacedFamily& placed, const CoverAttempt& cover);

// Admissible prefix sizes: card(D ∩ (j+1)) <= allowed(j).
struct Budget {
  enum class Kind { kUnbounded, kSqrt, kFraction };
  Kind kind = Kind::kUnbounded;
  Rational fraction = Rational(1);  // kFraction: floor((j+1)·fraction) + offset
  std::int64_t offset = 0;

  static Budget unbounded() { return {}; }
  static Budget sqrt() { return {Kind::kSqrt, Rational(1), 0}; }
  static Budget linear(Rational fraction, std::int64_t offset = 0) {
    return {Kind::kFraction, std::move(fraction), offset};
  }
  // "unbounded", "sqrt", "p/q" or "p/q+c".
  static Budget parse(const std::string& text);

  std::uint64_t allowed(std::uint64_t j) const;
  std::string to_string() const;
};

enum class AdversaryStrategy {
  // Every budgeted index; J_d centered on the longest target not yet hit
  // whose index exceeds d.
  kGreedyHit,
  // Every budgeted index; J_d placed by a mixed random policy.
  kDensityBudget,
  // Budgeted indices kept with include_probability; mixed random placement.
  kRandom,
};

std::string to_string(AdversaryStrategy s);
AdversaryStrategy parse_strategy(const std::string& text);

struct AdversaryParams {
  AdversaryStrategy strategy = AdversaryStrategy::kGreedyHit;
  std::uint64_t window_end = 0;
  std::uint64_t min_index = 0;
  Constraint constraint;
  Budget budget;
  // Intervals the adversary tries to hit, in increasing index order.
  std::vector<std::pair<std::uint64_t, Interval>> targets;
  // Where unaimed intervals land.
  Interval region{Rational(0), Rational(1)};
  // Optional hierarchy: mixed placement may then swallow a whole node.
  std::shared_ptr<const SpacingTree> tree;
  Rational include_probability = Rational(1, 2);
};

// Largest admissible |J_d| for the constraint family.
Rational max_length(const Constraint& c, std::uint64_t d);

// Deterministic in (params, seed); the result always validates.
CoverAttempt adversary_generate(const AdversaryParams& params, std::uint64_t seed);

}  // namespace microcover
