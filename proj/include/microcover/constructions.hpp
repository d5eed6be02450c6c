#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "microcover/cover_attempt.hpp"
#include "microcover/covers.hpp"
#include "microcover/digits.hpp"
#include "microcover/spacing.hpp"

namespace microcover {

// ---------------------------------------------------------------------------
// The nested set X, truncated to finitely many levels and indices.

struct XNode {
  std::uint64_t j = 0;
  Interval interval{Rational(0), Rational(0)};
  // Index of the enclosing interval one level up; 0 stands for [0, 1].
  std::uint64_t parent = 0;
};

// What the truncation leaves out of one level.
struct TruncationRecord {
  std::uint32_t level = 0;
  // Least index of 2^level·(omega+1) beyond the cutoff.
  std::uint64_t first_missing = 0;
  // Total length of all missing intervals of the level is at most this.
  Rational missing_mass_bound;
  // Materialized parents one level up whose children all lie past the cutoff.
  std::vector<std::uint64_t> childless_parents;
};

class MicroXApprox {
 public:
  std::uint32_t depth() const { return static_cast<std::uint32_t>(levels_.size() - 1); }
  std::uint64_t cutoff() const { return cutoff_; }

  // I^i_j for j in 2^i·(omega+1), j <= cutoff.
  const std::map<std::uint64_t, XNode>& level(std::uint32_t i) const { return levels_.at(i); }
  const XNode* find(std::uint32_t i, std::uint64_t j) const;
  // The truncated X_i, ordered left to right.
  std::vector<Interval> region(std::uint32_t i) const;

  // Spacing instance that produced the children of I^(level-1)_parent at
  // `level` (parent 0 with level 0 is [0, 1]); null if it has none.
  std::shared_ptr<const PlacedFamily> family(std::uint32_t level, std::uint64_t parent) const;

  const std::vector<TruncationRecord>& truncation() const { return truncation_; }

 private:
  friend MicroXApprox build_X(std::uint32_t, std::uint64_t, unsigned);

  std::uint64_t cutoff_ = 0;
  std::vector<std::map<std::uint64_t, XNode>> levels_;
  std::map<std::pair<std::uint32_t, std::uint64_t>, std::shared_ptr<const PlacedFamily>> families_;
  std::vector<TruncationRecord> truncation_;
};

// Requires cutoff >= 2^depth so that every level is nonempty.
MicroXApprox build_X(std::uint32_t depth, std::uint64_t cutoff, unsigned threads = 1);

struct MicroscopicCheck {
  std::uint32_t level = 0;
  CoverAttempt cover{OmegaSet::empty(), Constraint{}, 0, {}};
  ValidationReport validation;
  RegionCoverage coverage;
};

// The cover J_j = I^level_(2^level·(j+1)) of X_level. Requires 7^-(2^level) < eps_prime.
MicroscopicCheck verify_microscopic(const MicroXApprox& x, const Rational& eps_prime,
                                    std::uint32_t level);

struct LevelTelemetry {
  std::uint32_t n = 0;
  std::uint64_t candidates = 0;
  // d(A)/4 for the index set searched at this level.
  Rational threshold;
  Rational d_lower_estimate;
  bool hypothesis_met = false;
};

struct ChainLink {
  std::uint32_t n = 0;
  std::uint64_t j = 0;
  Interval interval{Rational(0), Rational(0)};
  Witness certificate;
};

struct WitnessChain {
  std::vector<ChainLink> links;
  std::vector<LevelTelemetry> telemetry;
};

struct ChainOutcome {
  WitnessChain chain;  // the levels that succeeded
  bool complete = false;
  std::optional<std::uint32_t> failed_level;
  std::string message;
};

// Least witnesses level by level: j_0 over (omega+1), then j_(n+1) over the
// children A^n_(j_n/2^n - 1) of I^n_(j_n). Requires |J_d| <= 7^-(d+1).
ChainOutcome try_extract_uncovered_point(const MicroXApprox& x, const CoverAttempt& cover,
                                         std::uint32_t target_depth);
// Same, throwing WindowInsufficientError (with the level) on failure.
WitnessChain extract_uncovered_point(const MicroXApprox& x, const CoverAttempt& cover,
                                     std::uint32_t target_depth);

// Every materialized I^i_j as an adversary target, ordered by j with deeper
// levels first so that ties go to the interval a chain would pick.
std::vector<std::pair<std::uint64_t, Interval>> chain_targets(const MicroXApprox& x);

// Nesting, membership j_(n+1) ∈ A^n_(j_n/2^n - 1) and every certificate.
bool replay_chain(const WitnessChain& chain, const MicroXApprox& x, const CoverAttempt& cover);

// ---------------------------------------------------------------------------
// Finite shift families over the children of one interval I^n_m.

struct ShiftRecord {
  Rational value;
  Digit7Stream digits{0, {0}, true};
  std::set<std::uint64_t> Y;
  std::set<std::uint64_t> Z;
  std::set<std::uint64_t> Z_prime;
  // a -> least k with J_k meeting r + I_a.
  std::map<std::uint64_t, std::uint64_t> phi;
  // Every r + I_a (a in window) meets some J_k with k < a.
  bool premise = false;
  std::vector<std::uint64_t> premise_failures;
  bool phi_well_defined = false;  // each a in Z meets exactly one J_k (measured)
  bool phi_injective = false;
  bool phi_bounded = false;       // phi(a) <= a
  Rational z_lower_estimate;
  Rational z_prime_lower_estimate;
};

struct ShiftPair {
  std::size_t i = 0;
  std::size_t j = 0;
  Digit7Stream difference_digits{0, {0}, true};
  bool non_degenerate = false;
  bool z_prime_disjoint = false;
};

struct ShiftExperiment {
  std::uint32_t n = 0;
  std::uint64_t m = 0;
  std::uint64_t window = 0;
  Rational density_A;
  std::vector<ShiftRecord> shifts;
  std::vector<ShiftPair> pairs;
  bool premise_holds = false;
  bool z_prime_pairwise_disjoint = false;
  bool phi_ok = false;  // injective and phi(a) <= a for every shift
  bool z_last_equals_y = false;

  // "verified", "premise-void" or "violated".
  std::string verdict() const;
};

// Shifts must be strictly increasing in (0, 1) with pairwise differences
// whose base-7 prefixes are non-degenerate. The cover must be known up to
// the window, which may not exceed the cutoff of x.
ShiftExperiment shift_family_experiment(const MicroXApprox& x, const std::vector<Rational>& shifts,
                                        const CoverAttempt& cover, std::uint32_t n, std::uint64_t m,
                                        std::uint64_t window, std::size_t prefix_length = 64,
                                        unsigned threads = 1);

// Non-degenerate: not exact and no run of 16 equal digits 0 or 6.
bool non_degenerate_prefix(const Digit7Stream& digits);

// An adversarial cover that makes the premise hold: every shifted child
// r_i + I_a gets its own J_k with a random free k < a, plus random noise.
CoverAttempt shift_target_cover(const MicroXApprox& x, const std::vector<Rational>& shifts,
                                std::uint32_t n, std::uint64_t m, std::uint64_t window,
                                std::uint64_t seed);

// ---------------------------------------------------------------------------
// Re-indexing transforms.

// Input: cover on D' with |J'_n| <= (eps^(k+2))^(n+1). Output: J_((k+1)(n+1)) = J'_n
// on D = (k+1)·(D'+1), validated under Geometric(eps).
CoverAttempt thin_reindex(const CoverAttempt& cover, std::uint64_t k, const Rational& eps);

struct UnionReindex {
  CoverAttempt cover{OmegaSet::empty(), Constraint{}, 0, {}};
  std::vector<OmegaSet> shifted_sets;  // D'_k = D_k - 2^k
  bool pairwise_disjoint = false;
  ValidationReport validation;
};

// covers[k] lives on D_k ⊂ 2^(k+1)·(omega+1). Output window is the least
// input window after the shift.
UnionReindex union_reindex_Mprime(const std::vector<CoverAttempt>& covers, const Rational& eps);

// Supplies a Logarithmic(eps_m) cover indexed by 0, ..., count - 1.
using LnCoverFactory = std::function<CoverAttempt(const Rational& eps_m, std::size_t count)>;
CoverAttempt canonical_ln_cover(const Rational& eps_m, std::size_t count);

struct LnAvoidResult {
  std::uint64_t k = 0;  // the 1/4 threshold holds for every j > k
  std::uint64_t m = 0;
  std::vector<std::uint64_t> t;
  OmegaSet E;
  CoverAttempt cover{OmegaSet::empty(), Constraint{}, 0, {}};
  // (i+2)^m <= 2(t_i+2) and t_i + 2 <= (i+2)^m for every i.
  bool sandwich_holds = false;
  // E is complete (no later t_i can land) up to here.
  std::uint64_t certified_window = 0;
  // (card(E ∩ (j+1)) + 1)^m <= 2(j+2) for every j <= certified_window.
  bool density_bound_holds = false;
  bool disjoint_from_D = false;
  ValidationReport validation;
};

// D must have density zero. m defaults to max(2, least m with 2^m > k).
LnAvoidResult reindex_ln_avoid(const LnCoverFactory& factory, const OmegaSet& D,
                               const Rational& eps, std::size_t count,
                               std::optional<std::uint64_t> m = std::nullopt);

struct DensityAvoidResult {
  std::uint64_t m = 0;
  std::vector<std::uint64_t> e;
  std::vector<std::uint64_t> t;
  OmegaSet F;
  CoverAttempt cover{OmegaSet::empty(), Constraint{}, 0, {}};
  // m(e_i+1) <= 2(t_i+1) and t_i + 1 <= m(e_i+1).
  bool sandwich_holds = false;
  std::uint64_t certified_window = 0;
  // card(F ∩ (j+1)) <= #{e in E : e < 2(j+1)/m} for every j <= certified_window.
  bool density_bound_holds = false;
  bool disjoint_from_D = false;
  ValidationReport validation;
};

// Input cover on E with |I_e| <= eps^(m(e+1)); m even, m >= 4; the ratio
// card(D ∩ (j+1))/(j+1) must stay below 1/4 for m <= j <= m(max e + 1).
DensityAvoidResult reindex_density_avoid(const CoverAttempt& m_cover, const OmegaSet& D,
                                         const Rational& eps, std::uint64_t m);

}  // namespace microcover
