#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "microcover/cover_attempt.hpp"
#include "microcover/digits.hpp"
#include "microcover/interval.hpp"
#include "microcover/interval_index.hpp"
#include "microcover/omega_set.hpp"

namespace microcover {

// K^level_index in the spacing hierarchy.
struct NodeId {
  std::uint32_t level = 0;
  std::uint64_t index = 0;

  friend bool operator==(const NodeId&, const NodeId&) = default;
};

std::uint64_t pow3(std::uint32_t e);
// Nodes per level: 4·3^level.
std::uint64_t level_size(std::uint32_t level);
// Childless members: 3·3^i <= j < 4·3^i.
bool is_terminal(const NodeId& node);
// t_n = 3^0 + ... + 3^n - 1 = (3^(n+1) - 3) / 2.
std::uint64_t block_start(std::uint32_t n);
// Index of the ancestor of `node` at `level` (node.level >= level).
std::uint64_t ancestor_index(const NodeId& node, std::uint32_t level);

// The K-hierarchy over a root interval of length 7^-m.
//
// Inside each non-terminal parent K^(k-1)_l the four children sit left to
// right at indices l, 2·3^k + l, 3·3^k + l, 3^k + l, with gaps equal to the
// child length. The terminal child is therefore always the third one.
class SpacingTree {
 public:
  const Interval& root() const { return root_; }
  std::uint64_t base_exponent() const { return m_; }
  std::uint32_t depth() const { return depth_; }

  const std::vector<Interval>& level(std::uint32_t i) const { return levels_.at(i); }
  const Interval& node(const NodeId& id) const { return levels_.at(id.level).at(id.index); }

  // Number of terminals on levels 0..depth, i.e. t_depth + 1.
  std::uint64_t terminal_count() const { return block_start(depth_) + 1; }
  // i-th terminal of the enumeration (by non-increasing length, then index).
  NodeId terminal(std::uint64_t i) const;

 private:
  friend SpacingTree build_k_hierarchy(const Interval&, std::uint64_t, std::uint32_t);
  SpacingTree(Interval root, std::uint64_t m, std::uint32_t depth)
      : root_(std::move(root)), m_(m), depth_(depth) {}

  Interval root_;
  std::uint64_t m_;
  std::uint32_t depth_;
  std::vector<std::vector<Interval>> levels_;
};

// Requires length(root) == 7^-m.
SpacingTree build_k_hierarchy(const Interval& root, std::uint64_t m, std::uint32_t depth);

std::vector<Interval> terminal_enumeration(const SpacingTree& tree);

struct Placement {
  std::uint64_t a = 0;
  NodeId terminal;
  Interval interval;
};

struct BlockIndex {
  std::uint32_t n = 0;
  std::uint64_t t_n = 0;
  std::vector<std::uint64_t> members;  // L_n = {a_(t_n + 1), ..., a_(t_(n+1))}
};

// Intervals I_(a_i) of length 7^-(a_i), left-anchored in the i-th terminal.
class PlacedFamily {
 public:
  PlacedFamily(std::shared_ptr<const SpacingTree> tree, OmegaSet index_set,
               std::vector<Placement> placements);

  const SpacingTree& tree() const { return *tree_; }
  std::shared_ptr<const SpacingTree> tree_ptr() const { return tree_; }
  const OmegaSet& index_set() const { return index_set_; }
  const std::vector<Placement>& placements() const { return placements_; }
  const DisjointIntervalIndex& geometry() const { return geometry_; }

  const Placement* find(std::uint64_t a) const;
  std::uint64_t max_index() const { return placements_.back().a; }

  // Blocks L_0 .. L_(complete_blocks() - 1) are fully placed.
  std::uint32_t complete_blocks() const;
  BlockIndex block(std::uint32_t n) const;
  // n with a ∈ L_n; nullopt for a_0.
  std::optional<std::uint32_t> block_of(std::uint64_t a) const;

  // {a : I_a ⊂ node}.
  std::vector<std::uint64_t> members_inside(const NodeId& node) const;

  // Placements with a <= window.
  std::vector<std::pair<std::uint64_t, Interval>> keyed(std::uint64_t window) const;

 private:
  std::shared_ptr<const SpacingTree> tree_;
  OmegaSet index_set_;
  std::vector<Placement> placements_;
  DisjointIntervalIndex geometry_;
};

// Requires min A > m and tree.terminal_count() >= count.
PlacedFamily place_intervals(std::shared_ptr<const SpacingTree> tree, const OmegaSet& A,
                             std::size_t count);
PlacedFamily place_intervals(const SpacingTree& tree, const OmegaSet& A, std::size_t count);

// {a : every J_d meeting I_a meets no other placed interval}, over a <= window
// and d <= window.
std::set<std::uint64_t> compute_Y(const PlacedFamily& placed, const CoverAttempt& cover,
                                  std::uint64_t window);

// A translation r together with the base-7 prefix that stands in for it.
// Shifts at or beyond 7^-m carry no digits: they cannot reach the root.
struct Shift {
  Rational value;
  std::optional<Digit7Stream> digits;
};

Shift make_shift(const Rational& r, std::uint64_t m, std::size_t prefix_length);

// Y members whose hitting J_d also miss every r_i + I_(a').
// Throws PrefixExhaustedError when a shift inside (0, 7^-m) carries fewer
// digits than the materialized depth of the tree.
std::set<std::uint64_t> compute_Z(const PlacedFamily& placed, const CoverAttempt& cover,
                                  const std::vector<Shift>& shifts, std::uint64_t window);

struct QSequence {
  std::vector<std::size_t> positions;
  bool exhausted = false;  // the prefix ran out before `how_many` positions
};

// q(0) is the first nonzero digit; after an odd digit the next position is
// the first later digit != 6, after an even digit the first later digit != 0.
QSequence q_sequence(const Digit7Stream& r, std::size_t how_many);

struct DiagnosticsOptions {
  Rational delta = Rational(1, 2);
  std::optional<std::uint64_t> k;  // overrides the choice derived from delta
};

struct Step1Check {
  std::uint64_t d = 0;
  std::uint32_t level = 0;  // d - m
  std::uint64_t met = 0;    // members of L_n met by J_d
  std::uint64_t bound = 0;  // 3^(n - level)
  bool ok = false;
};

struct BTally {
  std::size_t shift = 0;
  std::uint64_t j = 0;
  std::uint64_t p = 0;  // p(i, j), a level of the hierarchy
  // 0: B^0_0 or a first q position; 1: previous digit even (slot-0 nodes);
  // 2: previous digit odd (slot-3 nodes).
  int case_kind = 0;
  // Step 2 states "p(i,j) != 0" / "p(i,j) != 6". Both readings are reported:
  // as a statement about the index p, and about the digit r_(i, p).
  bool index_reading = false;
  bool digit_reading = false;
  bool applicable = false;  // p <= n
  std::uint64_t count = 0;
  bool nodes_disjoint_from_shift = false;
};

struct StepReport {
  std::uint32_t n = 0;
  std::uint64_t t_n = 0;
  std::uint64_t block_size = 0;

  std::uint64_t y_count = 0;
  std::uint64_t z_count = 0;
  Rational y_fraction;
  Rational z_fraction;

  bool step1_bound_holds = false;  // y_count >= ceil(block_size / 2)
  std::vector<Step1Check> step1_small;
  std::uint64_t step1_small_sum = 0;
  bool step1_small_sum_below_half = false;
  std::uint64_t step1_large_max_met = 0;
  bool step1_large_ok = true;

  std::vector<std::size_t> nontrivial_shifts;
  std::int64_t s = -1;
  Rational delta;
  std::uint64_t k = 0;
  Rational alpha;
  Rational alpha_pow_s;
  Rational alpha_pow_s_plus_1;
  std::vector<std::vector<std::uint64_t>> p;
  std::uint64_t p_max = 0;
  std::uint64_t p_prime = 0;
  std::vector<BTally> tallies;
  bool b_applicable = false;
  std::uint64_t b_count = 0;
  Rational b_fraction;
  bool b_fraction_matches_alpha = false;
  std::uint64_t a_prime_count = 0;
  bool b_subset_a_prime = false;

  std::vector<std::uint64_t> F;
  std::uint64_t N = 0;
  bool step3_applicable = false;
  bool step3_inclusion = false;
};

// Requires block n to be placed and D ⊂ omega \ m.
StepReport step_diagnostics(const PlacedFamily& placed, const CoverAttempt& cover,
                            const std::vector<Shift>& shifts, std::uint32_t n,
                            const DiagnosticsOptions& options = {});

}  // namespace microcover
