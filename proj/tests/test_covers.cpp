#include <gtest/gtest.h>

#include "microcover/covers.hpp"
#include "microcover/errors.hpp"
#include "microcover/rng.hpp"
#include "oracles.hpp"

namespace microcover {
namespace {

Rational q(std::int64_t n, std::int64_t d = 1) { return Rational(n, d); }

std::shared_ptr<const SpacingTree> unit_tree(std::uint32_t depth) {
  return std::make_shared<const SpacingTree>(build_k_hierarchy(Interval(q(0), q(1)), 0, depth));
}

PlacedFamily omega_plus_one(std::uint32_t depth) {
  auto tree = unit_tree(depth);
  return place_intervals(tree, parse_omega_set("(w+1)"), tree->terminal_count());
}

oracle::Family family_of(const PlacedFamily& p) {
  oracle::Family out;
  for (const auto& pl : p.placements()) out.emplace_back(pl.a, pl.interval);
  return out;
}

AdversaryParams params_for(const PlacedFamily& p, AdversaryStrategy s, Budget b,
                           std::uint64_t window) {
  AdversaryParams params;
  params.strategy = s;
  params.window_end = window;
  params.budget = b;
  params.targets = p.keyed(window + 1);
  params.tree = p.tree_ptr();
  return params;
}

TEST(Budget, Values) {
  EXPECT_EQ(Budget::sqrt().allowed(0), 0u);
  EXPECT_EQ(Budget::sqrt().allowed(3), 1u);
  EXPECT_EQ(Budget::sqrt().allowed(4), 2u);
  EXPECT_EQ(Budget::linear(q(1, 5)).allowed(9), 2u);
  EXPECT_EQ(Budget::parse("1/5+2").allowed(9), 4u);
  EXPECT_EQ(Budget::unbounded().allowed(7), 8u);
  EXPECT_THROW(Budget::parse("lots"), PreconditionError);
}

TEST(CorollaryWitness, EmptyCover) {
  const auto p = omega_plus_one(3);
  const CoverAttempt c(OmegaSet::empty(), Constraint::geometric(q(1, 7)), 100, {});
  const auto w = corollary_witness(p, c);
  EXPECT_EQ(w.witness.a, 1u);
  EXPECT_TRUE(w.witness.checks.empty());
  EXPECT_TRUE(w.hypothesis_met);
  EXPECT_EQ(w.threshold, q(1, 4));
}

TEST(CorollaryWitness, SquaresGreedyMatchesBruteForce) {
  const auto p = omega_plus_one(5);
  const auto c = adversary_generate(
      params_for(p, AdversaryStrategy::kGreedyHit, Budget::sqrt(), 300), 17);
  std::set<std::uint64_t> squares;
  for (std::uint64_t i = 1; i * i <= 300; ++i) squares.insert(i * i);
  EXPECT_EQ(c.index_set().finite_part(), squares);
  ASSERT_TRUE(validate(c).all_ok());
  const auto w = corollary_witness(p, c);
  const auto brute = oracle::least_witness(family_of(p), c.intervals());
  ASSERT_TRUE(brute.has_value());
  EXPECT_EQ(w.witness.a, *brute);
  EXPECT_TRUE(replay_witness(w.witness, c));
  EXPECT_TRUE(w.hypothesis_met);
}

TEST(CorollaryWitness, DenseStartPushesWitnessOut) {
  // Budget (j+1)/4 + 3 lets the greedy adversary kill I_1, ..., I_4 first.
  const auto p = omega_plus_one(5);
  const auto c = adversary_generate(
      params_for(p, AdversaryStrategy::kGreedyHit, Budget::linear(q(1, 4), 3), 300), 1);
  const auto w = corollary_witness(p, c);
  EXPECT_GT(w.witness.a, 4u);
  EXPECT_EQ(w.witness.a, *oracle::least_witness(family_of(p), c.intervals()));
  EXPECT_EQ(w.witness.checks.size(), c.index_set().count_prefix(w.witness.a - 1));
  EXPECT_TRUE(replay_witness(w.witness, c));
}

TEST(CorollaryWitness, Preconditions) {
  auto tree = std::make_shared<const SpacingTree>(
      build_k_hierarchy(Interval(q(0), q(1, 49)), 2, 2));
  const auto p = place_intervals(tree, parse_omega_set("3+w"), 13);
  const CoverAttempt low(OmegaSet::all(), Constraint::geometric(q(1, 7)), 10, {});
  EXPECT_THROW(corollary_witness(p, low), PreconditionError);
  const CoverAttempt bad(OmegaSet::progression(2, 1), Constraint::geometric(q(1, 7)), 10,
                         {{2, Interval(q(0), q(1, 7))}});
  EXPECT_THROW(corollary_witness(p, bad), PreconditionError);
}

TEST(CorollaryWitness, WindowInsufficient) {
  // Kill every placed interval up to the window with its own point.
  const auto p = omega_plus_one(2);
  std::map<std::uint64_t, Interval> js;
  for (const auto& pl : p.placements()) {
    if (pl.a >= 1) js.emplace(pl.a - 1, Interval(pl.interval.lo(), pl.interval.lo()));
  }
  const CoverAttempt c(OmegaSet::all(), Constraint::geometric(q(1, 7)), 12, js);
  EXPECT_THROW(corollary_witness(p, c), WindowInsufficientError);
}

TEST(Adversary, SqrtBudgetDensityVanishes) {
  const auto p = omega_plus_one(4);
  const auto c = adversary_generate(
      params_for(p, AdversaryStrategy::kDensityBudget, Budget::sqrt(), 40000), 3);
  const auto report = density_estimate(c.index_set(), 40000, 16);
  EXPECT_LE(report.upper_estimate, q(1, 100));
}

TEST(Adversary, Deterministic) {
  const auto p = omega_plus_one(3);
  for (auto s : {AdversaryStrategy::kGreedyHit, AdversaryStrategy::kDensityBudget,
                 AdversaryStrategy::kRandom}) {
    const auto params = params_for(p, s, Budget::linear(q(1, 5)), 200);
    const auto a = adversary_generate(params, 99);
    const auto b = adversary_generate(params, 99);
    EXPECT_EQ(a.intervals(), b.intervals());
    EXPECT_EQ(a.index_set(), b.index_set());
  }
}

TEST(Adversary, GreedyHitsSomething) {
  const auto p = omega_plus_one(3);
  const auto c = adversary_generate(
      params_for(p, AdversaryStrategy::kGreedyHit, Budget::unbounded(), 60), 5);
  EXPECT_EQ(c.intervals().size(), 61u);
  for (const auto& [d, j] : c.intervals()) {
    ASSERT_TRUE(p.geometry().any_meeting(j)) << d;
  }
}

TEST(AdversaryProperties, BudgetAndValidity) {
  const auto p = omega_plus_one(3);
  Rng meta(2024);
  const std::vector<Budget> budgets = {Budget::sqrt(), Budget::linear(q(1, 3)),
                                       Budget::linear(q(1, 10), 2), Budget::unbounded()};
  for (int trial = 0; trial < 60; ++trial) {
    const Budget b = budgets[trial % budgets.size()];
    auto params = params_for(p, static_cast<AdversaryStrategy>(trial % 3), b, 150);
    if (trial % 2) params.constraint = Constraint::logarithmic(q(1, 7));
    params.min_index = meta.below(3);
    const auto c = adversary_generate(params, meta.next());
    ASSERT_TRUE(validate(c).all_ok()) << trial;
    for (std::uint64_t j = 0; j <= 150; ++j) {
      ASSERT_LE(c.index_set().count_prefix(j), b.allowed(j));
    }
    if (c.index_set().min_element()) ASSERT_GE(*c.index_set().min_element(), params.min_index);
  }
}

// Counting lemma: where D has fewer members than Y up to j, some a in
// Y ∩ (j+1) is missed by every J_d with d <= j.
TEST(CoversProperties, CountingLemma) {
  const auto p = omega_plus_one(4);
  Rng meta(77);
  int applications = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const auto c = adversary_generate(
        params_for(p, static_cast<AdversaryStrategy>(trial % 3), Budget::linear(q(1, 4)), 120),
        meta.next());
    const auto y = compute_Y(p, c, 120);
    for (std::uint64_t j = 1; j <= 120; ++j) {
      std::uint64_t y_count = 0;
      for (auto a : y) y_count += a <= j;
      if (c.index_set().count_prefix(j) >= y_count) continue;
      ++applications;
      bool found = false;
      for (auto a : y) {
        if (a > j) break;
        bool missed = true;
        for (const auto& [d, jd] : c.intervals()) {
          if (d <= j && oracle::meets(p.find(a)->interval, jd)) missed = false;
        }
        found = found || missed;
      }
      ASSERT_TRUE(found) << "trial " << trial << " j " << j;
    }
  }
  EXPECT_GT(applications, 100);
}

TEST(CoversProperties, WitnessMatchesBruteForce) {
  const auto p = omega_plus_one(4);
  Rng meta(8);
  for (int trial = 0; trial < 40; ++trial) {
    const auto c = adversary_generate(
        params_for(p, static_cast<AdversaryStrategy>(trial % 3), Budget::linear(q(1, 6)), 120),
        meta.next());
    const auto brute = oracle::least_witness(family_of(p), c.intervals());
    ASSERT_TRUE(brute.has_value());
    const auto w = corollary_witness(p, c);
    ASSERT_EQ(w.witness.a, *brute);
    ASSERT_TRUE(replay_witness(w.witness, c));
  }
}

}  // namespace
}  // namespace microcover
