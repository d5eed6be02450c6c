#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "microcover/errors.hpp"
#include "microcover/omega_set.hpp"
#include "oracles.hpp"

namespace microcover {
namespace {

TEST(OmegaSet, CountPrefixExamples) {
  EXPECT_EQ(count_prefix(OmegaSet::progression(2, 2), 10), 5u);
  EXPECT_EQ(count_prefix(OmegaSet::empty(), 12345), 0u);
  EXPECT_EQ(count_prefix(dyadic_part(0, 0), 13), 3u);
}

TEST(OmegaSet, DensityExactExamples) {
  EXPECT_EQ(density_exact(OmegaSet::multiples(2)), Rational(1, 2));
  EXPECT_EQ(density_exact(OmegaSet::finite({1, 5, 9})), Rational(0));
  EXPECT_EQ(density_exact(OmegaSet::progression(4, 8)), Rational(1, 8));
  // Overlapping progressions are normalized before counting.
  const OmegaSet overlap({}, {{0, 2}, {0, 3}});
  EXPECT_EQ(density_exact(overlap), Rational(2, 3));
}

TEST(OmegaSet, DensityEstimateExamples) {
  const auto evens = density_estimate(OmegaSet::progression(2, 2), 100000, 50);
  EXPECT_LE((evens.lower_estimate - Rational(1, 2)).abs(), Rational(1, 1000));
  EXPECT_LE((evens.upper_estimate - Rational(1, 2)).abs(), Rational(1, 1000));
  ASSERT_TRUE(evens.exact_density.has_value());

  const auto all = density_estimate(OmegaSet::all(), 1000, 10);
  EXPECT_EQ(all.lower_estimate, Rational(1));
  EXPECT_EQ(all.upper_estimate, Rational(1));

  std::set<std::uint64_t> squares;
  for (std::uint64_t i = 0; i * i <= 10000; ++i) squares.insert(i * i);
  const auto sq = density_estimate(OmegaSet::finite(squares), 10000, 20);
  EXPECT_LE(sq.upper_estimate, Rational(1, 50));
  EXPECT_LE(sq.lower_estimate, sq.upper_estimate);

  EXPECT_THROW(density_estimate(OmegaSet::all(), 3, 5), PreconditionError);
}

TEST(OmegaSet, DyadicPartition) {
  const auto parts = partition_dyadic(0, 3);
  EXPECT_EQ(parts[0].elements_up_to(14), (std::vector<std::uint64_t>{2, 6, 10, 14}));
  EXPECT_EQ(parts[1].elements_up_to(20), (std::vector<std::uint64_t>{4, 12, 20}));
  EXPECT_EQ(parts[2].elements_up_to(40), (std::vector<std::uint64_t>{8, 24, 40}));
  for (std::uint64_t n = 0; n <= 10000; ++n) {
    ASSERT_FALSE(parts[0].contains(n) && parts[1].contains(n));
  }
  const auto twelve = partition_dyadic(0, 12);
  for (std::uint64_t n = 2; n <= 4096; n += 2) {
    int hits = 0;
    for (const auto& p : twelve) hits += p.contains(n) ? 1 : 0;
    ASSERT_EQ(hits, 1) << n;
  }
}

TEST(OmegaSet, DyadicDensities) {
  for (std::uint64_t m = 0; m <= 6; ++m) {
    Rational partial(0);
    for (std::uint64_t j = 0; j <= 6; ++j) {
      ASSERT_EQ(density_exact(dyadic_part(m, j)), Rational(1, 4).pow(1) * Rational(1, 2).pow(m + j));
      partial = partial + density_exact(dyadic_part(m, j));
      const Rational expected =
          Rational(1, 2).pow(m + 2) * (Rational(2) - Rational(1, 2).pow(j));
      ASSERT_EQ(partial, expected);
    }
  }
}

TEST(OmegaSet, ParseSyntax) {
  EXPECT_EQ(parse_omega_set("(w+1)").elements_up_to(4), (std::vector<std::uint64_t>{1, 2, 3, 4}));
  EXPECT_EQ(parse_omega_set("2+4w").elements_up_to(14), (std::vector<std::uint64_t>{2, 6, 10, 14}));
  EXPECT_EQ(parse_omega_set("3*(w+1)").elements_up_to(9), (std::vector<std::uint64_t>{3, 6, 9}));
  EXPECT_EQ(parse_omega_set("{1,5}|4+w").elements_up_to(6),
            (std::vector<std::uint64_t>{1, 4, 5, 6}));
  EXPECT_EQ(parse_omega_set("w").min_element(), 0u);
  EXPECT_THROW(parse_omega_set("2+0w"), PreconditionError);
  EXPECT_THROW(parse_omega_set("{1,2"), PreconditionError);
  EXPECT_THROW(parse_omega_set("banana"), PreconditionError);
}

TEST(OmegaSet, ShiftAndUnion) {
  const OmegaSet d0 = OmegaSet::multiples(2).shifted_down(1);
  EXPECT_EQ(d0.elements_up_to(7), (std::vector<std::uint64_t>{1, 3, 5, 7}));
  const OmegaSet d1 = OmegaSet::multiples(4).shifted_down(2);
  const OmegaSet u = d0.united(d1);
  EXPECT_EQ(density_exact(u), Rational(3, 4));
  EXPECT_THROW(OmegaSet::finite({0}).shifted_down(1), PreconditionError);
}

OmegaSet random_set(std::mt19937_64& rng) {
  std::set<std::uint64_t> finite;
  std::vector<Progression> progs;
  std::set<std::uint64_t> excluded;
  const int np = static_cast<int>(rng() % 4);
  for (int i = 0; i < np; ++i) progs.push_back({rng() % 40, 1 + rng() % 12});
  const int nf = static_cast<int>(rng() % 6);
  for (int i = 0; i < nf; ++i) finite.insert(rng() % 100);
  const int ne = static_cast<int>(rng() % 4);
  for (int i = 0; i < ne; ++i) {
    const std::uint64_t e = rng() % 100;
    if (!finite.count(e)) excluded.insert(e);
  }
  return OmegaSet(finite, progs, excluded);
}

// The residue-table fast path agrees with literal membership everywhere.
TEST(OmegaSetProperties, CountAgainstOracle) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const OmegaSet s = random_set(rng);
    std::uint64_t running = 0;
    for (std::uint64_t j = 0; j <= 400; ++j) {
      ASSERT_EQ(s.contains(j), oracle::member(s, j));
      running += oracle::member(s, j) ? 1 : 0;
      ASSERT_EQ(s.count_prefix(j), running) << "trial " << trial << " j " << j;
    }
  }
}

TEST(OmegaSetProperties, DensityErrorBound) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const OmegaSet s = random_set(rng);
    std::uint64_t max_start = 0;
    for (const auto& p : s.progressions()) max_start = std::max(max_start, p.start);
    const Rational c(static_cast<std::int64_t>(s.progressions().size() + s.finite_part().size() +
                                               s.excluded().size() + max_start));
    const Rational d = density_exact(s);
    for (std::uint64_t j = 0; j < 3000; j += 37) {
      const Rational ratio(static_cast<std::int64_t>(s.count_prefix(j)),
                           static_cast<std::int64_t>(j + 1));
      ASSERT_LE((ratio - d).abs(), c / Rational(static_cast<std::int64_t>(j + 1)))
          << "trial " << trial << " j " << j;
    }
  }
}

TEST(OmegaSetProperties, MonotoneAndSubadditive) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const OmegaSet a = random_set(rng), b = random_set(rng);
    const OmegaSet u = a.united(b);
    std::uint64_t prev = 0;
    for (std::uint64_t j = 0; j < 500; ++j) {
      ASSERT_GE(u.count_prefix(j), prev);
      prev = u.count_prefix(j);
      ASSERT_LE(u.count_prefix(j), a.count_prefix(j) + b.count_prefix(j));
      ASSERT_EQ(u.contains(j), a.contains(j) || b.contains(j));
    }
  }
}

TEST(OmegaSetProperties, FirstElementsMatchScan) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const OmegaSet s = random_set(rng);
    if (s.is_finite()) continue;
    const auto first = s.first_elements(50);
    std::vector<std::uint64_t> scan;
    for (std::uint64_t n = 0; scan.size() < 50; ++n) {
      if (oracle::member(s, n)) scan.push_back(n);
    }
    ASSERT_EQ(first, scan);
  }
}

}  // namespace
}  // namespace microcover
