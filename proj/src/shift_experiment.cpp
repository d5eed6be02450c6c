#include <algorithm>

#include "microcover/constructions.hpp"
#include "microcover/errors.hpp"
#include "microcover/parallel.hpp"
#include "microcover/rng.hpp"

namespace microcover {

namespace {

std::uint64_t leading_exponent(const Rational& diff) {
  std::uint64_t e = 0;
  while (diff < Rational::inverse_power_of_seven(e + 1)) ++e;
  return e;
}

Rational lower_ratio(const std::set<std::uint64_t>& s, std::uint64_t window) {
  if (window == 0) return Rational(0);
  const OmegaSet set = OmegaSet::finite(s);
  return density_estimate(set, window, std::min<std::uint64_t>(window, 32)).lower_estimate;
}

std::shared_ptr<const PlacedFamily> children_of(const MicroXApprox& x, std::uint32_t n,
                                                std::uint64_t m) {
  if (n >= x.depth() || x.find(n, m) == nullptr) {
    throw PreconditionError("shifts: I^" + std::to_string(n) + "_" + std::to_string(m) +
                            " has no materialized children");
  }
  auto family = x.family(n + 1, m);
  if (!family) {
    throw PreconditionError("shifts: children of I^" + std::to_string(n) + "_" +
                            std::to_string(m) + " lie beyond the cutoff");
  }
  return family;
}

void check_shifts(const std::vector<Rational>& shifts) {
  if (shifts.empty()) throw PreconditionError("shifts: need at least one shift");
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    if (shifts[i].sign() <= 0 || !(shifts[i] < Rational(1))) {
      throw PreconditionError("shifts: " + shifts[i].to_string() + " is not in (0, 1)");
    }
    if (i > 0 && !(shifts[i - 1] < shifts[i])) {
      throw PreconditionError("shifts: values must be strictly increasing");
    }
  }
}

}  // namespace

bool non_degenerate_prefix(const Digit7Stream& digits) {
  if (digits.exact()) return false;
  int run_digit = -1;
  std::size_t run = 0;
  for (int d : digits.digits()) {
    run = d == run_digit ? run + 1 : 1;
    run_digit = d;
    if ((d == 0 || d == 6) && run >= 16) return false;
  }
  return true;
}

std::string ShiftExperiment::verdict() const {
  if (!premise_holds) return "premise-void";
  return z_prime_pairwise_disjoint && phi_ok ? "verified" : "violated";
}

ShiftExperiment shift_family_experiment(const MicroXApprox& x, const std::vector<Rational>& shifts,
                                        const CoverAttempt& cover, std::uint32_t n,
                                        std::uint64_t m, std::uint64_t window,
                                        std::size_t prefix_length, unsigned threads) {
  const auto family = children_of(x, n, m);
  check_shifts(shifts);
  if (window > x.cutoff()) {
    throw PreconditionError("shifts: window " + std::to_string(window) + " exceeds the cutoff " +
                            std::to_string(x.cutoff()));
  }
  if (cover.window_end() < window) {
    throw WindowInsufficientError("shifts: cover known only up to " +
                                      std::to_string(cover.window_end()),
                                  0);
  }

  ShiftExperiment e;
  e.n = n;
  e.m = m;
  e.window = window;
  e.density_A = density_exact(family->index_set());

  const std::size_t count = shifts.size();
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      const Rational diff = shifts[j] - shifts[i];
      ShiftPair p;
      p.i = i;
      p.j = j;
      p.difference_digits = digits_base7(diff, leading_exponent(diff), prefix_length);
      p.non_degenerate = non_degenerate_prefix(p.difference_digits);
      if (!p.non_degenerate) {
        throw PreconditionError("shifts: r_" + std::to_string(j) + " - r_" + std::to_string(i) +
                                " has a degenerate base-7 prefix");
      }
      e.pairs.push_back(std::move(p));
    }
  }

  const DisjointIntervalIndex index(family->keyed(window));
  std::vector<std::uint64_t> members;
  for (const auto& [a, iv] : index.items()) members.push_back(a);
  std::vector<std::pair<std::uint64_t, const Interval*>> js;
  for (const auto& [k, iv] : cover.intervals()) {
    if (k <= window) js.emplace_back(k, &iv);
  }

  // hits[i][t]: members a with r_i + I_a meeting the t-th stored J.
  std::vector<std::vector<std::vector<std::uint64_t>>> hits(count);
  parallel_for(count, threads, [&](std::size_t i) {
    hits[i].resize(js.size());
    for (std::size_t t = 0; t < js.size(); ++t) {
      hits[i][t] = index.keys_meeting_shifted(*js[t].second, shifts[i]);
    }
  });

  e.shifts.resize(count);
  parallel_for(count, threads, [&](std::size_t i) {
    ShiftRecord& rec = e.shifts[i];
    rec.value = shifts[i];
    rec.digits = digits_base7(shifts[i], 0, prefix_length);

    std::set<std::uint64_t> shared;
    std::map<std::uint64_t, std::vector<std::uint64_t>> meeting;  // a -> k's
    std::set<std::uint64_t> blocked;
    for (std::size_t t = 0; t < js.size(); ++t) {
      const auto& h = hits[i][t];
      if (h.size() >= 2) shared.insert(h.begin(), h.end());
      for (auto a : h) meeting[a].push_back(js[t].first);
      bool later = false;
      for (std::size_t j = i + 1; j < count && !later; ++j) later = !hits[j][t].empty();
      if (later) blocked.insert(h.begin(), h.end());
    }
    rec.premise = true;
    for (auto a : members) {
      if (!shared.count(a)) rec.Y.insert(a);
      const auto it = meeting.find(a);
      if (it == meeting.end() || it->second.front() >= a) {
        rec.premise = false;
        rec.premise_failures.push_back(a);
      }
    }
    for (auto a : rec.Y) {
      if (!blocked.count(a)) rec.Z.insert(a);
    }
    rec.phi_well_defined = true;
    rec.phi_bounded = true;
    std::set<std::uint64_t> images;
    rec.phi_injective = true;
    for (auto a : rec.Z) {
      const auto it = meeting.find(a);
      if (it == meeting.end()) continue;
      rec.Z_prime.insert(it->second.begin(), it->second.end());
      // Several J_k may meet the same r + I_a; phi takes the least.
      if (it->second.size() != 1) rec.phi_well_defined = false;
      const std::uint64_t k = it->second.front();
      rec.phi[a] = k;
      if (k > a) rec.phi_bounded = false;
      if (!images.insert(k).second) rec.phi_injective = false;
    }
    rec.z_lower_estimate = lower_ratio(rec.Z, window);
    rec.z_prime_lower_estimate = lower_ratio(rec.Z_prime, window);
  });

  e.premise_holds = true;
  e.phi_ok = true;
  for (const auto& rec : e.shifts) {
    e.premise_holds = e.premise_holds && rec.premise;
    e.phi_ok = e.phi_ok && rec.phi_injective && rec.phi_bounded;
  }
  e.z_prime_pairwise_disjoint = true;
  for (auto& p : e.pairs) {
    const auto& a = e.shifts[p.i].Z_prime;
    const auto& b = e.shifts[p.j].Z_prime;
    p.z_prime_disjoint = std::none_of(a.begin(), a.end(), [&](auto k) { return b.count(k); });
    e.z_prime_pairwise_disjoint = e.z_prime_pairwise_disjoint && p.z_prime_disjoint;
  }
  e.z_last_equals_y = e.shifts.back().Z == e.shifts.back().Y;
  return e;
}

CoverAttempt shift_target_cover(const MicroXApprox& x, const std::vector<Rational>& shifts,
                                std::uint32_t n, std::uint64_t m, std::uint64_t window,
                                std::uint64_t seed) {
  const auto family = children_of(x, n, m);
  check_shifts(shifts);
  Rng rng(derive_seed(seed, 7));

  std::vector<std::pair<std::uint64_t, std::size_t>> targets;  // (a, shift)
  for (const auto& [a, iv] : family->keyed(window)) {
    for (std::size_t i = 0; i < shifts.size(); ++i) targets.emplace_back(a, i);
  }
  std::vector<bool> used(window + 1, false);
  std::map<std::uint64_t, Interval> js;
  for (const auto& [a, i] : targets) {
    const std::uint64_t start = rng.below(a);
    std::optional<std::uint64_t> k;
    for (std::uint64_t c = 0; c < a && !k; ++c) {
      const std::uint64_t cand = (start + a - c) % a;
      if (!used[cand]) k = cand;
    }
    if (!k) continue;  // every k < a is taken; the premise fails here
    used[*k] = true;
    const Rational len = Rational::inverse_power_of_seven(*k + 1);
    const Interval target = shift(family->find(a)->interval, shifts[i]);
    const Rational lo = target.lo() - len + (len + target.length()) * rng.unit();
    js.emplace(*k, Interval::with_length(lo, len));
  }
  const Interval span(Rational(0), Rational(2));
  for (std::uint64_t k = 0; k <= window; ++k) {
    if (used[k] || !rng.chance(Rational(1, 4))) continue;
    const Rational len = Rational::inverse_power_of_seven(k + 1);
    js.emplace(k, Interval::with_length(rng.position(span, len), len));
  }
  std::set<std::uint64_t> keys;
  for (const auto& [k, iv] : js) keys.insert(k);
  return CoverAttempt(OmegaSet::finite(std::move(keys)), Constraint::geometric(Rational(1, 7)),
                      window, std::move(js));
}

}  // namespace microcover
