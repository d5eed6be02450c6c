#include <algorithm>

#include "microcover/constructions.hpp"
#include "microcover/errors.hpp"
#include "microcover/parallel.hpp"

namespace microcover {

namespace {

std::shared_ptr<const PlacedFamily> spacing_family(const Interval& root, std::uint64_t m,
                                                   const OmegaSet& a, std::uint64_t count) {
  std::uint32_t depth = 0;
  while (block_start(depth) + 1 < count) ++depth;
  auto tree = std::make_shared<const SpacingTree>(build_k_hierarchy(root, m, depth));
  return std::make_shared<const PlacedFamily>(place_intervals(tree, a, count));
}

TruncationRecord truncation_of(std::uint32_t level, std::uint64_t cutoff) {
  const std::uint64_t step = 1ULL << level;
  TruncationRecord r;
  r.level = level;
  r.first_missing = (cutoff / step + 1) * step;
  // Sum over j = first_missing + step·i of 7^-j.
  r.missing_mass_bound = Rational::inverse_power_of_seven(r.first_missing) /
                         (Rational(1) - Rational::inverse_power_of_seven(step));
  return r;
}

std::uint64_t ratio_sample(std::uint64_t window) { return std::min<std::uint64_t>(window, 64); }

}  // namespace

const XNode* MicroXApprox::find(std::uint32_t i, std::uint64_t j) const {
  if (i >= levels_.size()) return nullptr;
  auto it = levels_[i].find(j);
  return it == levels_[i].end() ? nullptr : &it->second;
}

std::vector<Interval> MicroXApprox::region(std::uint32_t i) const {
  std::vector<Interval> out;
  for (const auto& [j, node] : levels_.at(i)) out.push_back(node.interval);
  std::sort(out.begin(), out.end(),
            [](const Interval& a, const Interval& b) { return a.lo() < b.lo(); });
  return out;
}

std::shared_ptr<const PlacedFamily> MicroXApprox::family(std::uint32_t level,
                                                         std::uint64_t parent) const {
  auto it = families_.find({level, parent});
  return it == families_.end() ? nullptr : it->second;
}

MicroXApprox build_X(std::uint32_t depth, std::uint64_t cutoff, unsigned threads) {
  if (depth > 40 || cutoff < (1ULL << depth)) {
    throw PreconditionError("build_X: cutoff " + std::to_string(cutoff) +
                            " leaves level " + std::to_string(depth) + " empty");
  }
  MicroXApprox x;
  x.cutoff_ = cutoff;
  x.levels_.resize(depth + 1);

  const auto root = spacing_family(Interval(Rational(0), Rational(1)), 0,
                                   OmegaSet::progression(1, 1), cutoff);
  x.families_[{0, 0}] = root;
  for (const auto& p : root->placements()) x.levels_[0][p.a] = XNode{p.a, p.interval, 0};
  x.truncation_.push_back(truncation_of(0, cutoff));

  for (std::uint32_t i = 0; i < depth; ++i) {
    std::vector<std::uint64_t> parents;
    for (const auto& [j, node] : x.levels_[i]) parents.push_back(j);
    std::vector<std::shared_ptr<const PlacedFamily>> children(parents.size());
    parallel_for(parents.size(), threads, [&](std::size_t p) {
      const std::uint64_t j = parents[p];
      const std::uint64_t n = (j >> i) - 1;
      // min A^i_n = 2^(i+n+1); nothing to place past the cutoff.
      if (i + n + 1 >= 62 || (1ULL << (i + n + 1)) > cutoff) return;
      const OmegaSet a = dyadic_part(i, n);
      children[p] = spacing_family(x.levels_[i].at(j).interval, j, a, a.count_prefix(cutoff));
    });
    TruncationRecord record = truncation_of(i + 1, cutoff);
    for (std::size_t p = 0; p < parents.size(); ++p) {
      if (!children[p]) {
        record.childless_parents.push_back(parents[p]);
        continue;
      }
      x.families_[{i + 1, parents[p]}] = children[p];
      for (const auto& pl : children[p]->placements()) {
        x.levels_[i + 1][pl.a] = XNode{pl.a, pl.interval, parents[p]};
      }
    }
    x.truncation_.push_back(std::move(record));
  }
  return x;
}

MicroscopicCheck verify_microscopic(const MicroXApprox& x, const Rational& eps_prime,
                                    std::uint32_t level) {
  if (level > x.depth()) {
    throw PreconditionError("verify_microscopic: level " + std::to_string(level) +
                            " is not materialized");
  }
  if (!(Rational::inverse_power_of_seven(1ULL << level) < eps_prime)) {
    throw PreconditionError("verify_microscopic: need 7^-(2^" + std::to_string(level) + ") < " +
                            eps_prime.to_string());
  }
  const std::uint64_t step = 1ULL << level;
  std::map<std::uint64_t, Interval> js;
  for (const auto& [j, node] : x.level(level)) js.emplace(j / step - 1, node.interval);
  const std::uint64_t window = x.cutoff() / step - 1;
  CoverAttempt cover(OmegaSet::all(), Constraint::geometric(eps_prime), window, std::move(js));
  auto validation = validate(cover);
  auto coverage = covers_region(cover, x.region(level));
  return MicroscopicCheck{level, std::move(cover), std::move(validation), std::move(coverage)};
}

ChainOutcome try_extract_uncovered_point(const MicroXApprox& x, const CoverAttempt& cover,
                                         std::uint32_t target_depth) {
  if (target_depth > x.depth()) {
    throw PreconditionError("extract_uncovered_point: depth " + std::to_string(target_depth) +
                            " exceeds the materialized depth " + std::to_string(x.depth()));
  }
  const CoverAttempt geometric(cover.index_set(), Constraint::geometric(Rational(1, 7)),
                               cover.window_end(), cover.intervals());
  if (!validate(geometric).all_ok()) {
    throw PreconditionError("extract_uncovered_point: cover violates |J_d| <= 7^-(d+1)");
  }
  const std::uint64_t w = std::max<std::uint64_t>(cover.window_end(), 1);
  const Rational d_estimate =
      density_estimate(cover.index_set(), w, ratio_sample(w)).lower_estimate;

  ChainOutcome out;
  std::uint64_t previous = 0;
  for (std::uint32_t n = 0; n <= target_depth; ++n) {
    const auto family = x.family(n, previous);
    if (!family) {
      out.failed_level = n;
      out.message = "children of I^" + std::to_string(n - 1) + "_" + std::to_string(previous) +
                    " lie beyond the cutoff";
      return out;
    }
    LevelTelemetry t;
    t.n = n;
    t.candidates = family->placements().size();
    t.threshold = density_exact(family->index_set()) / Rational(4);
    t.d_lower_estimate = d_estimate;
    t.hypothesis_met = d_estimate < t.threshold;
    out.chain.telemetry.push_back(t);
    try {
      Witness w = find_witness(family->keyed(x.cutoff()), cover);
      out.chain.links.push_back(ChainLink{n, w.a, w.interval, w});
      previous = w.a;
    } catch (const WindowInsufficientError& e) {
      out.failed_level = n;
      out.message = "level " + std::to_string(n) + ": " + e.what();
      return out;
    }
  }
  out.complete = true;
  return out;
}

WitnessChain extract_uncovered_point(const MicroXApprox& x, const CoverAttempt& cover,
                                     std::uint32_t target_depth) {
  auto outcome = try_extract_uncovered_point(x, cover, target_depth);
  if (!outcome.complete) {
    throw WindowInsufficientError(outcome.message, *outcome.failed_level);
  }
  return std::move(outcome.chain);
}

std::vector<std::pair<std::uint64_t, Interval>> chain_targets(const MicroXApprox& x) {
  std::vector<std::pair<std::uint64_t, Interval>> out;
  for (std::uint32_t i = x.depth() + 1; i-- > 0;) {
    for (const auto& [j, node] : x.level(i)) out.emplace_back(j, node.interval);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

bool replay_chain(const WitnessChain& chain, const MicroXApprox& x, const CoverAttempt& cover) {
  for (std::size_t i = 0; i < chain.links.size(); ++i) {
    const ChainLink& link = chain.links[i];
    const XNode* node = x.find(link.n, link.j);
    if (link.n != i || node == nullptr || node->interval != link.interval) return false;
    if (link.certificate.a != link.j || link.certificate.interval != link.interval) return false;
    if (!replay_witness(link.certificate, cover)) return false;
    if (i == 0) continue;
    const ChainLink& up = chain.links[i - 1];
    const std::uint64_t k = (up.j >> (link.n - 1)) - 1;
    if (!dyadic_part(link.n - 1, k).contains(link.j)) return false;
    if (!up.interval.contains(link.interval) || up.j >= link.j) return false;
  }
  return true;
}

}  // namespace microcover
