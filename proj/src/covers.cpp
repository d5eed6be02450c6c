#include "microcover/covers.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include "microcover/errors.hpp"
#include "microcover/interval_index.hpp"
#include "microcover/rng.hpp"

namespace microcover {

Witness find_witness(const std::vector<std::pair<std::uint64_t, Interval>>& candidates,
                     const CoverAttempt& cover) {
  const std::uint64_t certified_limit = cover.window_end() + 1;
  std::vector<std::pair<std::uint64_t, Interval>> usable;
  for (const auto& c : candidates) {
    if (c.first <= certified_limit) usable.push_back(c);
  }
  // Candidate i is killed by any J_d with d < a_i that meets it. Candidates
  // are disjoint, so the positional index answers each J_d in O(log n).
  std::vector<std::pair<std::uint64_t, Interval>> keyed;
  keyed.reserve(usable.size());
  for (std::size_t i = 0; i < usable.size(); ++i) keyed.emplace_back(i, usable[i].second);
  const DisjointIntervalIndex index(std::move(keyed));
  std::vector<bool> killed(usable.size(), false);
  for (const auto& [d, j] : cover.intervals()) {
    for (auto i : index.keys_meeting(j)) {
      if (d < usable[i].first) killed[i] = true;
    }
  }
  for (std::size_t i = 0; i < usable.size(); ++i) {
    if (killed[i]) continue;
    Witness w;
    w.a = usable[i].first;
    w.interval = usable[i].second;
    w.candidates_scanned = i + 1;
    for (const auto& [d, j] : cover.intervals()) {
      if (d >= w.a) break;
      w.checks.push_back({w.a, d, !intersects(w.interval, j)});
    }
    return w;
  }
  throw WindowInsufficientError("no certified witness among " + std::to_string(usable.size()) +
                                " candidates with a <= " + std::to_string(certified_limit));
}

bool replay_witness(const Witness& w, const CoverAttempt& cover) {
  std::size_t expected = 0;
  for (const auto& [d, j] : cover.intervals()) {
    if (d < w.a) ++expected;
  }
  if (w.checks.size() != expected || w.a > cover.window_end() + 1) return false;
  for (const auto& c : w.checks) {
    const Interval* j = cover.find(c.d);
    if (c.a != w.a || j == nullptr || c.d >= w.a || !c.disjoint) return false;
    if (intersects(w.interval, *j)) return false;
  }
  return true;
}

CorollaryWitness corollary_witness(const PlacedFamily& placed, const CoverAttempt& cover) {
  const std::uint64_t m = placed.tree().base_exponent();
  const auto d_min = cover.index_set().min_element();
  if (d_min && *d_min < m) {
    throw PreconditionError("corollary_witness: D must avoid {0, ..., " + std::to_string(m) +
                            " - 1}");
  }
  if (!validate(cover).all_ok()) {
    throw PreconditionError("corollary_witness: cover does not satisfy its length constraint");
  }
  CorollaryWitness out;
  const std::uint64_t window = std::max<std::uint64_t>(cover.window_end(), 1);
  out.d_lower_estimate =
      density_estimate(cover.index_set(), window, std::min<std::uint64_t>(window, 64))
          .lower_estimate;
  out.threshold = density_exact(placed.index_set()) / Rational(4);
  out.hypothesis_met = out.d_lower_estimate < out.threshold;
  out.witness = find_witness(placed.keyed(std::numeric_limits<std::uint64_t>::max()), cover);
  return out;
}

Budget Budget::parse(const std::string& text) {
  if (text == "unbounded") return unbounded();
  if (text == "sqrt") return sqrt();
  static const std::regex re(R"(^(\d+/\d+|\d+)(\+(\d+))?$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) {
    throw PreconditionError("budget must be 'unbounded', 'sqrt' or 'p/q[+c]', got '" + text + "'");
  }
  return linear(Rational::parse(m[1].str()), m[3].matched ? std::stoll(m[3].str()) : 0);
}

std::uint64_t Budget::allowed(std::uint64_t j) const {
  switch (kind) {
    case Kind::kUnbounded:
      return j + 1;
    case Kind::kSqrt: {
      std::uint64_t r = 0;
      while ((r + 1) * (r + 1) <= j) ++r;
      return r;
    }
    case Kind::kFraction: {
      const Rational v = Rational(static_cast<std::int64_t>(j + 1)) * fraction;
      const std::int64_t total = v.floor().get_si() + offset;
      return total < 0 ? 0 : static_cast<std::uint64_t>(total);
    }
  }
  return 0;
}

std::string Budget::to_string() const {
  switch (kind) {
    case Kind::kUnbounded:
      return "unbounded";
    case Kind::kSqrt:
      return "sqrt";
    case Kind::kFraction:
      return fraction.to_string() + (offset ? "+" + std::to_string(offset) : "");
  }
  return "";
}

std::string to_string(AdversaryStrategy s) {
  switch (s) {
    case AdversaryStrategy::kGreedyHit:
      return "greedy-hit";
    case AdversaryStrategy::kDensityBudget:
      return "density-budget";
    case AdversaryStrategy::kRandom:
      return "random";
  }
  return "";
}

AdversaryStrategy parse_strategy(const std::string& text) {
  if (text == "greedy-hit") return AdversaryStrategy::kGreedyHit;
  if (text == "density-budget") return AdversaryStrategy::kDensityBudget;
  if (text == "random") return AdversaryStrategy::kRandom;
  throw PreconditionError("unknown adversary strategy '" + text + "'");
}

Rational max_length(const Constraint& c, std::uint64_t d) {
  if (c.kind == ConstraintKind::kGeometric) return c.eps.pow(d + 1);
  if (c.eps.sign() <= 0 || c.eps >= Rational(1)) {
    throw PreconditionError("logarithmic constraint needs 0 < eps < 1");
  }
  return c.eps.pow(ceil_log(d + 2));
}

namespace {

Interval centered(const Interval& target, const Rational& len) {
  const Rational mid = (target.lo() + target.hi()) / Rational(2);
  return Interval::with_length(mid - len / Rational(2), len);
}

class TargetPool {
 public:
  explicit TargetPool(const std::vector<std::pair<std::uint64_t, Interval>>& targets)
      : targets_(targets) {
    refill();
  }

  // Longest unhit target with index > d, else the longest unhit one.
  const Interval* take(std::uint64_t d) {
    if (targets_.empty()) return nullptr;
    if (unhit_.empty()) refill();
    auto it = unhit_.lower_bound({d + 1, 0});
    if (it == unhit_.end()) it = unhit_.begin();
    const Interval* out = &targets_[it->second].second;
    unhit_.erase(it);
    return out;
  }

 private:
  void refill() {
    for (std::size_t i = 0; i < targets_.size(); ++i) unhit_.insert({targets_[i].first, i});
  }

  const std::vector<std::pair<std::uint64_t, Interval>>& targets_;
  std::set<std::pair<std::uint64_t, std::size_t>> unhit_;
};

Interval mixed_placement(const AdversaryParams& params, std::uint64_t d, const Rational& len,
                         Rng& rng) {
  const auto choice = rng.below(3);
  if (choice == 0 && !params.targets.empty()) {
    const Interval& t = params.targets[rng.below(params.targets.size())].second;
    const Rational x = t.lo() + t.length() * rng.unit(32);
    return Interval::with_length(x - len / Rational(2), len);
  }
  if (choice == 1 && params.tree && d >= params.tree->base_exponent() &&
      d - params.tree->base_exponent() <= params.tree->depth()) {
    // A node one level below d has length 7^-(d+1): J_d can swallow it whole.
    const auto level = static_cast<std::uint32_t>(d - params.tree->base_exponent());
    const auto& nodes = params.tree->level(level);
    const Interval& node = nodes[rng.below(nodes.size())];
    if (node.length() <= len) return Interval::with_length(node.lo(), len);
    return Interval::with_length(rng.position(node, len), len);
  }
  return Interval::with_length(rng.position(params.region, len), len);
}

}  // namespace

CoverAttempt adversary_generate(const AdversaryParams& params, std::uint64_t seed) {
  if (params.constraint.eps.sign() <= 0) throw PreconditionError("eps must be positive");
  Rng rng(seed);
  TargetPool pool(params.targets);
  std::set<std::uint64_t> indices;
  std::map<std::uint64_t, Interval> intervals;

  const bool geometric = params.constraint.kind == ConstraintKind::kGeometric;
  Rational geo_len = geometric ? params.constraint.eps.pow(params.min_index + 1) : Rational(0);
  std::uint64_t count = 0;
  for (std::uint64_t d = params.min_index; d <= params.window_end; ++d) {
    const Rational len = geometric ? geo_len : max_length(params.constraint, d);
    if (geometric) geo_len = geo_len * params.constraint.eps;
    if (count + 1 > params.budget.allowed(d)) continue;
    if (params.strategy == AdversaryStrategy::kRandom && !rng.chance(params.include_probability)) {
      continue;
    }
    ++count;
    indices.insert(d);
    if (params.strategy == AdversaryStrategy::kGreedyHit) {
      const Interval* t = pool.take(d);
      intervals.emplace(d, t ? centered(*t, len)
                             : Interval::with_length(rng.position(params.region, len), len));
    } else {
      intervals.emplace(d, mixed_placement(params, d, len, rng));
    }
  }
  return CoverAttempt(OmegaSet::finite(std::move(indices)), params.constraint, params.window_end,
                      std::move(intervals));
}

}  // namespace microcover
