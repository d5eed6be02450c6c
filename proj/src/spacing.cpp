#include "microcover/spacing.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <string>

#include "microcover/errors.hpp"

namespace microcover {

std::uint64_t pow3(std::uint32_t e) {
  if (e > 39) throw PreconditionError("3^" + std::to_string(e) + " overflows");
  std::uint64_t out = 1;
  for (std::uint32_t i = 0; i < e; ++i) out *= 3;
  return out;
}

std::uint64_t level_size(std::uint32_t level) { return 4 * pow3(level); }

bool is_terminal(const NodeId& node) {
  const std::uint64_t p = pow3(node.level);
  return 3 * p <= node.index && node.index < 4 * p;
}

std::uint64_t block_start(std::uint32_t n) { return (pow3(n + 1) - 3) / 2; }

std::uint64_t ancestor_index(const NodeId& node, std::uint32_t level) {
  if (level > node.level) throw PreconditionError("ancestor level below node level");
  if (level == node.level) return node.index;
  return node.index % pow3(level + 1);
}

namespace {

// Left-to-right slot of each child index offset, for a parent l at level k-1:
// l, 2·3^k + l, 3·3^k + l, 3^k + l.
constexpr std::array<std::uint64_t, 4> kSlotMultiplier = {0, 2, 3, 1};

}  // namespace

SpacingTree build_k_hierarchy(const Interval& root, std::uint64_t m, std::uint32_t depth) {
  if (root.length() != Rational::inverse_power_of_seven(m)) {
    throw PreconditionError("root interval " + to_string(root) +
                            " does not have length 7^-" + std::to_string(m));
  }
  SpacingTree tree(root, m, depth);
  tree.levels_.resize(depth + 1);
  for (std::uint32_t k = 0; k <= depth; ++k) {
    const std::uint64_t p = pow3(k);
    const Rational child = Rational::inverse_power_of_seven(m + k + 1);
    auto& level = tree.levels_[k];
    level.assign(4 * p, Interval(0, 0));
    // Level 0 hangs off the root; level k off the 3^k non-terminals of k-1.
    const std::uint64_t parents = k == 0 ? 1 : p;
    for (std::uint64_t l = 0; l < parents; ++l) {
      const Interval& parent = k == 0 ? root : tree.levels_[k - 1][l];
      for (std::uint64_t slot = 0; slot < 4; ++slot) {
        const Rational lo = parent.lo() + child * Rational(static_cast<std::int64_t>(2 * slot));
        level[kSlotMultiplier[slot] * p + l] = Interval::with_length(lo, child);
      }
    }
  }
  return tree;
}

NodeId SpacingTree::terminal(std::uint64_t i) const {
  std::uint32_t level = 0;
  std::uint64_t before = 0;  // terminals on levels < level
  while (i >= before + pow3(level)) {
    before += pow3(level);
    ++level;
  }
  if (level > depth_) {
    throw PreconditionError("terminal " + std::to_string(i) + " lies below depth " +
                            std::to_string(depth_));
  }
  return NodeId{level, 3 * pow3(level) + (i - before)};
}

std::vector<Interval> terminal_enumeration(const SpacingTree& tree) {
  std::vector<Interval> out;
  out.reserve(tree.terminal_count());
  for (std::uint64_t i = 0; i < tree.terminal_count(); ++i) {
    out.push_back(tree.node(tree.terminal(i)));
  }
  return out;
}

PlacedFamily::PlacedFamily(std::shared_ptr<const SpacingTree> tree, OmegaSet index_set,
                           std::vector<Placement> placements)
    : tree_(std::move(tree)),
      index_set_(std::move(index_set)),
      placements_(std::move(placements)),
      geometry_(keyed(std::numeric_limits<std::uint64_t>::max())) {
  if (placements_.empty()) throw PreconditionError("empty placed family");
}

const Placement* PlacedFamily::find(std::uint64_t a) const {
  auto it = std::lower_bound(placements_.begin(), placements_.end(), a,
                             [](const Placement& p, std::uint64_t v) { return p.a < v; });
  if (it == placements_.end() || it->a != a) return nullptr;
  return &*it;
}

std::uint32_t PlacedFamily::complete_blocks() const {
  std::uint32_t n = 0;
  while (block_start(n + 1) < placements_.size()) ++n;
  return n;
}

BlockIndex PlacedFamily::block(std::uint32_t n) const {
  if (n >= complete_blocks()) {
    throw PreconditionError("block L_" + std::to_string(n) + " is not fully placed");
  }
  BlockIndex out;
  out.n = n;
  out.t_n = block_start(n);
  for (std::uint64_t i = out.t_n + 1; i <= block_start(n + 1); ++i) {
    out.members.push_back(placements_[i].a);
  }
  return out;
}

std::optional<std::uint32_t> PlacedFamily::block_of(std::uint64_t a) const {
  const Placement* p = find(a);
  if (p == nullptr) throw PreconditionError("index " + std::to_string(a) + " not placed");
  const auto i = static_cast<std::uint64_t>(p - placements_.data());
  if (i == 0) return std::nullopt;
  std::uint32_t n = 0;
  while (block_start(n + 1) < i) ++n;
  return n;
}

std::vector<std::uint64_t> PlacedFamily::members_inside(const NodeId& node) const {
  std::vector<std::uint64_t> out;
  for (const auto& p : placements_) {
    if (p.terminal.level >= node.level && ancestor_index(p.terminal, node.level) == node.index) {
      out.push_back(p.a);
    }
  }
  return out;
}

std::vector<std::pair<std::uint64_t, Interval>> PlacedFamily::keyed(std::uint64_t window) const {
  std::vector<std::pair<std::uint64_t, Interval>> out;
  for (const auto& p : placements_) {
    if (p.a > window) break;
    out.emplace_back(p.a, p.interval);
  }
  return out;
}

PlacedFamily place_intervals(std::shared_ptr<const SpacingTree> tree, const OmegaSet& A,
                             std::size_t count) {
  if (count == 0) throw PreconditionError("place_intervals: count must be positive");
  const auto min_a = A.min_element();
  if (!min_a || *min_a <= tree->base_exponent()) {
    throw PreconditionError("place_intervals: need min A > m = " +
                            std::to_string(tree->base_exponent()));
  }
  if (tree->terminal_count() < count) {
    throw PreconditionError("place_intervals: depth " + std::to_string(tree->depth()) +
                            " holds " + std::to_string(tree->terminal_count()) +
                            " terminals, " + std::to_string(count) + " requested");
  }
  const auto a_values = A.first_elements(count);
  std::vector<Placement> placements;
  placements.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const NodeId terminal = tree->terminal(i);
    const Interval& k = tree->node(terminal);
    placements.push_back(Placement{
        a_values[i], terminal,
        Interval::with_length(k.lo(), Rational::inverse_power_of_seven(a_values[i]))});
  }
  return PlacedFamily(std::move(tree), A, std::move(placements));
}

PlacedFamily place_intervals(const SpacingTree& tree, const OmegaSet& A, std::size_t count) {
  return place_intervals(std::make_shared<const SpacingTree>(tree), A, count);
}

std::set<std::uint64_t> compute_Y(const PlacedFamily& placed, const CoverAttempt& cover,
                                  std::uint64_t window) {
  const DisjointIntervalIndex index(placed.keyed(window));
  std::set<std::uint64_t> shared;
  for (const auto& [d, j] : cover.intervals()) {
    if (d > window) break;
    const auto hits = index.keys_meeting(j);
    if (hits.size() >= 2) shared.insert(hits.begin(), hits.end());
  }
  std::set<std::uint64_t> y;
  for (const auto& [a, interval] : index.items()) {
    if (!shared.count(a)) y.insert(a);
  }
  return y;
}

Shift make_shift(const Rational& r, std::uint64_t m, std::size_t prefix_length) {
  if (r.sign() <= 0) throw PreconditionError("shifts must be positive");
  if (r >= Rational::inverse_power_of_seven(m)) return Shift{r, std::nullopt};
  return Shift{r, digits_base7(r, m, prefix_length)};
}

namespace {

void check_shift(const Shift& s, const SpacingTree& tree) {
  if (s.value.sign() <= 0) throw PreconditionError("shifts must be positive");
  const std::uint64_t m = tree.base_exponent();
  if (s.value >= Rational::inverse_power_of_seven(m)) return;
  if (!s.digits) {
    throw PrefixExhaustedError("shift " + s.value.to_string() + " carries no digit prefix", 0);
  }
  const Digit7Stream& digits = *s.digits;
  if (digits.base_exponent() != m) {
    throw PreconditionError("shift digit prefix uses base exponent " +
                            std::to_string(digits.base_exponent()) + ", tree uses " +
                            std::to_string(m));
  }
  const Rational head = digits.prefix_value();
  const Rational tail = Rational::inverse_power_of_seven(m + digits.size());
  const bool consistent = digits.exact() ? head == s.value
                                         : head <= s.value && s.value < head + tail;
  if (!consistent) {
    throw PreconditionError("digit prefix does not spell shift " + s.value.to_string());
  }
  if (!digits.exact() && digits.size() < tree.depth() + 1) {
    throw PrefixExhaustedError("shift " + s.value.to_string() + " has " +
                                   std::to_string(digits.size()) +
                                   " digits, the tree materializes " +
                                   std::to_string(tree.depth() + 1) + " levels",
                               tree.depth());
  }
}

// Lazily extended q-sequence; throws PrefixExhaustedError when the digits
// needed for the next position are not available.
class QWalker {
 public:
  explicit QWalker(const Digit7Stream& digits) : digits_(digits) {}

  std::size_t at(std::size_t j) {
    while (positions_.size() <= j) extend();
    return positions_[j];
  }
  int digit(std::size_t position) const { return *digits_.digit(position); }

 private:
  void extend() {
    std::size_t pos = 0;
    int avoid = 0;
    if (!positions_.empty()) {
      const std::size_t last = positions_.back();
      pos = last + 1;
      avoid = digit(last) % 2 == 1 ? 6 : 0;
    }
    for (;; ++pos) {
      const auto d = digits_.digit(pos);
      if (!d || (digits_.exact() && pos >= digits_.size() && avoid == 0)) {
        throw PrefixExhaustedError(
            "q-sequence needs digit " + std::to_string(pos) + " beyond the prefix", pos);
      }
      if (*d != avoid) break;
    }
    positions_.push_back(pos);
  }

  const Digit7Stream& digits_;
  std::vector<std::size_t> positions_;
};

std::uint64_t ceil_half(std::uint64_t x) { return (x + 1) / 2; }

}  // namespace

std::set<std::uint64_t> compute_Z(const PlacedFamily& placed, const CoverAttempt& cover,
                                  const std::vector<Shift>& shifts, std::uint64_t window) {
  for (const auto& s : shifts) check_shift(s, placed.tree());
  const auto y = compute_Y(placed, cover, window);
  const DisjointIntervalIndex index(placed.keyed(window));
  std::set<std::uint64_t> blocked;
  for (const auto& [d, j] : cover.intervals()) {
    if (d > window) break;
    const auto hits = index.keys_meeting(j);
    if (hits.empty()) continue;
    const bool touches_shift = std::any_of(shifts.begin(), shifts.end(), [&](const Shift& s) {
      return index.any_meeting_shifted(j, s.value);
    });
    if (touches_shift) blocked.insert(hits.begin(), hits.end());
  }
  std::set<std::uint64_t> z;
  for (auto a : y) {
    if (!blocked.count(a)) z.insert(a);
  }
  return z;
}

QSequence q_sequence(const Digit7Stream& r, std::size_t how_many) {
  QSequence out;
  QWalker walker(r);
  try {
    for (std::size_t j = 0; j < how_many; ++j) out.positions.push_back(walker.at(j));
  } catch (const PrefixExhaustedError&) {
    out.exhausted = true;
  }
  return out;
}

StepReport step_diagnostics(const PlacedFamily& placed, const CoverAttempt& cover,
                            const std::vector<Shift>& shifts, std::uint32_t n,
                            const DiagnosticsOptions& options) {
  const SpacingTree& tree = placed.tree();
  const std::uint64_t m = tree.base_exponent();
  for (const auto& s : shifts) check_shift(s, tree);
  for (const auto& [d, j] : cover.intervals()) {
    if (d < m) {
      throw PreconditionError("step_diagnostics: cover index " + std::to_string(d) +
                              " below m = " + std::to_string(m));
    }
  }

  StepReport report;
  report.n = n;
  const BlockIndex block = placed.block(n);
  report.t_n = block.t_n;
  report.block_size = block.members.size();
  const std::set<std::uint64_t> block_set(block.members.begin(), block.members.end());
  const std::uint64_t window = placed.max_index();
  const DisjointIntervalIndex& index = placed.geometry();

  const auto y = compute_Y(placed, cover, window);
  const auto z = compute_Z(placed, cover, shifts, window);
  for (auto a : block.members) {
    report.y_count += y.count(a);
    report.z_count += z.count(a);
  }
  const auto size = static_cast<std::int64_t>(report.block_size);
  report.y_fraction = Rational(static_cast<std::int64_t>(report.y_count), size);
  report.z_fraction = Rational(static_cast<std::int64_t>(report.z_count), size);
  report.step1_bound_holds = report.y_count >= ceil_half(report.block_size);

  // Step 1: small-index J_d meet at most 3^-(d-m+1) of L_n, the rest one each.
  for (const auto& [d, j] : cover.intervals()) {
    std::uint64_t met = 0;
    for (auto a : index.keys_meeting(j)) met += block_set.count(a);
    if (d <= n + m) {
      const auto level = static_cast<std::uint32_t>(d - m);
      Step1Check check{d, level, met, pow3(n - level), false};
      check.ok = check.met <= check.bound;
      report.step1_small_sum += check.bound;
      report.step1_small.push_back(check);
    } else {
      report.step1_large_max_met = std::max(report.step1_large_max_met, met);
    }
  }
  report.step1_small_sum_below_half = 2 * report.step1_small_sum < report.block_size;
  report.step1_large_ok = report.step1_large_max_met <= 1;

  // Step 2.
  const Rational seven_m = Rational::inverse_power_of_seven(m);
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    if (shifts[i].value < seven_m) report.nontrivial_shifts.push_back(i);
  }
  report.s = static_cast<std::int64_t>(report.nontrivial_shifts.size()) - 1;
  report.delta = options.delta;
  const auto alpha_for = [](std::uint64_t k) {
    return Rational(1) - Rational(2, 3).pow(k + 1);
  };
  const std::uint64_t exponent = report.nontrivial_shifts.size();
  if (options.k) {
    report.k = *options.k;
  } else {
    report.k = 0;
    while (!(alpha_for(report.k).pow(std::max<std::uint64_t>(exponent, 1)) >
             Rational(1) - options.delta)) {
      ++report.k;
    }
  }
  report.alpha = alpha_for(report.k);
  report.alpha_pow_s = report.alpha.pow(exponent == 0 ? 0 : exponent - 1);
  report.alpha_pow_s_plus_1 = report.alpha.pow(exponent);

  std::vector<std::uint64_t> b_members;
  if (report.nontrivial_shifts.empty()) {
    report.b_applicable = true;
    b_members = block.members;
  } else {
    std::vector<QWalker> walkers;
    walkers.reserve(report.nontrivial_shifts.size());
    for (auto i : report.nontrivial_shifts) walkers.emplace_back(*shifts[i].digits);

    std::vector<std::size_t> l_offsets(walkers.size(), 0);
    std::uint64_t previous_p = 0;
    for (std::size_t w = 0; w < walkers.size(); ++w) {
      if (w > 0) {
        std::size_t l = 0;
        while (walkers[w].at(l) <= previous_p) ++l;
        l_offsets[w] = l;
      }
      std::vector<std::uint64_t> row;
      for (std::uint64_t j = 0; j <= report.k; ++j) row.push_back(walkers[w].at(l_offsets[w] + j));
      previous_p = row.back();
      report.p.push_back(row);
      report.p_prime = std::max<std::uint64_t>(report.p_prime,
                                               walkers[w].at(l_offsets[w] + report.k + 1) + 1);
    }
    report.p_max = report.p.back().back();
    report.b_applicable = n > report.p_max;

    std::vector<std::set<std::uint64_t>> b_by_shift(walkers.size());
    for (std::size_t w = 0; w < walkers.size(); ++w) {
      const Rational& r = shifts[report.nontrivial_shifts[w]].value;
      for (std::uint64_t j = 0; j <= report.k; ++j) {
        BTally tally;
        tally.shift = report.nontrivial_shifts[w];
        tally.j = j;
        tally.p = report.p[w][j];
        const std::size_t q_pos = l_offsets[w] + j;
        if (q_pos == 0) {
          tally.case_kind = w == 0 && j == 0 ? 0 : 1;
        } else {
          tally.case_kind = walkers[w].digit(walkers[w].at(q_pos - 1)) % 2 == 0 ? 1 : 2;
        }
        const int forbidden = tally.case_kind == 2 ? 6 : 0;
        tally.index_reading = tally.p != static_cast<std::uint64_t>(forbidden);
        tally.digit_reading = walkers[w].digit(tally.p) != forbidden;
        tally.applicable = tally.p <= n && tally.p <= tree.depth();
        if (!tally.applicable) {
          report.tallies.push_back(tally);
          continue;
        }
        const auto level = static_cast<std::uint32_t>(tally.p);
        const std::uint64_t width = pow3(level);
        const std::uint64_t first = tally.case_kind == 2 ? width : 0;
        tally.nodes_disjoint_from_shift = true;
        for (std::uint64_t l = first; l < first + width; ++l) {
          if (index.any_meeting_shifted(tree.node({level, l}), r)) {
            tally.nodes_disjoint_from_shift = false;
            break;
          }
        }
        for (auto a : block.members) {
          const auto idx = ancestor_index(placed.find(a)->terminal, level);
          if (idx >= first && idx < first + width) {
            ++tally.count;
            b_by_shift[w].insert(a);
          }
        }
        report.tallies.push_back(tally);
      }
    }
    if (report.b_applicable) {
      for (auto a : block.members) {
        if (std::all_of(b_by_shift.begin(), b_by_shift.end(),
                        [a](const auto& b) { return b.count(a) != 0; })) {
          b_members.push_back(a);
        }
      }
    }
  }
  report.b_count = b_members.size();
  report.b_fraction = Rational(static_cast<std::int64_t>(report.b_count), size);
  report.b_fraction_matches_alpha =
      report.b_applicable && report.b_fraction == report.alpha_pow_s_plus_1;

  const auto in_a_prime = [&](std::uint64_t a) {
    const Interval& ia = placed.find(a)->interval;
    return std::none_of(shifts.begin(), shifts.end(), [&](const Shift& s) {
      return index.any_meeting_shifted(ia, s.value);
    });
  };
  for (auto a : block.members) report.a_prime_count += in_a_prime(a) ? 1 : 0;
  report.b_subset_a_prime =
      report.b_applicable && std::all_of(b_members.begin(), b_members.end(), in_a_prime);

  // Step 3: F collects Y members hit by some J_d with d < p' + m.
  std::set<std::uint64_t> f;
  for (const auto& [d, j] : cover.intervals()) {
    if (d >= report.p_prime + m) break;
    for (auto a : index.keys_meeting(j)) {
      if (y.count(a)) f.insert(a);
    }
  }
  report.F.assign(f.begin(), f.end());
  std::uint64_t latest_block = report.p_max;
  for (auto a : report.F) {
    const auto b = placed.block_of(a);
    if (b) latest_block = std::max<std::uint64_t>(latest_block, *b);
  }
  report.N = latest_block + 1;
  report.step3_applicable = report.b_applicable && n > report.N;
  if (report.step3_applicable) {
    report.step3_inclusion = std::all_of(b_members.begin(), b_members.end(), [&](std::uint64_t a) {
      return !y.count(a) || z.count(a);
    });
  }
  return report;
}

}  // namespace microcover
