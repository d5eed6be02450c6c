#include "microcover/omega_set.hpp"

#include <algorithm>
#include <numeric>
#include <regex>
#include <sstream>
#include <utility>

#include "microcover/errors.hpp"

namespace microcover {

namespace {

constexpr std::uint64_t kMaxPeriod = std::uint64_t{1} << 24;
constexpr std::uint64_t kMaxThreshold = std::uint64_t{1} << 26;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\n\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\n\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_natural(const std::string& s) {
  if (s.empty() ||
      !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw PreconditionError("expected a natural number, got '" + s + "'");
  }
  return std::stoull(s);
}

}  // namespace

OmegaSet::OmegaSet(std::set<std::uint64_t> finite,
                   std::vector<Progression> progressions,
                   std::set<std::uint64_t> excluded)
    : finite_(std::move(finite)),
      progressions_(std::move(progressions)),
      excluded_(std::move(excluded)) {
  normalize();
}

OmegaSet OmegaSet::finite(std::set<std::uint64_t> elements) {
  return OmegaSet(std::move(elements), {}, {});
}

OmegaSet OmegaSet::progression(std::uint64_t start, std::uint64_t step) {
  return OmegaSet({}, {Progression{start, step}}, {});
}

void OmegaSet::normalize() {
  for (const auto& p : progressions_) {
    if (p.step == 0) throw PreconditionError("progression step must be positive");
  }
  for (auto e : excluded_) {
    if (finite_.count(e)) {
      throw PreconditionError("excluded element " + std::to_string(e) +
                              " also listed in the finite part");
    }
  }
  std::sort(progressions_.begin(), progressions_.end());
  progressions_.erase(std::unique(progressions_.begin(), progressions_.end()),
                      progressions_.end());

  period_ = 1;
  threshold_ = 0;
  for (const auto& p : progressions_) {
    period_ = std::lcm(period_, p.step);
    if (period_ > kMaxPeriod) {
      throw PreconditionError("progression period exceeds supported bound");
    }
    threshold_ = std::max(threshold_, p.start);
  }
  if (threshold_ > kMaxThreshold) {
    throw PreconditionError("progression start exceeds supported bound");
  }

  residue_member_.assign(period_, false);
  for (std::uint64_t r = 0; r < period_; ++r) {
    for (const auto& p : progressions_) {
      if (r % p.step == p.start % p.step) {
        residue_member_[r] = true;
        break;
      }
    }
  }
  residue_cumulative_.assign(period_ + 1, 0);
  for (std::uint64_t r = 0; r < period_; ++r) {
    residue_cumulative_[r + 1] = residue_cumulative_[r] + (residue_member_[r] ? 1 : 0);
  }

  head_cumulative_.assign(threshold_ + 1, 0);
  for (std::uint64_t n = 0; n < threshold_; ++n) {
    bool member = false;
    for (const auto& p : progressions_) {
      if (n >= p.start && (n - p.start) % p.step == 0) {
        member = true;
        break;
      }
    }
    head_cumulative_[n + 1] = head_cumulative_[n] + (member ? 1 : 0);
  }

  extra_members_.clear();
  removed_members_.clear();
  for (auto f : finite_) {
    if (!in_progressions(f)) extra_members_.push_back(f);
  }
  for (auto e : excluded_) {
    if (in_progressions(e)) removed_members_.push_back(e);
  }
}

bool OmegaSet::in_progressions(std::uint64_t n) const {
  if (progressions_.empty()) return false;
  if (n < threshold_) return head_cumulative_[n + 1] != head_cumulative_[n];
  return residue_member_[n % period_];
}

std::uint64_t OmegaSet::progression_count_prefix(std::uint64_t j) const {
  if (progressions_.empty()) return 0;
  if (j < threshold_) return head_cumulative_[j + 1];
  // Membership from the threshold on depends only on the residue.
  const std::uint64_t per_period = residue_cumulative_[period_];
  auto periodic = [&](std::uint64_t x) {  // members of the periodic extension in [0, x)
    return (x / period_) * per_period + residue_cumulative_[x % period_];
  };
  return head_cumulative_[threshold_] + periodic(j + 1) - periodic(threshold_);
}

bool OmegaSet::contains(std::uint64_t n) const {
  if (excluded_.count(n)) return false;
  if (finite_.count(n)) return true;
  return in_progressions(n);
}

std::uint64_t OmegaSet::count_prefix(std::uint64_t j) const {
  const auto upto = [j](const std::vector<std::uint64_t>& v) {
    return static_cast<std::uint64_t>(std::upper_bound(v.begin(), v.end(), j) - v.begin());
  };
  return progression_count_prefix(j) + upto(extra_members_) - upto(removed_members_);
}

Rational OmegaSet::density_exact() const {
  if (progressions_.empty()) return Rational(0);
  return Rational(static_cast<std::int64_t>(residue_cumulative_[period_]),
                  static_cast<std::int64_t>(period_));
}

std::vector<Progression> OmegaSet::normalized_progressions() const {
  std::vector<Progression> out;
  if (progressions_.empty()) return out;
  // First member of each residue class at or after the threshold.
  const std::uint64_t base = threshold_;
  for (std::uint64_t k = 0; k < period_; ++k) {
    const std::uint64_t n = base + k;
    if (residue_member_[n % period_]) out.push_back({n, period_});
  }
  return out;
}

std::vector<std::uint64_t> OmegaSet::elements_up_to(std::uint64_t j) const {
  std::vector<std::uint64_t> out;
  for (const auto& p : progressions_) {
    for (std::uint64_t n = p.start; n <= j; n += p.step) out.push_back(n);
  }
  for (auto f : finite_) {
    if (f > j) break;
    out.push_back(f);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  std::erase_if(out, [this](std::uint64_t n) { return excluded_.count(n) != 0; });
  return out;
}

std::vector<std::uint64_t> OmegaSet::first_elements(std::size_t count) const {
  if (count == 0) return {};
  if (progressions_.empty()) {
    auto all = elements_up_to(finite_.empty() ? 0 : *finite_.rbegin());
    if (all.size() < count) {
      throw PreconditionError("finite set has only " + std::to_string(all.size()) +
                              " elements, " + std::to_string(count) + " requested");
    }
    all.resize(count);
    return all;
  }
  std::uint64_t j = 64;
  while (count_prefix(j) < count) j *= 2;
  auto out = elements_up_to(j);
  out.resize(count);
  return out;
}

std::optional<std::uint64_t> OmegaSet::min_element() const {
  if (progressions_.empty()) {
    for (auto f : finite_) return f;  // finite_ and excluded_ are disjoint
    return std::nullopt;
  }
  return first_elements(1).front();
}

OmegaSet OmegaSet::shifted_down(std::uint64_t offset) const {
  std::set<std::uint64_t> finite;
  std::vector<Progression> progressions;
  std::set<std::uint64_t> excluded;
  for (auto f : finite_) {
    if (f < offset) throw PreconditionError("shift would produce a negative element");
    finite.insert(f - offset);
  }
  for (const auto& p : progressions_) {
    if (p.start < offset) throw PreconditionError("shift would produce a negative element");
    progressions.push_back({p.start - offset, p.step});
  }
  for (auto e : excluded_) {
    if (e >= offset) excluded.insert(e - offset);
  }
  return OmegaSet(std::move(finite), std::move(progressions), std::move(excluded));
}

OmegaSet OmegaSet::united(const OmegaSet& other) const {
  std::set<std::uint64_t> finite = finite_;
  finite.insert(other.finite_.begin(), other.finite_.end());
  std::vector<Progression> progressions = progressions_;
  progressions.insert(progressions.end(), other.progressions_.begin(),
                      other.progressions_.end());
  std::set<std::uint64_t> excluded;
  for (const auto* side : {&excluded_, &other.excluded_}) {
    for (auto e : *side) {
      if (contains(e) || other.contains(e)) {
        finite.insert(e);
      } else {
        excluded.insert(e);
      }
    }
  }
  return OmegaSet(std::move(finite), std::move(progressions), std::move(excluded));
}

std::uint64_t count_prefix(const OmegaSet& s, std::uint64_t j) {
  return s.count_prefix(j);
}

Rational density_exact(const OmegaSet& s) { return s.density_exact(); }

DensityReport density_estimate(const OmegaSet& s, std::uint64_t j_max,
                               std::uint64_t samples) {
  if (samples == 0 || j_max < samples) {
    throw PreconditionError("density_estimate: need j_max >= samples >= 1");
  }
  DensityReport report;
  report.window_end = j_max;
  const std::uint64_t lo = j_max / 2;
  const std::uint64_t span = j_max - lo;
  for (std::uint64_t k = 0; k < samples; ++k) {
    const std::uint64_t j = samples == 1 ? j_max : lo + span * k / (samples - 1);
    report.prefix_ratios.emplace(
        j, Rational(static_cast<std::int64_t>(s.count_prefix(j)),
                    static_cast<std::int64_t>(j + 1)));
  }
  report.lower_estimate = report.prefix_ratios.begin()->second;
  report.upper_estimate = report.lower_estimate;
  for (const auto& [j, ratio] : report.prefix_ratios) {
    report.lower_estimate = std::min(report.lower_estimate, ratio);
    report.upper_estimate = std::max(report.upper_estimate, ratio);
  }
  report.exact_density = s.density_exact();
  return report;
}

OmegaSet dyadic_part(std::uint64_t m, std::uint64_t j) {
  if (m + j + 2 > 62) throw PreconditionError("dyadic part exponent too large");
  return OmegaSet::progression(std::uint64_t{1} << (m + j + 1),
                               std::uint64_t{1} << (m + j + 2));
}

std::vector<OmegaSet> partition_dyadic(std::uint64_t m, std::uint64_t j_count) {
  std::vector<OmegaSet> out;
  out.reserve(j_count);
  for (std::uint64_t j = 0; j < j_count; ++j) out.push_back(dyadic_part(m, j));
  return out;
}

OmegaSet parse_omega_set(const std::string& text) {
  static const std::regex progression_re(R"((\d+)\s*\+\s*(\d*)\s*w)");
  static const std::regex scaled_re(R"((\d+)\s*\*\s*\(\s*w\s*\+\s*1\s*\))");
  static const std::regex omega_plus_one_re(R"(\(\s*w\s*\+\s*1\s*\))");

  OmegaSet result;
  std::stringstream stream(text);
  std::string part;
  bool any = false;
  while (std::getline(stream, part, '|')) {
    const std::string term = trim(part);
    std::smatch match;
    OmegaSet piece;
    if (term.empty()) {
      throw PreconditionError("empty term in omega-set '" + text + "'");
    } else if (term.front() == '{') {
      if (term.back() != '}') throw PreconditionError("unterminated brace in '" + term + "'");
      std::set<std::uint64_t> elems;
      std::stringstream inner(term.substr(1, term.size() - 2));
      std::string item;
      while (std::getline(inner, item, ',')) {
        const auto t = trim(item);
        if (!t.empty()) elems.insert(parse_natural(t));
      }
      piece = OmegaSet::finite(std::move(elems));
    } else if (term == "w") {
      piece = OmegaSet::all();
    } else if (std::regex_match(term, omega_plus_one_re)) {
      piece = OmegaSet::multiples(1);
    } else if (std::regex_match(term, match, scaled_re)) {
      const auto k = parse_natural(match[1]);
      if (k == 0) throw PreconditionError("scale factor must be positive");
      piece = OmegaSet::multiples(k);
    } else if (std::regex_match(term, match, progression_re)) {
      const std::string step = match[2];
      piece = OmegaSet::progression(parse_natural(match[1]),
                                    step.empty() ? 1 : parse_natural(step));
    } else {
      piece = OmegaSet::finite({parse_natural(term)});
    }
    result = any ? result.united(piece) : piece;
    any = true;
  }
  if (!any) throw PreconditionError("empty omega-set expression");
  return result;
}

}  // namespace microcover
