#include "microcover/cover_attempt.hpp"

#include <mpfr.h>

#include <algorithm>

#include "microcover/errors.hpp"

namespace microcover {

namespace {

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

// Bound on ln(z) for a positive integer z, rounded in direction `rnd`.
void log_of_integer(mpfr_ptr out, const BigInt& z, mpfr_rnd_t rnd) {
  mpfr_set_z(out, z.get_mpz_t(), rnd);
  mpfr_log(out, out, rnd);
}

// [lo, hi] enclosing ln(q) for q > 0.
void log_of_rational(mpfr_ptr lo, mpfr_ptr hi, const Rational& q, mpfr_prec_t prec) {
  Mpfr num_lo(prec), num_hi(prec), den_lo(prec), den_hi(prec);
  log_of_integer(num_lo.get(), q.numerator(), MPFR_RNDD);
  log_of_integer(num_hi.get(), q.numerator(), MPFR_RNDU);
  log_of_integer(den_lo.get(), q.denominator(), MPFR_RNDD);
  log_of_integer(den_hi.get(), q.denominator(), MPFR_RNDU);
  mpfr_sub(lo, num_lo.get(), den_hi.get(), MPFR_RNDD);
  mpfr_sub(hi, num_hi.get(), den_lo.get(), MPFR_RNDU);
}

}  // namespace

CoverAttempt::CoverAttempt(OmegaSet index_set, Constraint constraint,
                           std::uint64_t window_end,
                           std::map<std::uint64_t, Interval> intervals)
    : index_set_(std::move(index_set)),
      constraint_(std::move(constraint)),
      window_end_(window_end),
      intervals_(std::move(intervals)) {
  if (constraint_.eps.sign() <= 0) throw PreconditionError("constraint eps must be positive");
  for (const auto& [d, j] : intervals_) {
    if (d > window_end_) {
      throw PreconditionError("cover index " + std::to_string(d) +
                              " beyond window_end " + std::to_string(window_end_));
    }
    if (!index_set_.contains(d)) {
      throw PreconditionError("cover index " + std::to_string(d) + " not in D");
    }
  }
}

const Interval* CoverAttempt::find(std::uint64_t d) const {
  auto it = intervals_.find(d);
  return it == intervals_.end() ? nullptr : &it->second;
}

bool ValidationReport::all_ok() const {
  return std::all_of(status.begin(), status.end(),
                     [](const auto& kv) { return kv.second == ValidationStatus::kOk; });
}

bool ValidationReport::any_indeterminate() const {
  return std::any_of(status.begin(), status.end(), [](const auto& kv) {
    return kv.second == ValidationStatus::kIndeterminate;
  });
}

std::vector<std::uint64_t> ValidationReport::with_status(ValidationStatus s) const {
  std::vector<std::uint64_t> out;
  for (const auto& [d, st] : status) {
    if (st == s) out.push_back(d);
  }
  return out;
}

ValidationStatus check_logarithmic_bound(const Rational& length, std::uint64_t d,
                                         const Rational& eps, unsigned precision_cap,
                                         unsigned* bits_used) {
  if (eps.sign() <= 0 || eps >= Rational(1)) {
    throw PreconditionError("logarithmic constraint needs 0 < eps < 1");
  }
  if (bits_used) *bits_used = 0;
  if (length.is_zero()) return ValidationStatus::kOk;
  // |J| <= eps^ln(d+2)  <=>  ln|J| <= ln(d+2) * ln(eps)
  const unsigned cap = std::max(precision_cap, 2u);
  for (unsigned prec = std::min(64u, cap);; prec = std::min(prec * 2, cap)) {
    if (bits_used) *bits_used = prec;
    Mpfr len_lo(prec), len_hi(prec), eps_lo(prec), eps_hi(prec);
    Mpfr idx_lo(prec), idx_hi(prec), rhs_lo(prec), rhs_hi(prec);
    log_of_rational(len_lo.get(), len_hi.get(), length, prec);
    log_of_rational(eps_lo.get(), eps_hi.get(), eps, prec);
    const BigInt n = BigInt(static_cast<unsigned long>(d)) + 2;
    log_of_integer(idx_lo.get(), n, MPFR_RNDD);
    log_of_integer(idx_hi.get(), n, MPFR_RNDU);
    // ln(d+2) > 0 and ln(eps) < 0, so the product is extremal at opposite ends.
    mpfr_mul(rhs_lo.get(), idx_hi.get(), eps_lo.get(), MPFR_RNDD);
    mpfr_mul(rhs_hi.get(), idx_lo.get(), eps_hi.get(), MPFR_RNDU);
    if (mpfr_lessequal_p(len_hi.get(), rhs_lo.get())) return ValidationStatus::kOk;
    if (mpfr_greater_p(len_lo.get(), rhs_hi.get())) return ValidationStatus::kViolation;
    if (prec >= cap) break;
  }
  return ValidationStatus::kIndeterminate;
}

std::uint64_t ceil_log(std::uint64_t n) {
  if (n <= 1) return 0;
  Mpfr e_val(128);
  const BigInt target(static_cast<unsigned long>(n));
  for (std::uint64_t e = 1;; ++e) {
    mpfr_set_ui(e_val.get(), static_cast<unsigned long>(e), MPFR_RNDD);
    mpfr_exp(e_val.get(), e_val.get(), MPFR_RNDD);
    if (mpfr_cmp_z(e_val.get(), target.get_mpz_t()) >= 0) return e;
  }
}

ValidationReport validate(const CoverAttempt& cover, unsigned precision_cap) {
  ValidationReport report;
  report.precision_cap = precision_cap;
  const Constraint& c = cover.constraint();
  if (c.kind == ConstraintKind::kGeometric) {
    std::uint64_t exponent = 0;
    Rational bound(1);
    for (const auto& [d, j] : cover.intervals()) {
      bound *= c.eps.pow(d + 1 - exponent);
      exponent = d + 1;
      report.status[d] = j.length() <= bound ? ValidationStatus::kOk
                                             : ValidationStatus::kViolation;
    }
    return report;
  }
  for (const auto& [d, j] : cover.intervals()) {
    unsigned bits = 0;
    report.status[d] = check_logarithmic_bound(j.length(), d, c.eps, precision_cap, &bits);
    report.precision_bits = std::max(report.precision_bits, bits);
  }
  return report;
}

RegionCoverage covers_region(const CoverAttempt& cover, const std::vector<Interval>& region) {
  std::vector<Interval> pieces;
  pieces.reserve(cover.intervals().size());
  for (const auto& [d, j] : cover.intervals()) pieces.push_back(j);
  std::sort(pieces.begin(), pieces.end(),
            [](const Interval& a, const Interval& b) { return a.lo() < b.lo(); });
  std::vector<Interval> components;
  for (const auto& p : pieces) {
    if (!components.empty() && p.lo() <= components.back().hi()) {
      if (p.hi() > components.back().hi()) {
        components.back() = Interval(components.back().lo(), p.hi());
      }
    } else {
      components.push_back(p);
    }
  }

  std::vector<Interval> targets = region;
  std::sort(targets.begin(), targets.end(),
            [](const Interval& a, const Interval& b) { return a.lo() < b.lo(); });
  for (const auto& r : targets) {
    // First component that does not end before r starts.
    auto it = std::partition_point(components.begin(), components.end(),
                                   [&](const Interval& c) { return c.hi() < r.lo(); });
    Rational gap_start = r.lo();
    if (it != components.end() && it->lo() <= r.lo()) {
      if (it->hi() >= r.hi()) continue;
      gap_start = it->hi();
      ++it;
    }
    Rational gap_end = r.hi();
    if (it != components.end() && it->lo() < gap_end) gap_end = it->lo();
    return RegionCoverage{false, Interval(gap_start, gap_end)};
  }
  return RegionCoverage{};
}

}  // namespace microcover
