#include <algorithm>
#include <limits>

#include "microcover/constructions.hpp"
#include "microcover/errors.hpp"

namespace microcover {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

// base^e, saturating.
std::uint64_t power(std::uint64_t base, std::uint64_t e) {
  unsigned __int128 r = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    r *= base;
    if (r > kSaturated) return kSaturated;
  }
  return static_cast<std::uint64_t>(r);
}

OmegaSet affine_image(const OmegaSet& s, std::uint64_t mul, std::uint64_t add) {
  std::set<std::uint64_t> finite;
  for (auto f : s.finite_part()) finite.insert(mul * f + add);
  std::vector<Progression> progs;
  for (const auto& p : s.progressions()) progs.push_back({mul * p.start + add, mul * p.step});
  std::set<std::uint64_t> excluded;
  for (auto e : s.excluded()) excluded.insert(mul * e + add);
  return OmegaSet(std::move(finite), std::move(progs), std::move(excluded));
}

CoverAttempt with_constraint(const CoverAttempt& c, Constraint k) {
  return CoverAttempt(c.index_set(), std::move(k), c.window_end(), c.intervals());
}

void require_unit_eps(const Rational& eps, const char* who) {
  if (eps.sign() <= 0 || !(eps < Rational(1))) {
    throw PreconditionError(std::string(who) + ": eps must lie in (0, 1)");
  }
}

void require_valid(const CoverAttempt& c, const std::string& what) {
  const auto report = validate(c);
  if (!report.all_ok()) {
    throw PreconditionError(what + (report.any_indeterminate() ? " could not be certified"
                                                                : " violates its constraint"));
  }
}

bool disjoint_from(const std::vector<std::uint64_t>& t, const OmegaSet& d) {
  return std::none_of(t.begin(), t.end(), [&](auto x) { return d.contains(x); });
}

// Largest value <= bound outside D and not already used.
std::uint64_t largest_free(std::uint64_t bound, const OmegaSet& d,
                           const std::set<std::uint64_t>& used) {
  std::uint64_t t = bound;
  while (d.contains(t) || used.count(t)) {
    if (t == 0) throw PreconditionError("reindex: no free index left below the bound");
    --t;
  }
  return t;
}

}  // namespace

CoverAttempt thin_reindex(const CoverAttempt& cover, std::uint64_t k, const Rational& eps) {
  require_unit_eps(eps, "thin_reindex");
  require_valid(with_constraint(cover, Constraint::geometric(eps.pow(k + 2))),
                "thin_reindex: input");
  std::map<std::uint64_t, Interval> js;
  for (const auto& [n, iv] : cover.intervals()) js.emplace((k + 1) * (n + 1), iv);
  CoverAttempt out(affine_image(cover.index_set(), k + 1, k + 1), Constraint::geometric(eps),
                   (k + 1) * (cover.window_end() + 1), std::move(js));
  return out;
}

UnionReindex union_reindex_Mprime(const std::vector<CoverAttempt>& covers, const Rational& eps) {
  require_unit_eps(eps, "union_reindex");
  if (covers.empty() || covers.size() > 40) {
    throw PreconditionError("union_reindex: need between 1 and 40 covers");
  }
  std::vector<OmegaSet> shifted;
  std::uint64_t window = kSaturated;
  std::map<std::uint64_t, Interval> js;
  OmegaSet d = OmegaSet::empty();
  for (std::size_t k = 0; k < covers.size(); ++k) {
    const std::uint64_t half = 1ULL << k;
    const std::uint64_t step = half << 1;
    const OmegaSet& dk = covers[k].index_set();
    const bool inside =
        std::all_of(dk.finite_part().begin(), dk.finite_part().end(),
                    [&](auto f) { return f > 0 && f % step == 0; }) &&
        std::all_of(dk.progressions().begin(), dk.progressions().end(), [&](const auto& p) {
          return p.start > 0 && p.start % step == 0 && p.step % step == 0;
        });
    if (!inside) {
      throw PreconditionError("union_reindex: D_" + std::to_string(k) + " is not inside 2^" +
                              std::to_string(k + 1) + "(omega+1)");
    }
    require_valid(with_constraint(covers[k], Constraint::geometric(eps)),
                  "union_reindex: cover " + std::to_string(k));
    shifted.push_back(dk.shifted_down(half));
    const std::uint64_t w = covers[k].window_end() >= half ? covers[k].window_end() - half : 0;
    window = std::min(window, w);
    d = d.united(shifted.back());
  }
  for (std::size_t k = 0; k < covers.size(); ++k) {
    const std::uint64_t half = 1ULL << k;
    for (const auto& [dk, iv] : covers[k].intervals()) {
      if (dk - half <= window) js.emplace(dk - half, iv);
    }
  }
  UnionReindex out{CoverAttempt(d, Constraint::geometric(eps), window, std::move(js)),
                   shifted, true, {}};
  for (std::uint64_t j = 0; j <= window && out.pairwise_disjoint; ++j) {
    std::size_t owners = 0;
    for (const auto& s : shifted) owners += s.contains(j) ? 1 : 0;
    out.pairwise_disjoint = owners <= 1;
  }
  if (!out.pairwise_disjoint) throw PreconditionError("union_reindex: shifted sets overlap");
  out.validation = validate(out.cover);
  return out;
}

CoverAttempt canonical_ln_cover(const Rational& eps_m, std::size_t count) {
  require_unit_eps(eps_m, "canonical_ln_cover");
  if (count == 0) throw PreconditionError("canonical_ln_cover: count must be positive");
  std::map<std::uint64_t, Interval> js;
  for (std::uint64_t n = 0; n < count; ++n) {
    js.emplace(n, Interval::with_length(Rational(static_cast<std::int64_t>(n)),
                                        eps_m.pow(ceil_log(n + 2))));
  }
  return CoverAttempt(OmegaSet::all(), Constraint::logarithmic(eps_m), count - 1, std::move(js));
}

LnAvoidResult reindex_ln_avoid(const LnCoverFactory& factory, const OmegaSet& D,
                               const Rational& eps, std::size_t count,
                               std::optional<std::uint64_t> m) {
  require_unit_eps(eps, "ln_avoid");
  if (count == 0) throw PreconditionError("ln_avoid: count must be positive");
  if (!D.is_finite()) throw PreconditionError("ln_avoid: D must have density zero");

  LnAvoidResult r;
  const std::uint64_t top = D.finite_part().empty() ? 0 : *D.finite_part().rbegin();
  // Beyond 4·card(D) + 4 the ratio is below 1/4 for good.
  const std::uint64_t scan = 4 * D.count_prefix(top) + 4;
  for (std::uint64_t j = 0; j <= scan; ++j) {
    if (4 * D.count_prefix(j) > j + 1) r.k = j;
  }
  std::uint64_t least = 0;
  while ((1ULL << least) <= r.k) ++least;
  if (m) {
    if (*m < 2 || *m >= 63 || (1ULL << *m) <= r.k) {
      throw PreconditionError("ln_avoid: m = " + std::to_string(*m) + " needs m >= 2 and 2^m > " +
                              std::to_string(r.k));
    }
    r.m = *m;
  } else {
    r.m = std::max<std::uint64_t>(2, least);
  }
  if (power(count + 1, r.m) >= (kSaturated >> 2)) {
    throw PreconditionError("ln_avoid: (count+1)^m overflows");
  }

  const Rational eps_m = eps.pow(r.m);
  const CoverAttempt input = factory(eps_m, count);
  if (input.constraint().kind != ConstraintKind::kLogarithmic || input.constraint().eps != eps_m) {
    throw PreconditionError("ln_avoid: factory must return a Logarithmic(eps^m) cover");
  }
  require_valid(input, "ln_avoid: input");

  std::set<std::uint64_t> used;
  r.sandwich_holds = true;
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t p = power(i + 2, r.m);
    const std::uint64_t t = largest_free(p - 2, D, used);
    used.insert(t);
    r.t.push_back(t);
    r.sandwich_holds = r.sandwich_holds && p <= 2 * (t + 2) && t + 2 <= p;
  }
  // Any later t_i satisfies t_i + 2 >= (i+2)^m / 2 >= (count+2)^m / 2.
  const std::uint64_t floor_next = (power(count + 2, r.m) + 1) / 2;
  r.certified_window = floor_next >= 3 ? floor_next - 3 : 0;
  r.density_bound_holds = true;
  std::vector<std::uint64_t> sorted = r.t;
  std::sort(sorted.begin(), sorted.end());
  std::size_t c = 0;
  for (std::uint64_t j = 0; j <= r.certified_window; ++j) {
    while (c < sorted.size() && sorted[c] <= j) ++c;
    if (power(c + 1, r.m) > 2 * (j + 2)) {
      r.density_bound_holds = false;
      break;
    }
  }
  r.disjoint_from_D = disjoint_from(r.t, D);
  r.E = OmegaSet::finite(used);

  std::map<std::uint64_t, Interval> js;
  for (std::uint64_t i = 0; i < count; ++i) {
    if (const Interval* iv = input.find(i)) js.emplace(r.t[i], *iv);
  }
  r.cover = CoverAttempt(r.E, Constraint::logarithmic(eps), *used.rbegin(), std::move(js));
  r.validation = validate(r.cover);
  return r;
}

DensityAvoidResult reindex_density_avoid(const CoverAttempt& m_cover, const OmegaSet& D,
                                         const Rational& eps, std::uint64_t m) {
  require_unit_eps(eps, "density_avoid");
  if (m < 4 || m % 2 != 0) throw PreconditionError("density_avoid: m must be even and >= 4");
  if (density_exact(m_cover.index_set()).sign() != 0) {
    throw PreconditionError("density_avoid: E must have density zero");
  }
  require_valid(with_constraint(m_cover, Constraint::geometric(eps.pow(m))),
                "density_avoid: input");

  DensityAvoidResult r;
  r.m = m;
  r.e = m_cover.index_set().elements_up_to(m_cover.window_end());
  const std::uint64_t upper = r.e.empty() ? m : m * (r.e.back() + 1);
  for (std::uint64_t j = m; j <= upper; ++j) {
    if (4 * D.count_prefix(j) >= j + 1) {
      throw PreconditionError("density_avoid: card(D ∩ (j+1))/(j+1) reaches 1/4 at j = " +
                              std::to_string(j));
    }
  }

  std::set<std::uint64_t> used;
  r.sandwich_holds = true;
  for (auto e : r.e) {
    const std::uint64_t p = m * (e + 1);
    const std::uint64_t t = largest_free(p - 1, D, used);
    used.insert(t);
    r.t.push_back(t);
    r.sandwich_holds = r.sandwich_holds && p <= 2 * (t + 1) && t + 1 <= p;
  }
  // Any later e >= window + 1 lands at t >= m(window + 2)/2 - 1.
  r.certified_window = m * (m_cover.window_end() + 2) / 2 - 2;
  r.density_bound_holds = true;
  std::vector<std::uint64_t> sorted = r.t;
  std::sort(sorted.begin(), sorted.end());
  std::size_t c = 0;
  std::size_t allowed = 0;
  for (std::uint64_t j = 0; j <= r.certified_window; ++j) {
    while (c < sorted.size() && sorted[c] <= j) ++c;
    while (allowed < r.e.size() && m * r.e[allowed] < 2 * (j + 1)) ++allowed;
    if (c > allowed) {
      r.density_bound_holds = false;
      break;
    }
  }
  r.disjoint_from_D = disjoint_from(r.t, D);
  r.F = OmegaSet::finite(used);

  std::map<std::uint64_t, Interval> js;
  for (std::size_t i = 0; i < r.e.size(); ++i) {
    if (const Interval* iv = m_cover.find(r.e[i])) js.emplace(r.t[i], *iv);
  }
  const std::uint64_t window = used.empty() ? 0 : *used.rbegin();
  r.cover = CoverAttempt(r.F, Constraint::geometric(eps), window, std::move(js));
  r.validation = validate(r.cover);
  return r;
}

}  // namespace microcover
