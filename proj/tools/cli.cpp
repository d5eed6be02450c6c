#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "microcover/constructions.hpp"
#include "microcover/errors.hpp"
#include "microcover/json_io.hpp"
#include "microcover/rng.hpp"

namespace microcover::cli {

namespace {

constexpr const char* kSchema = "microcover/1";
constexpr const char* kVersion = "0.1.0";

struct Common {
  std::uint64_t seed = 0;
  unsigned threads = 1;
  unsigned precision_cap = 256;
  std::string out;
};

struct Outcome {
  Json config;
  Json window;
  Json result;
  int code = kOk;
};

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw PreconditionError("'" + path + "' is not valid JSON: " + e.what());
  }
}

// A cover file may hold a bare cover or a full artifact whose result has one.
CoverAttempt read_cover(const std::string& path) {
  const Json j = read_json(path);
  if (j.contains("schema") && j.contains("result")) {
    const Json& r = j.at("result");
    return cover_from_json(r.contains("cover") ? r.at("cover") : r);
  }
  return cover_from_json(j);
}

Constraint make_constraint(const std::string& kind, const Rational& eps) {
  if (kind == "geometric") return Constraint::geometric(eps);
  if (kind == "logarithmic") return Constraint::logarithmic(eps);
  throw PreconditionError("constraint must be 'geometric' or 'logarithmic', got '" + kind + "'");
}

std::shared_ptr<const PlacedFamily> omega_family(std::uint64_t window) {
  std::uint32_t depth = 0;
  while (block_start(depth) + 1 < window + 2) ++depth;
  auto tree = std::make_shared<const SpacingTree>(
      build_k_hierarchy(Interval(Rational(0), Rational(1)), 0, depth));
  return std::make_shared<const PlacedFamily>(
      place_intervals(tree, parse_omega_set("(w+1)"), tree->terminal_count()));
}

AdversaryStrategy strategy_for(const std::string& name, std::uint64_t trial) {
  if (name == "cycle") return static_cast<AdversaryStrategy>(trial % 3);
  return parse_strategy(name);
}

// ---------------------------------------------------------------------------

struct SpacingOpts {
  std::uint64_t m = 0;
  std::uint32_t depth = 2;
  std::string A = "(w+1)";
  std::optional<std::size_t> count;
  std::string lo = "0";
  std::optional<std::uint32_t> block;
  std::string cover;
  std::vector<std::string> shifts;
  std::string strategy = "greedy-hit";
  std::string budget = "sqrt";
  std::string delta = "1/2";
  std::size_t prefix = 64;
};

Outcome cmd_spacing(const SpacingOpts& o, const Common& c) {
  Outcome out;
  out.config = {{"m", o.m}, {"depth", o.depth}, {"A", o.A}, {"lo", o.lo}, {"count", nullptr},
                {"block", nullptr}, {"cover", o.cover}, {"shifts", o.shifts},
                {"strategy", o.strategy}, {"budget", o.budget}, {"delta", o.delta},
                {"prefix", o.prefix}};
  if (o.count) out.config["count"] = *o.count;
  if (o.block) out.config["block"] = *o.block;

  const Rational lo = Rational::parse(o.lo);
  auto tree = std::make_shared<const SpacingTree>(build_k_hierarchy(
      Interval(lo, lo + Rational::inverse_power_of_seven(o.m)), o.m, o.depth));
  const PlacedFamily placed =
      place_intervals(tree, parse_omega_set(o.A), o.count.value_or(tree->terminal_count()));
  out.result = {{"tree", tree_to_json(*tree)}, {"family", family_to_json(placed)}};
  out.window = placed.max_index();
  if (!o.block) return out;

  std::optional<CoverAttempt> cover;
  if (!o.cover.empty()) {
    cover = read_cover(o.cover);
  } else {
    AdversaryParams p;
    p.strategy = parse_strategy(o.strategy);
    p.window_end = placed.max_index();
    p.min_index = o.m;
    p.budget = Budget::parse(o.budget);
    p.targets = placed.keyed(placed.max_index());
    p.tree = tree;
    p.region = tree->root();
    cover = adversary_generate(p, derive_seed(c.seed, 0));
  }
  std::vector<Shift> shifts;
  for (const auto& s : o.shifts) shifts.push_back(make_shift(Rational::parse(s), o.m, o.prefix));
  DiagnosticsOptions opts;
  opts.delta = Rational::parse(o.delta);
  const auto report = step_diagnostics(placed, *cover, shifts, *o.block, opts);
  const auto y = compute_Y(placed, *cover, cover->window_end());
  out.result["cover"] = cover_to_json(*cover);
  out.result["Y"] = std::vector<std::uint64_t>(y.begin(), y.end());
  out.result["steps"] = step_report_to_json(report);
  out.code = report.step1_bound_holds ? kOk : kFailure;
  return out;
}

// ---------------------------------------------------------------------------

struct ChallengeOpts {
  std::string mode = "corollary";
  std::uint64_t trials = 100;
  std::string strategy = "cycle";
  std::string budget = "sqrt";
  std::uint64_t window = 2000;
  std::uint32_t depth = 3;
};

Outcome cmd_challenge(const ChallengeOpts& o, const Common& c) {
  if (o.mode != "corollary" && o.mode != "chain") {
    throw PreconditionError("mode must be 'corollary' or 'chain'");
  }
  Outcome out;
  out.config = {{"mode", o.mode}, {"trials", o.trials}, {"strategy", o.strategy},
                {"budget", o.budget}, {"window", o.window}, {"depth", o.depth}};
  out.window = o.window;
  const Budget budget = Budget::parse(o.budget);
  Json trials = Json::array();
  std::uint64_t met = 0, successes = 0, insufficient = 0, replay_failures = 0;

  if (o.mode == "corollary") {
    const auto placed = omega_family(o.window);
    const Rational threshold = density_exact(placed->index_set()) / Rational(4);
    for (std::uint64_t i = 0; i < o.trials; ++i) {
      const std::uint64_t sub = derive_seed(c.seed, i);
      AdversaryParams p;
      p.strategy = strategy_for(o.strategy, i);
      p.window_end = o.window;
      p.budget = budget;
      p.targets = placed->keyed(o.window + 1);
      p.tree = placed->tree_ptr();
      const CoverAttempt cover = adversary_generate(p, sub);
      const Rational estimate =
          density_estimate(cover.index_set(), o.window, std::min<std::uint64_t>(o.window, 64))
              .lower_estimate;
      Json t{{"trial", i}, {"seed", sub}, {"strategy", to_string(p.strategy)},
             {"d_lower_estimate", estimate}, {"threshold", threshold},
             {"hypothesis_met", estimate < threshold}, {"witness", nullptr}};
      try {
        const auto w = corollary_witness(*placed, cover);
        t["witness"] = w.witness.a;
        t["certificate_size"] = w.witness.checks.size();
        t["replayed"] = replay_witness(w.witness, cover);
        t["status"] = "witness";
        if (!replay_witness(w.witness, cover)) ++replay_failures;
      } catch (const WindowInsufficientError& e) {
        t["status"] = "window-insufficient";
        t["message"] = e.what();
      }
      if (estimate < threshold) {
        ++met;
        if (t["status"] == "witness") {
          ++successes;
        } else {
          ++insufficient;
        }
      } else {
        t["status"] = "hypothesis-not-met";
      }
      trials.push_back(t);
    }
  } else {
    const MicroXApprox x = build_X(o.depth, o.window, c.threads);
    const auto targets = chain_targets(x);
    for (std::uint64_t i = 0; i < o.trials; ++i) {
      const std::uint64_t sub = derive_seed(c.seed, i);
      AdversaryParams p;
      p.strategy = strategy_for(o.strategy, i);
      p.window_end = o.window;
      p.budget = budget;
      p.targets = targets;
      const CoverAttempt cover = adversary_generate(p, sub);
      const auto outcome = try_extract_uncovered_point(x, cover, o.depth);
      const bool replayed = replay_chain(outcome.chain, x, cover);
      bool hypothesis = true;
      std::vector<std::uint64_t> js;
      for (const auto& l : outcome.chain.links) js.push_back(l.j);
      for (const auto& tel : outcome.chain.telemetry) hypothesis = hypothesis && tel.hypothesis_met;
      Json t{{"trial", i}, {"seed", sub}, {"strategy", to_string(p.strategy)},
             {"complete", outcome.complete}, {"chain", js}, {"replayed", replayed},
             {"hypothesis_met", hypothesis}, {"failed_level", nullptr},
             {"status", outcome.complete ? "chain" : "window-insufficient"}};
      if (outcome.failed_level) {
        t["failed_level"] = *outcome.failed_level;
        t["message"] = outcome.message;
      }
      if (!replayed) ++replay_failures;
      ++met;
      if (outcome.complete) {
        ++successes;
      } else {
        ++insufficient;
      }
      trials.push_back(t);
    }
  }
  out.result = {{"trials", trials},
                {"tally",
                 {{"trials", o.trials}, {"hypothesis_met", met}, {"successes", successes},
                  {"window_insufficient", insufficient}, {"replay_failures", replay_failures}}}};
  if (replay_failures) {
    out.code = kFailure;
  } else if (insufficient) {
    out.code = kWindow;
  }
  return out;
}

// ---------------------------------------------------------------------------

struct DensityOpts {
  std::string set;
  std::uint64_t window = 1 << 20;
  std::uint64_t samples = 64;
};

Outcome cmd_density(const DensityOpts& o, const Common&) {
  Outcome out;
  out.config = {{"set", o.set}, {"window", o.window}, {"samples", o.samples}};
  out.window = o.window;
  const OmegaSet s = parse_omega_set(o.set);
  out.result = {{"set", s},
                {"count", s.count_prefix(o.window)},
                {"report", density_to_json(density_estimate(s, o.window, o.samples))}};
  return out;
}

// ---------------------------------------------------------------------------

struct CheckOpts {
  std::string cover;
  std::string constraint;
  std::string eps;
};

int validation_code(const ValidationReport& r) {
  if (!r.with_status(ValidationStatus::kViolation).empty()) return kFailure;
  return r.any_indeterminate() ? kIndeterminate : kOk;
}

Outcome cmd_check_cover(const CheckOpts& o, const Common& c) {
  Outcome out;
  out.config = {{"cover", o.cover}, {"constraint", o.constraint}, {"eps", o.eps},
                {"precision_cap", c.precision_cap}};
  CoverAttempt cover = read_cover(o.cover);
  if (!o.constraint.empty() || !o.eps.empty()) {
    const Constraint base = cover.constraint();
    const std::string kind = o.constraint.empty()
                                 ? (base.kind == ConstraintKind::kGeometric ? "geometric"
                                                                            : "logarithmic")
                                 : o.constraint;
    cover = CoverAttempt(cover.index_set(),
                         make_constraint(kind, o.eps.empty() ? base.eps : Rational::parse(o.eps)),
                         cover.window_end(), cover.intervals());
  }
  out.window = cover.window_end();
  const auto report = validate(cover, c.precision_cap);
  out.result = {{"constraint", cover.constraint()}, {"validation", validation_to_json(report)}};
  out.code = validation_code(report);
  return out;
}

// ---------------------------------------------------------------------------

struct BuildXOpts {
  std::uint32_t depth = 2;
  std::uint64_t cutoff = 64;
  std::string verify_eps;
  std::optional<std::uint32_t> verify_level;
};

Outcome cmd_build_x(const BuildXOpts& o, const Common& c) {
  Outcome out;
  out.config = {{"depth", o.depth}, {"cutoff", o.cutoff}, {"verify_eps", o.verify_eps},
                {"verify_level", nullptr}};
  if (o.verify_level) out.config["verify_level"] = *o.verify_level;
  out.window = o.cutoff;
  const MicroXApprox x = build_X(o.depth, o.cutoff, c.threads);
  out.result = x_to_json(x);
  if (o.verify_level) {
    const auto check = verify_microscopic(
        x, Rational::parse(o.verify_eps.empty() ? "1/7" : o.verify_eps), *o.verify_level);
    out.result["microscopic"] = {{"level", check.level},
                                 {"cover", cover_to_json(check.cover)},
                                 {"validation", validation_to_json(check.validation)},
                                 {"covered", check.coverage.covered}};
    out.code = check.validation.all_ok() && check.coverage.covered ? kOk : kFailure;
  }
  return out;
}

// ---------------------------------------------------------------------------

struct ReindexOpts {
  std::string kind;
  std::vector<std::string> covers;
  std::uint64_t k = 1;
  std::string eps = "1/7";
  std::string avoid = "{}";
  std::size_t count = 8;
  std::optional<std::uint64_t> m;
};

Outcome cmd_reindex(const ReindexOpts& o, const Common& c) {
  Outcome out;
  out.config = {{"kind", o.kind}, {"covers", o.covers}, {"k", o.k}, {"eps", o.eps},
                {"avoid", o.avoid}, {"count", o.count}, {"m", nullptr}};
  if (o.m) out.config["m"] = *o.m;
  const Rational eps = Rational::parse(o.eps);
  auto need_covers = [&](bool exactly_one) {
    if (o.covers.empty() || (exactly_one && o.covers.size() != 1)) {
      throw PreconditionError("reindex " + o.kind + ": expected " +
                              (exactly_one ? std::string("one --cover") : "at least one --cover"));
    }
  };
  if (o.kind == "thin") {
    need_covers(true);
    const auto result = thin_reindex(read_cover(o.covers[0]), o.k, eps);
    const auto report = validate(result, c.precision_cap);
    out.result = {{"cover", cover_to_json(result)},
                  {"density", density_exact(result.index_set())},
                  {"validation", validation_to_json(report)}};
    out.window = result.window_end();
    out.code = validation_code(report);
  } else if (o.kind == "union") {
    need_covers(false);
    std::vector<CoverAttempt> covers;
    for (const auto& p : o.covers) covers.push_back(read_cover(p));
    const auto u = union_reindex_Mprime(covers, eps);
    out.result = {{"cover", cover_to_json(u.cover)}, {"shifted_sets", u.shifted_sets},
                  {"pairwise_disjoint", u.pairwise_disjoint},
                  {"validation", validation_to_json(u.validation)}};
    out.window = u.cover.window_end();
    out.code = u.pairwise_disjoint ? validation_code(u.validation) : kFailure;
  } else if (o.kind == "ln-avoid") {
    const auto r = reindex_ln_avoid(canonical_ln_cover, parse_omega_set(o.avoid), eps, o.count, o.m);
    out.result = ln_avoid_to_json(r);
    out.window = r.certified_window;
    out.code = validation_code(r.validation);
    if (!(r.sandwich_holds && r.density_bound_holds && r.disjoint_from_D)) out.code = kFailure;
  } else if (o.kind == "density-avoid") {
    need_covers(true);
    const auto r = reindex_density_avoid(read_cover(o.covers[0]), parse_omega_set(o.avoid), eps,
                                         o.m.value_or(4));
    out.result = density_avoid_to_json(r);
    out.window = r.certified_window;
    out.code = validation_code(r.validation);
    if (!(r.sandwich_holds && r.density_bound_holds && r.disjoint_from_D)) out.code = kFailure;
  } else {
    throw PreconditionError("reindex kind must be thin, union, ln-avoid or density-avoid");
  }
  return out;
}

// ---------------------------------------------------------------------------

struct ChainOpts {
  std::uint32_t depth = 3;
  std::uint64_t window = 2000;
  std::string cover;
  std::string strategy = "greedy-hit";
  std::string budget = "sqrt";
};

Outcome cmd_chain(const ChainOpts& o, const Common& c) {
  Outcome out;
  out.config = {{"depth", o.depth}, {"window", o.window}, {"cover", o.cover},
                {"strategy", o.strategy}, {"budget", o.budget}};
  out.window = o.window;
  const MicroXApprox x = build_X(o.depth, o.window, c.threads);
  CoverAttempt cover = o.cover.empty() ? CoverAttempt(OmegaSet::empty(), Constraint{}, 0, {})
                                       : read_cover(o.cover);
  if (o.cover.empty()) {
    AdversaryParams p;
    p.strategy = parse_strategy(o.strategy);
    p.window_end = o.window;
    p.budget = Budget::parse(o.budget);
    p.targets = chain_targets(x);
    cover = adversary_generate(p, derive_seed(c.seed, 0));
  }
  const auto outcome = try_extract_uncovered_point(x, cover, o.depth);
  const bool replayed = replay_chain(outcome.chain, x, cover);
  out.result = chain_to_json(outcome.chain);
  out.result["complete"] = outcome.complete;
  out.result["replayed"] = replayed;
  out.result["failed_level"] = nullptr;
  if (outcome.failed_level) {
    out.result["failed_level"] = *outcome.failed_level;
    out.result["message"] = outcome.message;
  }
  if (o.cover.empty()) out.result["cover"] = cover_to_json(cover);
  out.code = !replayed ? kFailure : outcome.complete ? kOk : kWindow;
  return out;
}

// ---------------------------------------------------------------------------

struct ShiftOpts {
  std::uint32_t n = 0;
  std::uint64_t m = 2;
  std::uint64_t window = 3000;
  std::vector<std::string> shifts;
  std::size_t count = 4;
  std::int64_t prime = 1000003;
  std::string cover;
  std::size_t prefix = 64;
};

Outcome cmd_shifts(const ShiftOpts& o, const Common& c) {
  Outcome out;
  out.config = {{"n", o.n}, {"m", o.m}, {"window", o.window}, {"shifts", o.shifts},
                {"count", o.count}, {"prime", o.prime}, {"cover", o.cover}, {"prefix", o.prefix}};
  out.window = o.window;
  std::vector<Rational> shifts;
  if (!o.shifts.empty()) {
    for (const auto& s : o.shifts) shifts.push_back(Rational::parse(s));
  } else {
    if (o.prime < 2 || o.count == 0 || static_cast<std::uint64_t>(o.prime) <= o.count) {
      throw PreconditionError("shifts: need a prime larger than the shift count");
    }
    Rng rng(derive_seed(c.seed, 1));
    std::set<std::int64_t> us;
    while (us.size() < o.count) {
      us.insert(1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(o.prime - 1))));
    }
    for (auto u : us) shifts.push_back(Rational(u, o.prime));
  }
  const MicroXApprox x = build_X(o.n + 1, o.window, c.threads);
  const CoverAttempt cover = o.cover.empty()
                                 ? shift_target_cover(x, shifts, o.n, o.m, o.window, c.seed)
                                 : read_cover(o.cover);
  const auto e = shift_family_experiment(x, shifts, cover, o.n, o.m, o.window, o.prefix, c.threads);
  out.result = shift_experiment_to_json(e);
  out.code = e.verdict() == "violated" ? kFailure : kOk;
  return out;
}

// ---------------------------------------------------------------------------

struct AdversaryOpts {
  std::string strategy = "greedy-hit";
  std::string budget = "sqrt";
  std::uint64_t window = 200;
  std::string constraint = "geometric";
  std::string eps = "1/7";
  std::string targets = "omega";
  std::uint32_t depth = 2;
};

Outcome cmd_adversary(const AdversaryOpts& o, const Common& c) {
  Outcome out;
  out.config = {{"strategy", o.strategy}, {"budget", o.budget}, {"window", o.window},
                {"constraint", o.constraint}, {"eps", o.eps}, {"targets", o.targets},
                {"depth", o.depth}};
  out.window = o.window;
  AdversaryParams p;
  p.strategy = parse_strategy(o.strategy);
  p.window_end = o.window;
  p.budget = Budget::parse(o.budget);
  p.constraint = make_constraint(o.constraint, Rational::parse(o.eps));
  if (o.targets == "omega") {
    const auto placed = omega_family(o.window);
    p.targets = placed->keyed(o.window + 1);
    p.tree = placed->tree_ptr();
  } else if (o.targets == "x") {
    p.targets = chain_targets(build_X(o.depth, std::max<std::uint64_t>(o.window, 1ULL << o.depth),
                                      c.threads));
  } else {
    throw PreconditionError("targets must be 'omega' or 'x'");
  }
  const CoverAttempt cover = adversary_generate(p, derive_seed(c.seed, 0));
  out.result = {{"cover", cover_to_json(cover)},
                {"validation", validation_to_json(validate(cover, c.precision_cap))}};
  return out;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Master seed");
  sub->add_option("--threads", c.threads, "Worker threads (never changes the output)")
      ->check(CLI::Range(1u, 256u));
  sub->add_option("--precision-cap", c.precision_cap, "MPFR precision cap in bits")
      ->check(CLI::Range(64u, 1u << 16));
  sub->add_option("--out", c.out, "Write the artifact here instead of stdout");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact experiments on microscopic sets and their covers", "microcover"};
  app.require_subcommand(1);
  Common common;

  SpacingOpts spacing;
  auto* s = app.add_subcommand("spacing", "Build a K-hierarchy and place a family");
  s->add_option("--m", spacing.m, "Base exponent (root length 7^-m)");
  s->add_option("--depth", spacing.depth, "Hierarchy depth");
  s->add_option("--A", spacing.A, "Index set, e.g. \"(w+1)\" or \"2+4w\"");
  s->add_option("--count", spacing.count, "Number of intervals to place");
  s->add_option("--lo", spacing.lo, "Left end of the root interval");
  s->add_option("--block", spacing.block, "Run step diagnostics on block L_n");
  s->add_option("--cover", spacing.cover, "Cover file for the diagnostics");
  s->add_option("--shift", spacing.shifts, "Translation (repeatable)");
  s->add_option("--strategy", spacing.strategy, "Adversary when no cover file is given");
  s->add_option("--budget", spacing.budget, "Adversary budget");
  s->add_option("--delta", spacing.delta, "Step 2 delta");
  s->add_option("--prefix", spacing.prefix, "Digits kept per shift");
  add_common(s, common);

  ChallengeOpts challenge;
  auto* ch = app.add_subcommand("challenge", "Seeded adversary trials");
  ch->add_option("--mode", challenge.mode, "corollary or chain");
  ch->add_option("--trials", challenge.trials, "Number of trials");
  ch->add_option("--strategy", challenge.strategy, "greedy-hit, density-budget, random or cycle");
  ch->add_option("--budget", challenge.budget, "unbounded, sqrt or p/q[+c]");
  ch->add_option("--window", challenge.window, "Window end");
  ch->add_option("--depth", challenge.depth, "Chain depth (chain mode)");
  add_common(ch, common);

  DensityOpts density;
  auto* d = app.add_subcommand("density", "Exact density and prefix estimates");
  d->add_option("--set", density.set, "Index set")->required();
  d->add_option("--window", density.window, "Largest j sampled");
  d->add_option("--samples", density.samples, "Grid points on [window/2, window]");
  add_common(d, common);

  CheckOpts check;
  auto* cc = app.add_subcommand("check-cover", "Validate a cover file");
  cc->add_option("--cover", check.cover, "Cover JSON")->required();
  cc->add_option("--constraint", check.constraint, "Override: geometric or logarithmic");
  cc->add_option("--eps", check.eps, "Override eps");
  add_common(cc, common);

  BuildXOpts bx;
  auto* b = app.add_subcommand("build-x", "Materialize the nested set X");
  b->add_option("--depth", bx.depth, "Deepest level");
  b->add_option("--cutoff", bx.cutoff, "Largest index kept");
  b->add_option("--verify-eps", bx.verify_eps, "eps' for the microscopic check");
  b->add_option("--verify-level", bx.verify_level, "Level m for the microscopic check");
  add_common(b, common);

  ReindexOpts reindex;
  auto* r = app.add_subcommand("reindex", "Re-index covers");
  r->add_option("--kind", reindex.kind, "thin, union, ln-avoid or density-avoid")->required();
  r->add_option("--cover", reindex.covers, "Input cover file (repeatable for union)");
  r->add_option("--k", reindex.k, "Thinning factor");
  r->add_option("--eps", reindex.eps, "Target eps");
  r->add_option("--avoid", reindex.avoid, "Index set to avoid");
  r->add_option("--count", reindex.count, "Number of t_i (ln-avoid)");
  r->add_option("--m", reindex.m, "Exponent m");
  add_common(r, common);

  ChainOpts chain;
  auto* cn = app.add_subcommand("chain", "Extract an uncovered point of X");
  cn->add_option("--depth", chain.depth, "Target depth");
  cn->add_option("--window", chain.window, "Index cutoff and adversary window");
  cn->add_option("--cover", chain.cover, "Cover file (default: seeded adversary)");
  cn->add_option("--strategy", chain.strategy, "Adversary strategy");
  cn->add_option("--budget", chain.budget, "Adversary budget");
  add_common(cn, common);

  ShiftOpts shift;
  auto* sh = app.add_subcommand("shifts", "Shifted-family disjointness experiment");
  sh->add_option("--n", shift.n, "Level n of the parent interval");
  sh->add_option("--m", shift.m, "Index m of the parent interval");
  sh->add_option("--window", shift.window, "Window end");
  sh->add_option("--shift", shift.shifts, "Shift value (repeatable)");
  sh->add_option("--count", shift.count, "Number of random shifts u/P");
  sh->add_option("--prime", shift.prime, "Denominator P of random shifts");
  sh->add_option("--cover", shift.cover, "Cover file (default: premise-satisfying adversary)");
  sh->add_option("--prefix", shift.prefix, "Digits kept per shift");
  add_common(sh, common);

  AdversaryOpts adv;
  auto* a = app.add_subcommand("adversary", "Generate a seeded cover");
  a->add_option("--strategy", adv.strategy, "greedy-hit, density-budget or random");
  a->add_option("--budget", adv.budget, "unbounded, sqrt or p/q[+c]");
  a->add_option("--window", adv.window, "Window end");
  a->add_option("--constraint", adv.constraint, "geometric or logarithmic");
  a->add_option("--eps", adv.eps, "eps");
  a->add_option("--targets", adv.targets, "omega or x");
  a->add_option("--depth", adv.depth, "Depth of X for --targets x");
  add_common(a, common);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kFailure;
  }

  std::string command;
  try {
    Outcome o;
    if (s->parsed()) {
      command = "spacing";
      o = cmd_spacing(spacing, common);
    } else if (ch->parsed()) {
      command = "challenge";
      o = cmd_challenge(challenge, common);
    } else if (d->parsed()) {
      command = "density";
      o = cmd_density(density, common);
    } else if (cc->parsed()) {
      command = "check-cover";
      o = cmd_check_cover(check, common);
    } else if (b->parsed()) {
      command = "build-x";
      o = cmd_build_x(bx, common);
    } else if (r->parsed()) {
      command = "reindex";
      o = cmd_reindex(reindex, common);
    } else if (cn->parsed()) {
      command = "chain";
      o = cmd_chain(chain, common);
    } else if (sh->parsed()) {
      command = "shifts";
      o = cmd_shifts(shift, common);
    } else {
      command = "adversary";
      o = cmd_adversary(adv, common);
    }
    const Json doc{{"schema", kSchema}, {"version", kVersion}, {"command", command},
                   {"config", o.config}, {"seed", common.seed}, {"window", o.window},
                   {"result", o.result}, {"exit_code", o.code}};
    const std::string text = doc.dump(2) + "\n";
    if (common.out.empty()) {
      out << text;
    } else {
      std::ofstream file(common.out, std::ios::binary);
      if (!file) throw PreconditionError("cannot write '" + common.out + "'");
      file << text;
    }
    return o.code;
  } catch (const WindowInsufficientError& e) {
    err << command << ": window insufficient (level " << e.level() << "): " << e.what() << "\n";
    return kWindow;
  } catch (const std::exception& e) {
    err << command << ": " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace microcover::cli
