#include "microcover/json_io.hpp"

#include "microcover/errors.hpp"

namespace microcover {

namespace {

Json sorted(const std::set<std::uint64_t>& s) { return Json(std::vector<std::uint64_t>(s.begin(), s.end())); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw PreconditionError(std::string("json: missing field '") + key + "'");
  }
  return j.at(key);
}

}  // namespace

void to_json(Json& j, const Rational& r) {
  j = Json{{"num", r.numerator_string()}, {"den", r.denominator_string()}};
}

void from_json(const Json& j, Rational& r) {
  if (j.is_string()) {
    r = Rational::parse(j.get<std::string>());
    return;
  }
  if (j.is_number_integer()) {
    r = Rational(j.get<std::int64_t>());
    return;
  }
  const auto num = field(j, "num").get<std::string>();
  const auto den = field(j, "den").get<std::string>();
  r = Rational::parse(num + "/" + den);
}

void to_json(Json& j, const Interval& i) { j = Json{{"lo", i.lo()}, {"hi", i.hi()}}; }

Interval interval_from_json(const Json& j) {
  return Interval(field(j, "lo").get<Rational>(), field(j, "hi").get<Rational>());
}

void to_json(Json& j, const Digit7Stream& d) {
  j = Json{{"m", d.base_exponent()}, {"digits", d.digits()}, {"exact", d.exact()}};
}

void to_json(Json& j, const OmegaSet& s) {
  Json progs = Json::array();
  for (const auto& p : s.progressions()) progs.push_back({{"start", p.start}, {"step", p.step}});
  j = Json{{"finite", sorted(s.finite_part())}, {"progressions", progs},
           {"excluded", sorted(s.excluded())}};
}

void from_json(const Json& j, OmegaSet& s) {
  if (j.is_string()) {
    s = parse_omega_set(j.get<std::string>());
    return;
  }
  std::set<std::uint64_t> finite, excluded;
  std::vector<Progression> progs;
  if (j.contains("finite")) finite = j.at("finite").get<std::set<std::uint64_t>>();
  if (j.contains("excluded")) excluded = j.at("excluded").get<std::set<std::uint64_t>>();
  if (j.contains("progressions")) {
    for (const auto& p : j.at("progressions")) {
      progs.push_back({field(p, "start").get<std::uint64_t>(), field(p, "step").get<std::uint64_t>()});
    }
  }
  s = OmegaSet(std::move(finite), std::move(progs), std::move(excluded));
}

void to_json(Json& j, const Constraint& c) {
  j = Json{{"kind", c.kind == ConstraintKind::kGeometric ? "geometric" : "logarithmic"},
           {"eps", c.eps}};
}

void from_json(const Json& j, Constraint& c) {
  const auto kind = field(j, "kind").get<std::string>();
  const auto eps = field(j, "eps").get<Rational>();
  if (kind == "geometric") {
    c = Constraint::geometric(eps);
  } else if (kind == "logarithmic") {
    c = Constraint::logarithmic(eps);
  } else {
    throw PreconditionError("json: unknown constraint kind '" + kind + "'");
  }
}

Json cover_to_json(const CoverAttempt& c) {
  Json items = Json::array();
  for (const auto& [d, iv] : c.intervals()) items.push_back({{"d", d}, {"J", iv}});
  return Json{{"D", c.index_set()}, {"constraint", c.constraint()},
              {"window_end", c.window_end()}, {"intervals", items}};
}

CoverAttempt cover_from_json(const Json& j) {
  std::map<std::uint64_t, Interval> items;
  for (const auto& it : field(j, "intervals")) {
    const auto d = field(it, "d").get<std::uint64_t>();
    if (!items.emplace(d, interval_from_json(field(it, "J"))).second) {
      throw PreconditionError("json: index " + std::to_string(d) + " listed twice");
    }
  }
  return CoverAttempt(field(j, "D").get<OmegaSet>(), field(j, "constraint").get<Constraint>(),
                      field(j, "window_end").get<std::uint64_t>(), std::move(items));
}

Json validation_to_json(const ValidationReport& r) {
  return Json{{"all_ok", r.all_ok()},
              {"checked", r.status.size()},
              {"violations", r.with_status(ValidationStatus::kViolation)},
              {"indeterminate", r.with_status(ValidationStatus::kIndeterminate)},
              {"precision_bits", r.precision_bits},
              {"precision_cap", r.precision_cap}};
}

Json density_to_json(const DensityReport& r) {
  Json ratios = Json::array();
  for (const auto& [j, v] : r.prefix_ratios) ratios.push_back({{"j", j}, {"ratio", v}});
  Json out{{"window_end", r.window_end},
           {"prefix_ratios", ratios},
           {"lower_estimate", r.lower_estimate},
           {"upper_estimate", r.upper_estimate},
           {"exact", nullptr}};
  if (r.exact_density) out["exact"] = *r.exact_density;
  return out;
}

Json tree_to_json(const SpacingTree& t) {
  Json levels = Json::array();
  for (std::uint32_t i = 0; i <= t.depth(); ++i) levels.push_back(t.level(i));
  return Json{{"m", t.base_exponent()}, {"depth", t.depth()}, {"root", t.root()},
              {"terminal_count", t.terminal_count()}, {"levels", levels}};
}

Json family_to_json(const PlacedFamily& p) {
  Json items = Json::array();
  for (const auto& pl : p.placements()) {
    items.push_back({{"a", pl.a},
                     {"terminal", {{"level", pl.terminal.level}, {"index", pl.terminal.index}}},
                     {"interval", pl.interval}});
  }
  return Json{{"A", p.index_set()}, {"complete_blocks", p.complete_blocks()},
              {"placements", items}};
}

Json step_report_to_json(const StepReport& r) {
  Json small = Json::array();
  for (const auto& c : r.step1_small) {
    small.push_back({{"d", c.d}, {"level", c.level}, {"met", c.met}, {"bound", c.bound},
                     {"ok", c.ok}});
  }
  Json tallies = Json::array();
  for (const auto& t : r.tallies) {
    tallies.push_back({{"shift", t.shift}, {"j", t.j}, {"p", t.p}, {"case", t.case_kind},
                       {"index_reading", t.index_reading}, {"digit_reading", t.digit_reading},
                       {"applicable", t.applicable}, {"count", t.count},
                       {"nodes_disjoint_from_shift", t.nodes_disjoint_from_shift}});
  }
  return Json{
      {"n", r.n},
      {"t_n", r.t_n},
      {"block_size", r.block_size},
      {"step1",
       {{"y_count", r.y_count}, {"y_fraction", r.y_fraction},
        {"bound_holds", r.step1_bound_holds}, {"small", small},
        {"small_sum", r.step1_small_sum}, {"small_sum_below_half", r.step1_small_sum_below_half},
        {"large_max_met", r.step1_large_max_met}, {"large_ok", r.step1_large_ok}}},
      {"step2",
       {{"nontrivial_shifts", r.nontrivial_shifts}, {"s", r.s}, {"delta", r.delta}, {"k", r.k},
        {"alpha", r.alpha}, {"alpha_pow_s", r.alpha_pow_s},
        {"alpha_pow_s_plus_1", r.alpha_pow_s_plus_1}, {"p", r.p}, {"p_max", r.p_max},
        {"p_prime", r.p_prime}, {"tallies", tallies}, {"b_applicable", r.b_applicable},
        {"b_count", r.b_count}, {"b_fraction", r.b_fraction},
        {"b_fraction_matches_alpha", r.b_fraction_matches_alpha},
        {"a_prime_count", r.a_prime_count}, {"b_subset_a_prime", r.b_subset_a_prime}}},
      {"step3",
       {{"F", r.F}, {"N", r.N}, {"applicable", r.step3_applicable},
        {"inclusion", r.step3_inclusion}}},
      {"z_count", r.z_count},
      {"z_fraction", r.z_fraction}};
}

Json witness_to_json(const Witness& w) {
  Json checks = Json::array();
  for (const auto& c : w.checks) checks.push_back({{"a", c.a}, {"d", c.d}, {"disjoint", c.disjoint}});
  return Json{{"witness", w.a}, {"interval", w.interval}, {"checks", checks},
              {"candidates_scanned", w.candidates_scanned}};
}

Json x_to_json(const MicroXApprox& x) {
  Json levels = Json::array();
  for (std::uint32_t i = 0; i <= x.depth(); ++i) {
    Json nodes = Json::array();
    for (const auto& [j, node] : x.level(i)) {
      nodes.push_back({{"j", j}, {"interval", node.interval}, {"parent", node.parent}});
    }
    levels.push_back(nodes);
  }
  Json ledger = Json::array();
  for (const auto& t : x.truncation()) {
    ledger.push_back({{"level", t.level}, {"first_missing", t.first_missing},
                      {"missing_mass_bound", t.missing_mass_bound},
                      {"childless_parents", t.childless_parents}});
  }
  return Json{{"depth", x.depth()}, {"cutoff", x.cutoff()}, {"levels", levels},
              {"truncation", ledger}};
}

Json chain_to_json(const WitnessChain& c) {
  Json chain = Json::array();
  Json certs = Json::array();
  for (const auto& l : c.links) {
    chain.push_back({{"n", l.n}, {"j", l.j}, {"interval", l.interval}});
    Json cert = witness_to_json(l.certificate);
    cert["n"] = l.n;
    certs.push_back(cert);
  }
  Json telemetry = Json::array();
  for (const auto& t : c.telemetry) {
    telemetry.push_back({{"n", t.n}, {"candidates", t.candidates}, {"threshold", t.threshold},
                         {"d_lower_estimate", t.d_lower_estimate},
                         {"hypothesis_met", t.hypothesis_met}});
  }
  return Json{{"chain", chain}, {"certificates", certs}, {"telemetry", telemetry}};
}

Json shift_experiment_to_json(const ShiftExperiment& e) {
  Json shifts = Json::array();
  for (const auto& s : e.shifts) {
    Json phi = Json::array();
    for (const auto& [a, k] : s.phi) phi.push_back({a, k});
    shifts.push_back({{"value", s.value},
                      {"digits", s.digits},
                      {"Y", sorted(s.Y)},
                      {"Z", sorted(s.Z)},
                      {"Z_prime", sorted(s.Z_prime)},
                      {"phi", phi},
                      {"premise", s.premise},
                      {"premise_failures", s.premise_failures},
                      {"phi_well_defined", s.phi_well_defined},
                      {"phi_injective", s.phi_injective},
                      {"phi_bounded", s.phi_bounded},
                      {"z_lower_estimate", s.z_lower_estimate},
                      {"z_prime_lower_estimate", s.z_prime_lower_estimate}});
  }
  Json pairs = Json::array();
  for (const auto& p : e.pairs) {
    pairs.push_back({{"i", p.i}, {"j", p.j}, {"difference_digits", p.difference_digits},
                     {"non_degenerate", p.non_degenerate}, {"z_prime_disjoint", p.z_prime_disjoint}});
  }
  return Json{{"n", e.n},
              {"m", e.m},
              {"window", e.window},
              {"density_A", e.density_A},
              {"shifts", shifts},
              {"pairs", pairs},
              {"premise_holds", e.premise_holds},
              {"z_prime_pairwise_disjoint", e.z_prime_pairwise_disjoint},
              {"phi_ok", e.phi_ok},
              {"z_last_equals_y", e.z_last_equals_y},
              {"verdict", e.verdict()}};
}

Json ln_avoid_to_json(const LnAvoidResult& r) {
  return Json{{"k", r.k},
              {"m", r.m},
              {"t", r.t},
              {"E", r.E},
              {"cover", cover_to_json(r.cover)},
              {"sandwich_holds", r.sandwich_holds},
              {"certified_window", r.certified_window},
              {"density_bound_holds", r.density_bound_holds},
              {"disjoint_from_D", r.disjoint_from_D},
              {"validation", validation_to_json(r.validation)}};
}

Json density_avoid_to_json(const DensityAvoidResult& r) {
  return Json{{"m", r.m},
              {"e", r.e},
              {"t", r.t},
              {"F", r.F},
              {"cover", cover_to_json(r.cover)},
              {"sandwich_holds", r.sandwich_holds},
              {"certified_window", r.certified_window},
              {"density_bound_holds", r.density_bound_holds},
              {"disjoint_from_D", r.disjoint_from_D},
              {"validation", validation_to_json(r.validation)}};
}

}  // namespace microcover
