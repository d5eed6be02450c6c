#pragma once

// JSON encodings shared by the CLI and the tests. Objects use nlohmann's
// sorted-key json, so dumps are byte-stable for equal values.

#include <json.hpp>

#include "microcover/constructions.hpp"
#include "microcover/cover_attempt.hpp"
#include "microcover/covers.hpp"
#include "microcover/digits.hpp"
#include "microcover/omega_set.hpp"
#include "microcover/spacing.hpp"

namespace microcover {

using Json = nlohmann::json;

void to_json(Json& j, const Rational& r);
void from_json(const Json& j, Rational& r);
void to_json(Json& j, const Interval& i);
void to_json(Json& j, const Digit7Stream& d);
void to_json(Json& j, const OmegaSet& s);
void from_json(const Json& j, OmegaSet& s);
void to_json(Json& j, const Constraint& c);
void from_json(const Json& j, Constraint& c);

Interval interval_from_json(const Json& j);

Json cover_to_json(const CoverAttempt& c);
CoverAttempt cover_from_json(const Json& j);

// Per-index statuses grouped by outcome, plus precision telemetry.
Json validation_to_json(const ValidationReport& r);
Json density_to_json(const DensityReport& r);

Json tree_to_json(const SpacingTree& t);
Json family_to_json(const PlacedFamily& p);
Json step_report_to_json(const StepReport& r);

Json witness_to_json(const Witness& w);
Json x_to_json(const MicroXApprox& x);
Json chain_to_json(const WitnessChain& c);
Json shift_experiment_to_json(const ShiftExperiment& e);
Json ln_avoid_to_json(const LnAvoidResult& r);
Json density_avoid_to_json(const DensityAvoidResult& r);

}  // namespace microcover
