#pragma once

// JSON forms of the domain objects.
//
//   StepFunction   {"cells": [[value, weight], ...]}
//   Conductor1D    {"A": .., "a": .., "b": .., "B": ..}
//   union          {"omega": [[l, r], ...], "K": [[l, r], ...]}
//   PLFunction     {"omega": [l, r], "breakpoints": [...], "values": [...]}
//   Measure1D      {"atoms": [[x, mass], ...], "density": {"breakpoints": [...], "values": [...]}}
//   report         {"lhs": .., "rhs": .., "holds": .., "margin": ..}
//
// Numbers are written rounded to 12 significant digits.

#include <string>

#include "json.hpp"
#include "lorcap/cap1d.hpp"
#include "lorcap/conductor.hpp"
#include "lorcap/step_function.hpp"
#include "lorcap/twoweight.hpp"

namespace lorcap::io {

using Json = nlohmann::ordered_json;

/// x rounded to 12 significant digits (non-finite values pass through).
double round12(double x);
/// round12 as a JSON number; +inf is written as the string "inf".
Json number(double x);

Json to_json(const StepFunction& f);
Json to_json(const Conductor1D& c);
Json to_json(const ConductorUnion1D& u);
Json to_json(const PLFunction& f);
Json to_json(const Measure1D& m);
Json to_json(const ConductorReport& r);

StepFunction step_function_from_json(const Json& j);
Conductor1D conductor_from_json(const Json& j);
ConductorUnion1D union_from_json(const Json& j);
PLFunction pl_function_from_json(const Json& j);
Measure1D measure_from_json(const Json& j);

/// Reads and parses a file; parse errors carry line and column.
Json read_json_file(const std::string& path);

/// Reports embed their input under "input"; accepting either form lets every
/// emitted report be read back as an input.
const Json& unwrap_input(const Json& j);

}  // namespace lorcap::io
