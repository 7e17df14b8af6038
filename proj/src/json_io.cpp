#include "lorcap/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "lorcap/error.hpp"

namespace lorcap::io {

double round12(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

Json number(double x) {
  if (x == std::numeric_limits<double>::infinity()) return "inf";
  return round12(x);
}

namespace {

Json pair_array(double a, double b) { return Json::array({number(a), number(b)}); }

Json intervals(const std::vector<Interval>& v) {
  Json out = Json::array();
  for (const Interval& i : v) out.push_back(pair_array(i.left, i.right));
  return out;
}

Json numbers(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw StructuralError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double as_number(const Json& j, const std::string& what) {
  if (!j.is_number()) throw StructuralError(what + " must be a number");
  return j.get<double>();
}

Interval as_interval(const Json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2) throw StructuralError(what + " must be a [left, right] pair");
  return {as_number(j[0], what), as_number(j[1], what)};
}

std::vector<Interval> as_intervals(const Json& j, const std::string& what) {
  if (!j.is_array()) throw StructuralError(what + " must be an array of [left, right] pairs");
  std::vector<Interval> out;
  for (const Json& e : j) out.push_back(as_interval(e, what));
  return out;
}

std::vector<double> as_numbers(const Json& j, const std::string& what) {
  if (!j.is_array()) throw StructuralError(what + " must be an array of numbers");
  std::vector<double> out;
  for (const Json& e : j) out.push_back(as_number(e, what));
  return out;
}

}  // namespace

Json to_json(const StepFunction& f) {
  Json cells = Json::array();
  for (const Cell& c : f.cells()) cells.push_back(pair_array(c.value, c.weight));
  return Json{{"cells", cells}};
}

Json to_json(const Conductor1D& c) {
  return Json{{"A", number(c.outer_left())},
              {"a", number(c.inner_left())},
              {"b", number(c.inner_right())},
              {"B", number(c.outer_right())}};
}

Json to_json(const ConductorUnion1D& u) {
  return Json{{"omega", intervals(u.omega())}, {"K", intervals(u.compact())}};
}

Json to_json(const PLFunction& f) {
  return Json{{"omega", pair_array(f.omega().left, f.omega().right)},
              {"breakpoints", numbers(f.breakpoints())},
              {"values", numbers(f.values())}};
}

Json to_json(const Measure1D& m) {
  Json atoms = Json::array();
  for (const auto& a : m.atoms()) atoms.push_back(pair_array(a.location, a.mass));
  return Json{{"atoms", atoms},
              {"density", {{"breakpoints", numbers(m.density_breakpoints())},
                           {"values", numbers(m.density_values())}}}};
}

Json to_json(const ConductorReport& r) {
  Json out{{"lhs", number(r.lhs)},
           {"rhs", number(r.rhs)},
           {"holds", r.holds},
           {"margin", number(r.margin)}};
  out["gradient_norm"] = number(r.gradient_norm);
  out["refined"] = r.refined;
  out["warnings"] = r.warnings;
  return out;
}

StepFunction step_function_from_json(const Json& j) {
  const Json& cells = field(j, "cells");
  if (!cells.is_array()) throw StructuralError("\"cells\" must be an array");
  std::vector<Cell> out;
  for (const Json& c : cells) {
    if (!c.is_array() || c.size() != 2) throw StructuralError("each cell must be [value, weight]");
    out.push_back({as_number(c[0], "cell value"), as_number(c[1], "cell weight")});
  }
  return StepFunction(std::move(out));
}

Conductor1D conductor_from_json(const Json& j) {
  return Conductor1D(as_number(field(j, "A"), "A"), as_number(field(j, "a"), "a"),
                     as_number(field(j, "b"), "b"), as_number(field(j, "B"), "B"));
}

ConductorUnion1D union_from_json(const Json& j) {
  return ConductorUnion1D(as_intervals(field(j, "omega"), "omega"), as_intervals(field(j, "K"), "K"));
}

PLFunction pl_function_from_json(const Json& j) {
  return PLFunction(as_interval(field(j, "omega"), "omega"), as_numbers(field(j, "breakpoints"), "breakpoints"),
                    as_numbers(field(j, "values"), "values"));
}

Measure1D measure_from_json(const Json& j) {
  if (!j.is_object()) throw StructuralError("measure must be an object");
  if (!j.contains("atoms") && !j.contains("density")) {
    throw StructuralError("measure needs \"atoms\" and/or \"density\"");
  }
  std::vector<Measure1D::Atom> atoms;
  if (j.contains("atoms")) {
    for (const Json& a : j.at("atoms")) {
      if (!a.is_array() || a.size() != 2) throw StructuralError("each atom must be [location, mass]");
      atoms.push_back({as_number(a[0], "atom location"), as_number(a[1], "atom mass")});
    }
  }
  std::vector<double> breaks, values;
  if (j.contains("density")) {
    const Json& d = j.at("density");
    breaks = as_numbers(field(d, "breakpoints"), "density breakpoints");
    values = as_numbers(field(d, "values"), "density values");
  }
  return Measure1D(std::move(atoms), std::move(breaks), std::move(values));
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw StructuralError(path + ": " + e.what());
  }
}

const Json& unwrap_input(const Json& j) {
  if (j.is_object() && j.contains("input")) return j.at("input");
  return j;
}

}  // namespace lorcap::io
