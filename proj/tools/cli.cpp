#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "lorcap/cap1d.hpp"
#include "lorcap/conductor.hpp"
#include "lorcap/error.hpp"
#include "lorcap/lorentz.hpp"
#include "lorcap/twoweight.hpp"
#include "lorcap/varsolve.hpp"

namespace lorcap::cli {

namespace {

using io::Json;
using io::number;

double parse_q(const std::string& s) {
  if (s == "inf" || s == "Inf" || s == "infinity") return LorentzIndex::kInf;
  std::size_t used = 0;
  double q = 0.0;
  try {
    q = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) throw ContractError("--q: expected a number or \"inf\", got \"" + s + "\"");
  return q;
}

std::vector<double> parse_list(const std::string& s, std::size_t expected, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ContractError(flag + ": \"" + item + "\" is not a number");
    }
  }
  if (expected != 0 && out.size() != expected) {
    throw ContractError(flag + ": expected " + std::to_string(expected) + " comma-separated numbers");
  }
  return out;
}

ConvexPhi parse_phi(const std::string& s) {
  if (s == "id") return ConvexPhi::identity();
  if (s.rfind("power:", 0) == 0) return ConvexPhi::power(parse_list(s.substr(6), 1, "--phi")[0]);
  if (s.rfind("pl:", 0) == 0) {
    std::vector<std::pair<double, double>> knots{{0.0, 0.0}};
    std::stringstream ss(s.substr(3));
    std::string knot;
    while (std::getline(ss, knot, ',')) {
      const auto colon = knot.find(':');
      if (colon == std::string::npos) throw ContractError("--phi: knot \"" + knot + "\" must be x:y");
      knots.emplace_back(std::stod(knot.substr(0, colon)), std::stod(knot.substr(colon + 1)));
    }
    return ConvexPhi::piecewise(std::move(knots));
  }
  throw ContractError("--phi: expected id, power:<beta> or pl:<x:y,...>");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

Json q_json(double q) { return number(q); }

// Conductor given by --A/--a/--b/--B or by a file holding either form.
struct ConductorArgs {
  double A = std::nan(""), a = std::nan(""), b = std::nan(""), B = std::nan("");
  std::string input;
  std::optional<Conductor1D> single_conductor;
  ConductorUnion1D union_conductor;

  void add(CLI::App& app) {
    app.add_option("--A", A, "left end of the open interval");
    app.add_option("--a", a, "left end of the compact interval");
    app.add_option("--b", b, "right end of the compact interval");
    app.add_option("--B", B, "right end of the open interval");
    app.add_option("--input", input, "conductor JSON ({A,a,b,B} or {omega,K})");
  }
  void load(const std::filesystem::path& base) {
    if (input.empty()) {
      if (std::isnan(A) || std::isnan(a) || std::isnan(b) || std::isnan(B)) {
        throw ContractError("conductor: give --A --a --b --B or --input");
      }
      single_conductor = Conductor1D(A, a, b, B);
      return;
    }
    const Json j = io::unwrap_input(io::read_json_file(resolve(base, input).string()));
    if (j.is_object() && j.contains("A")) {
      single_conductor = io::conductor_from_json(j);
    } else {
      union_conductor = io::union_from_json(j);
    }
  }
  bool single() const { return single_conductor.has_value(); }
  ConductorUnion1D as_union() const {
    if (!single()) return union_conductor;
    const Conductor1D& c = *single_conductor;
    return ConductorUnion1D({{c.outer_left(), c.outer_right()}}, {{c.inner_left(), c.inner_right()}});
  }
  Json input_json() const { return single() ? io::to_json(*single_conductor) : io::to_json(union_conductor); }
};

Json run_norm(const std::string& input, double p, double q, const std::filesystem::path& base) {
  const StepFunction f = io::step_function_from_json(io::unwrap_input(io::read_json_file(resolve(base, input).string())));
  const LorentzIndex idx(p, q);
  Json out{{"command", "norm"}, {"input", io::to_json(f)}, {"p", number(p)}, {"q", q_json(q)}};
  out["quasinorm"] = number(quasinorm(f, idx));
  out["norm_starstar"] = number(norm_starstar(f, idx));
  if (!idx.q_infinite()) out["quasinorm_via_distribution"] = number(quasinorm_via_distribution(f, idx));
  return out;
}

Json run_rearrange(const std::string& input, const std::filesystem::path& base) {
  const StepFunction f = io::step_function_from_json(io::unwrap_input(io::read_json_file(resolve(base, input).string())));
  Json out{{"command", "rearrange"}, {"input", io::to_json(f)}};
  out["cells"] = io::to_json(rearrangement(f))["cells"];
  out["total_mass"] = number(f.total_mass());
  return out;
}

Json run_cap1d(ConductorArgs& c, double p, double q, const std::filesystem::path& base) {
  const LorentzIndex idx(p, q);
  c.load(base);
  Json out{{"command", "cap1d"}, {"input", c.input_json()}, {"p", number(p)}, {"q", q_json(q)}};
  if (c.single()) {
    const Conductor1D& k = *c.single_conductor;
    out["lower"] = number(cap_lower(k, idx));
    out["upper"] = number(cap_upper(k, idx));
    out["upper_coarse"] = number(cap_upper_coarse(k, p));
    out["exact_p_cap"] = number(exact_p_cap(k, p));
    out["value"] = (!idx.q_infinite() && q == p) ? Json(number(exact_p_cap(k, p))) : Json(nullptr);
  } else {
    const CapBracket br = cap_union(c.as_union(), idx);
    out["lower"] = number(br.lower);
    out["upper"] = number(br.upper);
    out["value"] = br.lower == br.upper ? Json(number(br.lower)) : Json(nullptr);
  }
  return out;
}

struct SolveArgs {
  int nodes = 1001;
  double tol = 1e-7;
  int max_iters = 2000;
  std::uint64_t seed = 0;
  double step_scale = 0.05;
  bool profile = false;
};

Json run_solve(ConductorArgs& c, double p, double q, const SolveArgs& s, const std::filesystem::path& base) {
  if (q == LorentzIndex::kInf) throw ContractError("solve: q = inf is not supported (bounds only, use cap1d)");
  c.load(base);
  GridProblem g;
  g.conductor = c.as_union();
  g.nodes = s.nodes;
  g.idx = LorentzIndex(p, q);
  g.tol = s.tol;
  g.max_iters = s.max_iters;
  g.seed = s.seed;
  g.step_scale = s.step_scale;
  const SolveResult r = solve_cap(g);
  Json out{{"command", "solve"}, {"input", c.input_json()}, {"p", number(p)}, {"q", q_json(q)}};
  out["nodes"] = s.nodes;
  out["seed"] = s.seed;
  out["value"] = number(r.value);
  out["bracket"] = Json::array({number(r.bracket.lower), number(r.bracket.upper)});
  out["surrogate_value"] = number(r.surrogate_value);
  out["converged"] = r.converged;
  out["iterations"] = r.iterations;
  if (s.profile) {
    Json xs = Json::array(), us = Json::array();
    for (double x : r.nodes) xs.push_back(number(x));
    for (double u : r.u) us.push_back(number(u));
    out["x"] = xs;
    out["u"] = us;
  }
  return out;
}

Json run_conductor(const std::string& input, double a, double p, double q, const std::string& phi_spec,
                   const TGrid& grid, const std::filesystem::path& base) {
  const PLFunction f = io::pl_function_from_json(io::unwrap_input(io::read_json_file(resolve(base, input).string())));
  if (q == LorentzIndex::kInf) throw ContractError("conductor-verify: q must be finite");
  const LorentzIndex idx(p, q);
  const ConvexPhi phi = parse_phi(phi_spec);
  const ConductorReport r = verify_conductor(f, a, idx, phi, grid);
  Json out{{"command", "conductor-verify"}, {"input", io::to_json(f)}, {"a", number(a)},
           {"p", number(p)}, {"q", q_json(q)}, {"phi", phi.describe()}};
  out.update(io::to_json(r));
  if (phi.is_identity()) {
    out["stieltjes_lhs"] = number(r.stieltjes_lhs);
    out["stieltjes_rhs"] = number(r.stieltjes_rhs);
  }
  return out;
}

struct TwoWeightArgs {
  std::string mu, nu, omega, corpus, pairs, point, grid = "50,50,50";
  double p = 2, q = 2, r = 2, s = 2;
};

Json run_two_weight(const TwoWeightArgs& t, const std::filesystem::path& base) {
  const auto om = parse_list(t.omega, 2, "--omega");
  const Interval omega{om[0], om[1]};
  if (!(omega.left < omega.right)) throw ContractError("--omega: need left < right");
  const ExponentTuple ex(t.p, t.q, t.r, t.s);
  // A two-weight report holds both measures under "input"; pick the named one.
  auto measure_arg = [&](const std::string& path, const char* key) {
    const Json j = io::unwrap_input(io::read_json_file(resolve(base, path).string()));
    return io::measure_from_json(j.is_object() && j.contains(key) ? j.at(key) : j);
  };
  const Measure1D mu = measure_arg(t.mu, "mu");
  const Measure1D nu = measure_arg(t.nu, "nu");
  const auto g = parse_list(t.grid, 3, "--grid");
  CriterionGrid grid;
  grid.nx = static_cast<int>(g[0]);
  grid.nd = static_cast<int>(g[1]);
  grid.ntau = static_cast<int>(g[2]);

  Json out{{"command", "two-weight"},
           {"input", {{"mu", io::to_json(mu)}, {"nu", io::to_json(nu)}, {"omega", Json::array({number(omega.left), number(omega.right)})}}},
           {"p", number(t.p)}, {"q", number(t.q)}, {"r", number(t.r)}, {"s", number(t.s)}};
  out["K_est"] = number(criterion_K(mu, nu, omega, ex, grid));
  if (!t.point.empty()) {
    const auto pt = parse_list(t.point, 3, "--point");
    out["point_ratio"] = number(criterion_ratio(mu, nu, ex, {pt[0], pt[1], pt[2]}));
  }
  if (!t.pairs.empty()) {
    const Json pj = io::unwrap_input(io::read_json_file(resolve(base, t.pairs).string()));
    if (!pj.is_object() || !pj.contains("pairs")) throw StructuralError("--pairs: missing \"pairs\" array");
    std::vector<ConductorUnion1D> pairs;
    Json echo = Json::array();
    for (const Json& e : pj.at("pairs")) {
      pairs.push_back(io::union_from_json(e));
      echo.push_back(io::to_json(pairs.back()));
    }
    out["input"]["pairs"] = echo;
    out["general_K"] = number(general_criterion_K(mu, nu, pairs, ex, LorentzIndex(t.p, t.q)));
  }
  if (!t.corpus.empty()) {
    const Json cj = io::unwrap_input(io::read_json_file(resolve(base, t.corpus).string()));
    if (!cj.is_object() || !cj.contains("functions")) throw StructuralError("--corpus: missing \"functions\" array");
    std::vector<PLFunction> corpus;
    Json echo = Json::array();
    for (const Json& e : cj.at("functions")) {
      corpus.push_back(io::pl_function_from_json(e));
      echo.push_back(io::to_json(corpus.back()));
    }
    out["input"]["functions"] = echo;
    out["A_est"] = number(inequality_A(mu, nu, omega, ex, corpus));
  }
  return out;
}

Outcome fail(const std::string& command, const std::string& msg) { return {kValidation, command, {}, msg}; }

}  // namespace

Outcome execute(const std::vector<std::string>& args, const std::filesystem::path& base_dir) {
  if (args.empty()) return fail("", "missing command (norm, rearrange, cap1d, solve, conductor-verify, two-weight, batch)");
  const std::string cmd = args[0];
  CLI::App app{"lorcap " + cmd, "lorcap " + cmd};
  std::string input, q_text = "2", phi = "id";
  double p = 2.0, a = 2.0;
  ConductorArgs conductor;
  SolveArgs solve;
  TGrid tgrid;
  TwoWeightArgs tw;

  if (cmd == "norm" || cmd == "rearrange") {
    app.add_option("--input", input, "step function JSON")->required();
    if (cmd == "norm") {
      app.add_option("--p", p)->required();
      app.add_option("--q", q_text)->required();
    }
  } else if (cmd == "cap1d" || cmd == "solve") {
    conductor.add(app);
    app.add_option("--p", p)->required();
    app.add_option("--q", q_text)->required();
    if (cmd == "solve") {
      app.add_option("--nodes", solve.nodes);
      app.add_option("--tol", solve.tol);
      app.add_option("--max-iters", solve.max_iters);
      app.add_option("--seed", solve.seed);
      app.add_option("--step-scale", solve.step_scale);
      app.add_flag("--profile", solve.profile, "include the minimizing profile");
    }
  } else if (cmd == "conductor-verify") {
    app.add_option("--input", input, "PL function JSON")->required();
    app.add_option("--a", a)->required();
    app.add_option("--p", p)->required();
    app.add_option("--q", q_text)->required();
    app.add_option("--phi", phi, "id | power:<beta> | pl:<x:y,...>");
    app.add_option("--per-decade", tgrid.per_decade);
    app.add_option("--decades", tgrid.decades);
  } else if (cmd == "two-weight") {
    app.add_option("--mu", tw.mu)->required();
    app.add_option("--nu", tw.nu)->required();
    app.add_option("--omega", tw.omega, "l,r")->required();
    app.add_option("--p", tw.p)->required();
    app.add_option("--q", tw.q)->required();
    app.add_option("--r", tw.r)->required();
    app.add_option("--s", tw.s)->required();
    app.add_option("--grid", tw.grid, "nx,nd,ntau");
    app.add_option("--point", tw.point, "x,d,tau");
    app.add_option("--pairs", tw.pairs, "JSON {\"pairs\": [union, ...]}");
    app.add_option("--corpus", tw.corpus, "JSON {\"functions\": [PL function, ...]}");
  } else {
    return fail(cmd, "unknown command \"" + cmd + "\"");
  }

  std::vector<std::string> rest(args.rbegin(), args.rend() - 1);
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    return {kOk, cmd, {}, app.help()};
  } catch (const CLI::ParseError& e) {
    return fail(cmd, e.what());
  }

  try {
    Json report;
    int exit = kOk;
    if (cmd == "norm") {
      report = run_norm(input, p, parse_q(q_text), base_dir);
    } else if (cmd == "rearrange") {
      report = run_rearrange(input, base_dir);
    } else if (cmd == "cap1d") {
      report = run_cap1d(conductor, p, parse_q(q_text), base_dir);
    } else if (cmd == "solve") {
      report = run_solve(conductor, p, parse_q(q_text), solve, base_dir);
    } else if (cmd == "conductor-verify") {
      report = run_conductor(input, a, p, parse_q(q_text), phi, tgrid, base_dir);
      if (!report["holds"].get<bool>()) exit = kVerification;
    } else {
      report = run_two_weight(tw, base_dir);
    }
    return {exit, cmd, std::move(report), {}};
  } catch (const std::invalid_argument& e) {  // ContractError, StructuralError
    return fail(cmd, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(cmd, e.what());
  }
}

namespace {

std::string csv_number(const Json& j) {
  if (j.is_null()) return "";
  if (j.is_boolean()) return j.get<bool>() ? "true" : "false";
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

const char* kCsvHeader = "case_id,command,lhs,rhs,holds,margin,runtime_ms";

std::string csv_row(const std::string& id, const Outcome& o, const std::string& runtime) {
  auto get = [&](const char* key) { return o.report.contains(key) ? csv_number(o.report[key]) : std::string(); };
  const std::string holds = o.report.contains("holds") ? get("holds") : (o.exit == kOk ? "true" : "false");
  return id + "," + o.command + "," + get("lhs") + "," + get("rhs") + "," + holds + "," + get("margin") + "," + runtime;
}

struct BatchCase {
  std::string id;
  std::vector<std::string> argv;
};

int run_batch(const std::vector<std::string>& args, const std::string& format, std::ostream& out, std::ostream& err) {
  CLI::App app{"lorcap batch", "lorcap batch"};
  std::string manifest;
  unsigned threads = 1;
  bool timing = false;
  app.add_option("--manifest", manifest, "JSON {\"cases\": [{\"id\": .., \"argv\": [..]}]}")->required();
  app.add_option("--threads", threads);
  app.add_flag("--timing", timing, "fill runtime_ms (reports are then not byte-reproducible)");
  std::vector<std::string> rest(args.rbegin(), args.rend() - 1);
  std::vector<BatchCase> cases;
  std::filesystem::path base;
  try {
    app.parse(rest);
    const Json m = io::read_json_file(manifest);
    base = std::filesystem::path(manifest).parent_path();
    for (const Json& c : m.at("cases")) {
      cases.push_back({c.at("id").get<std::string>(), c.at("argv").get<std::vector<std::string>>()});
    }
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "batch: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    err << "batch: " << e.what() << "\n";
    return kValidation;
  }

  std::vector<Outcome> outcomes(cases.size());
  std::vector<double> runtime(cases.size(), 0.0);
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < cases.size(); i += stride) {
      const auto t0 = std::chrono::steady_clock::now();
      outcomes[i] = execute(cases[i].argv, base);
      runtime[i] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  threads = std::max(1u, threads);
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w, threads);
  work(0, threads);
  for (auto& th : pool) th.join();

  int passed = 0;
  for (const Outcome& o : outcomes) passed += o.exit == kOk ? 1 : 0;
  const int failed = static_cast<int>(outcomes.size()) - passed;
  if (format == "csv") {
    out << kCsvHeader << "\n";
    for (std::size_t i = 0; i < cases.size(); ++i) {
      std::ostringstream ms;
      if (timing) ms << std::lround(runtime[i]);
      out << csv_row(cases[i].id, outcomes[i], ms.str()) << "\n";
    }
  } else {
    Json report{{"command", "batch"}, {"cases", Json::array()}};
    for (std::size_t i = 0; i < cases.size(); ++i) {
      // Echoing argv keeps a batch report usable as a manifest.
      Json c{{"id", cases[i].id}, {"argv", cases[i].argv}, {"command", outcomes[i].command}, {"exit", outcomes[i].exit}};
      if (outcomes[i].exit == kValidation) {
        c["error"] = outcomes[i].error;
      } else {
        c["report"] = outcomes[i].report;
      }
      if (timing) c["runtime_ms"] = std::lround(runtime[i]);
      report["cases"].push_back(std::move(c));
    }
    report["summary"] = {{"total", outcomes.size()}, {"passed", passed}, {"failed", failed}};
    out << report.dump(2) << "\n";
  }
  return failed == 0 ? kOk : kVerification;
}

}  // namespace

constexpr const char* kUsage =
    "usage: lorcap <command> [options] [--format json|csv]\n"
    "commands:\n"
    "  norm              Lorentz quasinorm of a step function\n"
    "  rearrange         decreasing rearrangement of a step function\n"
    "  cap1d             closed-form capacitance bracket of a 1D conductor\n"
    "  solve             discretized capacitance minimization\n"
    "  conductor-verify  conductor inequality for a PL function\n"
    "  two-weight        two-weight criterion and inequality estimates\n"
    "  batch             run a manifest of cases\n"
    "run 'lorcap <command> --help' for options\n";

int run(const std::vector<std::string>& raw, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  std::string format = "json";
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == "--format" && i + 1 < raw.size()) {
      format = raw[++i];
    } else if (raw[i].rfind("--format=", 0) == 0) {
      format = raw[i].substr(9);
    } else {
      args.push_back(raw[i]);
    }
  }
  if (format != "json" && format != "csv") {
    err << "--format: expected json or csv\n";
    return kValidation;
  }
  if (args.empty() || args[0] == "--help" || args[0] == "-h") {
    (args.empty() ? err : out) << kUsage;
    return args.empty() ? kValidation : kOk;
  }
  if (args[0] == "batch") return run_batch(args, format, out, err);

  const Outcome o = execute(args);
  if (o.exit == kOk && o.report.is_null()) {
    out << o.error;
    return kOk;
  }
  if (o.exit == kValidation) {
    err << (o.command.empty() ? "lorcap" : "lorcap " + o.command) << ": " << o.error << "\n";
    return o.exit;
  }
  if (format == "csv") {
    out << kCsvHeader << "\n" << csv_row("0", o, "") << "\n";
  } else {
    out << o.report.dump(2) << "\n";
  }
  return o.exit;
}

}  // namespace lorcap::cli
