// Copyright 2026 The qmt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmt/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qmt/classify.hpp"
#include "qmt/effects.hpp"
#include "qmt/io.hpp"
#include "qmt/montecarlo.hpp"
#include "qmt/search.hpp"

namespace qmt::cli {
namespace {

constexpr std::uint64_t kDefaultTrials = 10000;

struct Options {
  std::string scenario_path;
  std::string data_path;
  std::string instrument_path;
  std::string out_path;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::string family;
  std::string require;
  int restarts = 20;
  int max_iters = 2000;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cli", "cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Json label_json(const ClassLabel& l, const Instrument& inst) {
  Json j;
  j["taxon"] = std::string(to_string(l.taxon));
  j["sharp"] = l.sharp;
  j["repeatable"] = l.repeatable;
  j["projective"] = l.projective;
  j["invasive"] = l.invasive;
  j["repeatability_defect"] = repeatability_defect(inst);
  return j;
}

Json diagnostics_json(const InstrumentDiagnostics& d) {
  Json j;
  j["passed"] = d.passed;
  j["trace_residual"] = d.trace_residual;
  j["choi_min_eigenvalues"] = d.choi_min_eigenvalues;
  return j;
}

Json qoe_json(const QoeReport& r) {
  Json j;
  j["max_abs_deviation"] = r.max_abs_deviation;
  j["shows_qoe"] = r.shows_qoe;
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    Json row;
    row["x"] = e.x;
    row["y"] = e.y;
    row["p_ab"] = e.p_ab;
    row["p_ba"] = e.p_ba;
    row["deviation"] = e.deviation;
    row["trace_commutator"] = e.trace_commutator;
    entries.push_back(std::move(row));
  }
  j["entries"] = std::move(entries);
  return j;
}

Json rre_json(const RreReport& r) {
  Json j;
  j["aa_residual"] = r.aa_residual;
  j["aba_residual"] = r.aba_residual;
  j["bab_residual"] = r.bab_residual;
  return j;
}

Json qq_json(const QqReport& r) {
  Json j;
  j["q"] = r.q;
  j["q_alt"] = r.q_alt;
  j["q_y"] = r.q_y;
  j["q_n"] = r.q_n;
  return j;
}

Json ftp_json(const Instrument& a, const Instrument& b, const DensityOperator& rho) {
  Json j;
  Json per = Json::array();
  for (double y : b.outcomes()) {
    Json row;
    row["y"] = y;
    row["residual"] = ftp_residual(a, b, y, rho);
    per.push_back(std::move(row));
  }
  j["max_abs_residual"] = max_ftp_residual(a, b, rho);
  j["residuals"] = std::move(per);
  return j;
}

Json commutators_json(const Instrument& a, const Instrument& b) {
  Json j;
  j["u_commutator_norm"] = max_u_commutator_norm(a, b);
  j["o_commutator_norm"] = o_commutator_norm(a, b);
  return j;
}

Json simulate_json(const Scenario& s, const Json& a, std::uint64_t seed,
                   std::optional<std::uint64_t> trials_flag) {
  std::vector<Instrument> seq;
  std::vector<std::string> names;
  for (const auto& name : a["sequence"]) {
    names.push_back(name.get<std::string>());
    seq.push_back(s.instrument(names.back()));
  }
  const DensityOperator& rho = s.state(a["state"].get<std::string>()).rho;
  std::uint64_t trials = kDefaultTrials;
  if (a.contains("trials")) trials = a["trials"].get<std::uint64_t>();
  if (trials_flag) trials = *trials_flag;

  const EmpiricalStats stats = simulate_sequence(seq, rho, trials, seed);
  Json j;
  j["sequence"] = names;
  j["trials"] = trials;
  j["seed"] = seed;
  Json rows = Json::array();
  for (const auto& [tuple, count] : stats.counts) {
    std::vector<MeasurementStep> steps;
    for (std::size_t k = 0; k < tuple.size(); ++k) steps.push_back({&seq[k], tuple[k]});
    Json row;
    row["outcomes"] = tuple;
    row["count"] = count;
    row["frequency"] = stats.frequencies.at(tuple);
    row["analytic"] = sequential_joint(steps, rho);
    rows.push_back(std::move(row));
  }
  j["counts"] = std::move(rows);
  return j;
}

Json run_analysis(const Scenario& s, const Json& a, std::size_t index, double classify_tol,
                  double qoe_tol, std::uint64_t seed, std::optional<std::uint64_t> trials) {
  const std::string type = a["type"].get<std::string>();
  const auto inst = [&](const char* key) -> const Instrument& {
    return s.instrument(a[key].get<std::string>());
  };
  const auto obs = [&](const char* key) -> const SelfAdjointOperator& {
    return s.observable(a[key].get<std::string>());
  };
  const auto rho = [&]() -> const DensityOperator& {
    return s.state(a["state"].get<std::string>()).rho;
  };

  Json j;
  j["index"] = index;
  j["type"] = type;
  for (const auto& [k, v] : a.items()) {
    if (k != "type") j[k] = v;
  }
  Json r;
  if (type == "classify") {
    r = label_json(classify_label(inst("instrument"), classify_tol), inst("instrument"));
  } else if (type == "validate") {
    r = diagnostics_json(validate(inst("instrument"), s.tolerances.linalg.trace));
  } else if (type == "invasiveness") {
    const DensityOperator* state = a.contains("state") ? &rho() : nullptr;
    const Invasiveness v = invasiveness(inst("instrument"), state, classify_tol);
    r["global_noninvasive"] = v.global_noninvasive;
    if (v.state_noninvasive) r["state_noninvasive"] = *v.state_noninvasive;
  } else if (type == "qoe") {
    r = qoe_json(qoe_report(inst("a"), inst("b"), rho(), qoe_tol));
  } else if (type == "rre") {
    r = rre_json(rre_report(inst("a"), inst("b"), rho()));
  } else if (type == "qq") {
    r = qq_json(qq_value(inst("a"), inst("b"), rho()));
  } else if (type == "ftp") {
    r = ftp_json(inst("a"), inst("b"), rho());
  } else if (type == "commutators") {
    r = commutators_json(inst("a"), inst("b"));
  } else if (type == "effects") {
    const Instrument& ia = inst("a");
    const Instrument& ib = inst("b");
    r["qoe"] = qoe_json(qoe_report(ia, ib, rho(), qoe_tol));
    r["rre"] = rre_json(rre_report(ia, ib, rho()));
    if (ia.size() == 2 && ib.size() == 2) r["qq"] = qq_json(qq_value(ia, ib, rho()));
    r["ftp"] = ftp_json(ia, ib, rho());
    r["commutators"] = commutators_json(ia, ib);
  } else if (type == "robertson") {
    const RobertsonCheck c = robertson_check(obs("a"), obs("b"), rho());
    r["lhs"] = c.lhs;
    r["rhs"] = c.rhs;
    r["holds"] = c.holds;
  } else if (type == "state_commutation") {
    const StateDependentCommutation c =
        state_dependent_commutation(obs("a1"), obs("a2"), inst("i1"), inst("i2"), rho());
    r["observable_commutator"] = c.observable_commutator;
    r["update_commutator"] = c.update_commutator;
    r["projection_commutator"] = c.projection_commutator;
  } else if (type == "joint_existence") {
    std::vector<SpectralDecomposition> family;
    for (const auto& name : a["observables"]) {
      family.push_back(spectral_decompose(s.observable(name.get<std::string>())));
    }
    const JointExistence e = joint_existence(family, *s.state(a["state"].get<std::string>()).vector);
    r["exists"] = e.exists;
    r["max_discrepancy"] = e.max_discrepancy;
    if (e.joint) {
      Json rows = Json::array();
      for (const auto& o : *e.joint) {
        Json row;
        row["outcomes"] = o.outcomes;
        row["probability"] = o.probability;
        rows.push_back(std::move(row));
      }
      r["joint"] = std::move(rows);
    }
  } else if (type == "simulate") {
    r = simulate_json(s, a, derive_seed(seed, index), trials);
  }
  j["result"] = std::move(r);
  return j;
}

Json provenance(std::optional<std::uint64_t> seed, const std::optional<Json>& tolerances) {
  Json p;
  p["tool"] = kToolName;
  p["version"] = kToolVersion;
  p["seed"] = seed ? Json(*seed) : Json(nullptr);
  p["tolerances"] = tolerances ? *tolerances : Json(nullptr);
  return p;
}

struct Loaded {
  Scenario scenario;
  std::uint64_t seed;
  double classify_tol;
  double qoe_tol;
  Json tolerances;
};

Loaded load(const Options& o) {
  Loaded l{parse_scenario(read_file(o.scenario_path)), 0, 0.0, 0.0, {}};
  l.seed = o.seed.value_or(l.scenario.seed);
  l.classify_tol = o.tol.value_or(l.scenario.tolerances.classify);
  l.qoe_tol = o.tol.value_or(l.scenario.tolerances.qoe);
  l.tolerances = scenario_to_json(l.scenario)["tolerances"];
  l.tolerances["classify"] = l.classify_tol;
  l.tolerances["qoe"] = l.qoe_tol;
  return l;
}

Json cmd_classify(const Options& o) {
  const Loaded l = load(o);
  Json report;
  report["command"] = "classify";
  report["provenance"] = provenance(l.seed, l.tolerances);
  Json labels = Json::array();
  for (const auto& [name, inst] : l.scenario.instruments) {
    Json row;
    row["instrument"] = name;
    const Json label = label_json(classify_label(inst, l.classify_tol), inst);
    for (const auto& [k, v] : label.items()) row[k] = v;
    labels.push_back(std::move(row));
  }
  report["labels"] = std::move(labels);
  return report;
}

Json cmd_report(const Options& o, bool simulate_only) {
  const Loaded l = load(o);
  Json report;
  report["command"] = simulate_only ? "simulate" : "report";
  report["provenance"] = provenance(l.seed, l.tolerances);
  if (!simulate_only) report["labels"] = cmd_classify(o)["labels"];
  Json results = Json::array();
  for (std::size_t i = 0; i < l.scenario.analyses.size(); ++i) {
    const Json& a = l.scenario.analyses[i];
    if (simulate_only && a["type"] != "simulate") continue;
    results.push_back(
        run_analysis(l.scenario, a, i, l.classify_tol, l.qoe_tol, l.seed, o.trials));
  }
  if (simulate_only && results.empty()) {
    throw Error(ErrorCode::ValidationError, "cli", "scenario has no simulate analyses");
  }
  report["results"] = std::move(results);
  return report;
}

Json cmd_validate(const Options& o) {
  Json report;
  report["command"] = "validate";
  if (!o.instrument_path.empty()) {
    const Instrument inst = load_instrument(read_file(o.instrument_path));
    report["provenance"] = provenance(std::nullopt, std::nullopt);
    Json row;
    row["instrument"] = o.instrument_path;
    row["dim"] = inst.dim();
    row["outcomes"] = inst.outcomes();
    row["diagnostics"] = diagnostics_json(validate(inst));
    report["instruments"] = Json::array({row});
    report["valid"] = true;
    return report;
  }
  const Loaded l = load(o);
  report["provenance"] = provenance(l.seed, l.tolerances);
  report["dim"] = l.scenario.dim;
  report["states"] = l.scenario.states.size();
  report["observables"] = l.scenario.observables.size();
  Json rows = Json::array();
  for (const auto& [name, inst] : l.scenario.instruments) {
    Json row;
    row["instrument"] = name;
    row["diagnostics"] = diagnostics_json(validate(inst, l.scenario.tolerances.linalg.trace));
    rows.push_back(std::move(row));
  }
  report["instruments"] = std::move(rows);
  report["analyses"] = l.scenario.analyses.size();
  report["valid"] = true;
  return report;
}

Json cmd_qq(const Options& o) {
  const auto [ab, ba] = ingest_contingency(read_file(o.data_path));
  const EmpiricalStats stats = empirical_qq(ab, ba);
  const auto table = [](const CountTable& t) {
    Json j;
    j["yy"] = t[kYes][kYes];
    j["yn"] = t[kYes][kNo];
    j["ny"] = t[kNo][kYes];
    j["nn"] = t[kNo][kNo];
    return j;
  };
  Json report;
  report["command"] = "qq";
  report["provenance"] = provenance(std::nullopt, std::nullopt);
  report["data"] = o.data_path;
  report["tables"]["AB"] = table(ab);
  report["tables"]["BA"] = table(ba);
  report["n"] = stats.n;
  report["q_hat"] = *stats.q_hat;
  report["q_se"] = *stats.q_se;
  report["z"] = *stats.z;
  report["test"] =
      "two-sample z statistic, independent multinomial arms (a design choice, not a "
      "prescribed test)";
  return report;
}

Json cmd_search(const Options& o) {
  const Family family = parse_family(o.family);
  EffectConstraintSet constraints{parse_constraints(o.require), OptimizeOverState{}};
  SearchBudget budget;
  budget.restarts = o.restarts;
  budget.max_iters = o.max_iters;
  budget.seed = o.seed.value_or(0);
  if (budget.restarts < 1 || budget.max_iters < 1) {
    throw Error(ErrorCode::BadParameters, "cli", "--restarts and --max-iters must be >= 1");
  }
  const SearchResult r = search_effects(family, constraints, budget);

  Json report;
  report["command"] = "search";
  report["provenance"] = provenance(budget.seed, std::nullopt);
  report["family"] = std::string(to_string(r.family));
  Json cs = Json::array();
  for (const auto& c : constraints.targets) cs.push_back(to_string(c));
  report["constraints"] = std::move(cs);
  report["restarts"] = budget.restarts;
  report["max_iters"] = budget.max_iters;
  report["feasible"] = r.feasible;
  report["objective"] = r.objective;
  report["restart"] = r.restart;
  report["iterations"] = r.iterations;
  Json diag;
  for (const auto& [d, v] : r.diagnostics) diag[std::string(to_string(d))] = v;
  report["diagnostics"] = std::move(diag);
  report["params"] = r.params;
  report["state_params"] = r.state_params;
  report["state"] = matrix_to_json(r.state.matrix());
  return report;
}

void emit(const Json& report, const Options& o, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (o.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out_path, std::ios::binary);
  if (!f || !(f << text)) {
    throw Error(ErrorCode::ValidationError, "cli", "cannot write '" + o.out_path + "'");
  }
}

}  // namespace

ExitCode exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NumericalFailure:
    case ErrorCode::ZeroProbabilityConditioning:
    case ErrorCode::DegenerateVariance:
      return kNumerical;
    default:
      return kParseOrValidation;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum instrument toolkit for sequential-measurement effects", kToolName};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kToolVersion);

  Options o;
  app.add_option("--tol", o.tol, "Classification and QOE tolerance")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", o.seed, "Seed overriding the scenario seed");
  app.add_option("--out", o.out_path, "Write the report to this file");
  app.add_option("--trials", o.trials, "Trajectories per simulate analysis")
      ->check(CLI::PositiveNumber);

  auto* classify = app.add_subcommand("classify", "Class label of every instrument");
  auto* report = app.add_subcommand("report", "Run every analysis of a scenario");
  auto* simulate = app.add_subcommand("simulate", "Run the simulate analyses of a scenario");
  for (auto* sub : {classify, report, simulate}) {
    sub->add_option("--scenario", o.scenario_path, "Scenario document")->required();
  }
  auto* validate_cmd = app.add_subcommand("validate", "Validate a scenario or instrument");
  auto* vs = validate_cmd->add_option("--scenario", o.scenario_path, "Scenario document");
  auto* vi = validate_cmd->add_option("--instrument", o.instrument_path, "Instrument document");
  vs->excludes(vi);
  validate_cmd->require_option(1);

  auto* qq = app.add_subcommand("qq", "QQ statistic from split-ballot counts");
  qq->add_option("--data", o.data_path, "CSV with order,a_answer,b_answer,count")->required();

  auto* search = app.add_subcommand("search", "Constraint search over an instrument family");
  search->add_option("--family", o.family, "proj2, proj4, ok4 or srp4")->required();
  search->add_option("--require", o.require, "Constraints, e.g. \"qoe>=0.05,aba<=1e-9\"")
      ->required();
  search->add_option("--restarts", o.restarts, "Number of restarts");
  search->add_option("--max-iters", o.max_iters, "Simplex iterations per restart");

  std::vector<std::string> argv(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(argv.begin(), argv.end());  // CLI11 consumes from the back
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    Json result;
    if (classify->parsed()) result = cmd_classify(o);
    if (report->parsed()) result = cmd_report(o, false);
    if (simulate->parsed()) result = cmd_report(o, true);
    if (validate_cmd->parsed()) result = cmd_validate(o);
    if (qq->parsed()) result = cmd_qq(o);
    if (search->parsed()) result = cmd_search(o);
    emit(result, o, out);
    return kSuccess;
  } catch (const Error& e) {
    err << e.qualified_code() << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

}  // namespace qmt::cli
