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

#include "qmt/io.hpp"

#include <charconv>
#include <set>
#include <sstream>

#include "qmt/models.hpp"

namespace qmt {
namespace {

constexpr const char* kModule = "cli";
constexpr const char* kInstrumentFormat = "qmt-instrument";
constexpr int kInstrumentVersion = 1;

[[noreturn]] void parse_fail(const std::string& msg) {
  throw Error(ErrorCode::ParseError, kModule, msg);
}

[[noreturn]] void invalid(const std::string& msg) {
  throw Error(ErrorCode::ValidationError, kModule, msg);
}

const Json& field(const Json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) parse_fail(where + ": missing key '" + key + "'");
  return *it;
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) parse_fail(where + ": expected a number");
  return j.get<double>();
}

std::int64_t integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) parse_fail(where + ": expected an integer");
  return j.get<std::int64_t>();
}

std::vector<double> numbers(const Json& j, const std::string& where) {
  if (!j.is_array()) parse_fail(where + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

const std::string& text(const Json& j, const std::string& where) {
  if (!j.is_string()) parse_fail(where + ": expected a string");
  return j.get_ref<const std::string&>();
}

void require_object(const Json& j, const std::string& where) {
  if (!j.is_object()) parse_fail(where + ": expected an object");
}

void allow_keys(const Json& obj, std::initializer_list<const char*> keys,
                const std::string& where) {
  for (const auto& [k, v] : obj.items()) {
    bool known = false;
    for (const char* allowed : keys) known = known || k == allowed;
    if (!known) parse_fail(where + ": unknown key '" + k + "'");
  }
}

cplx complex_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    parse_fail(where + ": expected a complex number [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json complex_to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

// Wraps invariant failures of inner modules so that the message names the
// scenario object.
template <typename F>
auto named(const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError || e.code() == ErrorCode::ValidationError) throw;
    invalid(what + ": " + e.qualified_code() + ": " + e.what());
  }
}

void require_dim(Index got, Index dim, const std::string& what) {
  if (got != dim) {
    invalid(what + ": dimension " + std::to_string(got) + " does not match scenario dim " +
            std::to_string(dim));
  }
}

SpectralDecomposition spectral_of(const Scenario& s, const Json& spec, const std::string& where) {
  const bool by_name = spec.contains("observable");
  const bool inline_matrix = spec.contains("matrix");
  if (by_name == inline_matrix) {
    parse_fail(where + ": give exactly one of 'observable' or 'matrix'");
  }
  if (by_name) {
    const std::string& name = text(spec["observable"], where + ".observable");
    return spectral_decompose(s.observable(name), kClusterTol);
  }
  const ComplexMatrix m = matrix_from_json(spec["matrix"], where + ".matrix");
  return named(where, [&] {
    return spectral_decompose(SelfAdjointOperator::from(m, s.tolerances.linalg), kClusterTol);
  });
}

std::vector<std::pair<std::string, Instrument>> materialise(const Scenario& s,
                                                            const InstrumentDefinition& def) {
  const std::string where = "instruments." + def.name;
  const Json& spec = def.spec;
  require_object(spec, where);
  if (!spec.contains("constructor")) {
    allow_keys(spec, {"outcomes", "kraus"}, where);
    return {{def.name, instrument_from_json(spec, where)}};
  }
  const std::string& ctor = text(spec["constructor"], where + ".constructor");
  const auto pair_of = [&](InstrumentPair p) {
    return std::vector<std::pair<std::string, Instrument>>{{def.name + ".A", std::move(p.a)},
                                                           {def.name + ".B", std::move(p.b)}};
  };
  if (ctor == "projective") {
    allow_keys(spec, {"constructor", "observable", "matrix"}, where);
    return {{def.name, projective_instrument(spectral_of(s, spec, where))}};
  }
  if (ctor == "srp") {
    allow_keys(spec, {"constructor", "observable", "matrix", "unitaries"}, where);
    const SpectralDecomposition decomposition = spectral_of(s, spec, where);
    IntraEigenspaceUnitaries w;
    const Json& list = field(spec, "unitaries", where);
    if (!list.is_array()) parse_fail(where + ".unitaries: expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string at = where + ".unitaries[" + std::to_string(i) + "]";
      require_object(list[i], at);
      allow_keys(list[i], {"outcome", "matrix"}, at);
      w[number(field(list[i], "outcome", at), at + ".outcome")] =
          matrix_from_json(field(list[i], "matrix", at), at + ".matrix");
    }
    return {{def.name, named(where, [&] { return srp_instrument(decomposition, w); })}};
  }
  if (ctor == "trivial_noninvasive") {
    allow_keys(spec, {"constructor", "weights"}, where);
    const std::vector<double> weights = numbers(field(spec, "weights", where), where + ".weights");
    return {{def.name, named(where, [&] { return trivial_noninvasive(s.dim, weights); })}};
  }
  if (ctor == "random_unsharp" || ctor == "random_projective") {
    allow_keys(spec, {"constructor", "outcomes", "seed"}, where);
    const auto n = integer(field(spec, "outcomes", where), where + ".outcomes");
    const auto seed = integer(field(spec, "seed", where), where + ".seed");
    if (n < 1 || seed < 0) invalid(where + ": outcomes must be >= 1 and seed >= 0");
    return {{def.name, named(where, [&] {
               return ctor == "random_unsharp"
                          ? random_unsharp(s.dim, static_cast<int>(n), static_cast<std::uint64_t>(seed))
                          : random_projective(s.dim, static_cast<int>(n),
                                              static_cast<std::uint64_t>(seed));
             })}};
  }
  if (ctor == "wang_busemeyer_pair") {
    allow_keys(spec, {"constructor", "theta"}, where);
    const double theta = number(field(spec, "theta", where), where + ".theta");
    return pair_of(wang_busemeyer_pair(theta));
  }
  if (ctor == "ok_commuting_pair") {
    allow_keys(spec, {"constructor", "params"}, where);
    const std::vector<double> p = numbers(field(spec, "params", where), where + ".params");
    return named(where, [&] {
      CommutingPair c = ok_commuting_pair(p);
      return pair_of({std::move(c.a), std::move(c.b)});
    });
  }
  if (ctor == "srp_binary_pair") {
    allow_keys(spec, {"constructor", "params"}, where);
    const std::vector<double> p = numbers(field(spec, "params", where), where + ".params");
    return named(where, [&] { return pair_of(srp_binary_pair(p)); });
  }
  parse_fail(where + ": unknown constructor '" + ctor + "'");
}

// Reference kinds an analysis may carry.
struct AnalysisShape {
  const char* type;
  std::vector<const char*> instruments;  // keys holding instrument names
  std::vector<const char*> observables;  // keys holding observable names
  bool needs_state;
  bool optional_state;
};

const std::vector<AnalysisShape>& analysis_shapes() {
  static const std::vector<AnalysisShape> shapes = {
      {"classify", {"instrument"}, {}, false, false},
      {"validate", {"instrument"}, {}, false, false},
      {"invasiveness", {"instrument"}, {}, false, true},
      {"effects", {"a", "b"}, {}, true, false},
      {"qoe", {"a", "b"}, {}, true, false},
      {"rre", {"a", "b"}, {}, true, false},
      {"qq", {"a", "b"}, {}, true, false},
      {"ftp", {"a", "b"}, {}, true, false},
      {"commutators", {"a", "b"}, {}, false, false},
      {"robertson", {}, {"a", "b"}, true, false},
      {"state_commutation", {"i1", "i2"}, {"a1", "a2"}, true, false},
      {"joint_existence", {}, {}, true, false},
      {"simulate", {}, {}, true, false},
  };
  return shapes;
}

void check_analysis(const Scenario& s, const Json& a, const std::string& where) {
  require_object(a, where);
  const std::string& type = text(field(a, "type", where), where + ".type");
  const AnalysisShape* shape = nullptr;
  for (const auto& candidate : analysis_shapes()) {
    if (type == candidate.type) shape = &candidate;
  }
  if (shape == nullptr) parse_fail(where + ": unknown analysis type '" + type + "'");
  for (const char* key : shape->instruments) {
    s.instrument(text(field(a, key, where), where + "." + key));
  }
  for (const char* key : shape->observables) {
    s.observable(text(field(a, key, where), where + "." + key));
  }
  if (shape->needs_state || (shape->optional_state && a.contains("state"))) {
    s.state(text(field(a, "state", where), where + ".state"));
  }
  if (type == "joint_existence") {
    const Json& list = field(a, "observables", where);
    if (!list.is_array() || list.empty()) parse_fail(where + ".observables: expected a nonempty array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      s.observable(text(list[i], where + ".observables[" + std::to_string(i) + "]"));
    }
    if (!s.state(a["state"].get<std::string>()).vector) {
      invalid(where + ": joint_existence needs a state given as a vector");
    }
  }
  if (type == "simulate") {
    const Json& list = field(a, "sequence", where);
    if (!list.is_array() || list.empty()) parse_fail(where + ".sequence: expected a nonempty array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      s.instrument(text(list[i], where + ".sequence[" + std::to_string(i) + "]"));
    }
    if (a.contains("trials") && integer(a["trials"], where + ".trials") < 1) {
      invalid(where + ": trials must be >= 1");
    }
  }
}

Json tolerances_to_json(const ScenarioTolerances& t) {
  Json j;
  j["hermitian"] = t.linalg.hermitian;
  j["idempotent"] = t.linalg.idempotent;
  j["psd"] = t.linalg.psd;
  j["trace"] = t.linalg.trace;
  j["norm"] = t.linalg.norm;
  j["classify"] = t.classify;
  j["qoe"] = t.qoe;
  return j;
}

ScenarioTolerances tolerances_from_json(const Json& j) {
  const std::string where = "tolerances";
  require_object(j, where);
  allow_keys(j, {"hermitian", "idempotent", "psd", "trace", "norm", "classify", "qoe"}, where);
  ScenarioTolerances t;
  const auto read = [&](const char* key, double& target) {
    if (!j.contains(key)) return;
    target = number(j[key], where + "." + key);
    if (!(target >= 0.0)) invalid(where + "." + key + ": tolerance must be nonnegative");
  };
  read("hermitian", t.linalg.hermitian);
  read("idempotent", t.linalg.idempotent);
  read("psd", t.linalg.psd);
  read("trace", t.linalg.trace);
  read("norm", t.linalg.norm);
  read("classify", t.classify);
  read("qoe", t.qoe);
  return t;
}

bool same(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

ComplexMatrix matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) parse_fail(where + ": expected a nonempty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) parse_fail(where + "[0]: expected a nonempty row");
  const std::size_t cols = j[0].size();
  ComplexMatrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string row_at = where + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols) {
      parse_fail(row_at + ": expected a row of " + std::to_string(cols) + " entries");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Index>(r), static_cast<Index>(c)) =
          complex_from_json(j[r][c], row_at + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

ComplexVector vector_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) parse_fail(where + ": expected a nonempty array");
  ComplexVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Index>(i)) = complex_from_json(j[i], where + "[" + std::to_string(i) + "]");
  }
  return v;
}

Json instrument_to_json(const Instrument& inst) {
  Json j;
  j["outcomes"] = inst.outcomes();
  Json sets = Json::array();
  for (const auto& set : inst.kraus()) {
    Json ops = Json::array();
    for (const auto& k : set) ops.push_back(matrix_to_json(k));
    sets.push_back(std::move(ops));
  }
  j["kraus"] = std::move(sets);
  return j;
}

Instrument instrument_from_json(const Json& j, const std::string& where) {
  require_object(j, where);
  const std::vector<double> outcomes = numbers(field(j, "outcomes", where), where + ".outcomes");
  const Json& sets = field(j, "kraus", where);
  if (!sets.is_array()) parse_fail(where + ".kraus: expected an array of Kraus sets");
  std::vector<std::vector<ComplexMatrix>> kraus;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const std::string at = where + ".kraus[" + std::to_string(i) + "]";
    if (!sets[i].is_array()) parse_fail(at + ": expected an array of matrices");
    std::vector<ComplexMatrix> ops;
    for (std::size_t k = 0; k < sets[i].size(); ++k) {
      ops.push_back(matrix_from_json(sets[i][k], at + "[" + std::to_string(k) + "]"));
    }
    kraus.push_back(std::move(ops));
  }
  Instrument inst = named(where, [&] { return Instrument(outcomes, std::move(kraus)); });
  const InstrumentDiagnostics diag = validate(inst);
  if (!diag.passed) {
    std::ostringstream os;
    os << where << ": not a valid instrument (trace residual " << diag.trace_residual << ")";
    invalid(os.str());
  }
  return inst;
}

std::string persist_instrument(const Instrument& inst) {
  Json doc;
  doc["format"] = kInstrumentFormat;
  doc["version"] = kInstrumentVersion;
  doc["dim"] = inst.dim();
  const Json body = instrument_to_json(inst);
  for (const auto& [k, v] : body.items()) doc[k] = v;
  return doc.dump(2) + "\n";
}

Instrument load_instrument(std::string_view text_in) {
  Json doc;
  try {
    doc = Json::parse(text_in);
  } catch (const Json::parse_error& e) {
    parse_fail(std::string("instrument document: ") + e.what());
  }
  const std::string where = "instrument";
  require_object(doc, where);
  allow_keys(doc, {"format", "version", "dim", "outcomes", "kraus"}, where);
  if (text(field(doc, "format", where), where + ".format") != kInstrumentFormat) {
    parse_fail(where + ".format: expected '" + std::string(kInstrumentFormat) + "'");
  }
  if (integer(field(doc, "version", where), where + ".version") != kInstrumentVersion) {
    parse_fail(where + ".version: unsupported version");
  }
  const auto dim = integer(field(doc, "dim", where), where + ".dim");
  Instrument inst = instrument_from_json(doc, where);
  require_dim(inst.dim(), dim, where);
  return inst;
}

const NamedState& Scenario::state(const std::string& name) const {
  for (const auto& s : states) {
    if (s.name == name) return s;
  }
  invalid("unknown state '" + name + "'");
}

const SelfAdjointOperator& Scenario::observable(const std::string& name) const {
  for (const auto& o : observables) {
    if (o.name == name) return o.op;
  }
  invalid("unknown observable '" + name + "'");
}

const Instrument& Scenario::instrument(const std::string& name) const {
  for (const auto& [n, inst] : instruments) {
    if (n == name) return inst;
  }
  invalid("unknown instrument '" + name + "'");
}

Scenario parse_scenario(std::string_view text_in) {
  Json doc;
  try {
    doc = Json::parse(text_in);
  } catch (const Json::parse_error& e) {
    parse_fail(std::string("scenario: ") + e.what());
  }
  require_object(doc, "scenario");
  allow_keys(doc, {"dim", "seed", "tolerances", "states", "observables", "instruments", "analyses"},
             "scenario");

  Scenario s;
  const auto dim = integer(field(doc, "dim", "scenario"), "dim");
  if (dim < 1) invalid("dim: must be >= 1");
  s.dim = static_cast<Index>(dim);
  if (doc.contains("seed")) {
    const auto seed = integer(doc["seed"], "seed");
    if (seed < 0) invalid("seed: must be nonnegative");
    s.seed = static_cast<std::uint64_t>(seed);
  }
  if (doc.contains("tolerances")) s.tolerances = tolerances_from_json(doc["tolerances"]);

  std::set<std::string> names;
  const auto claim = [&](const std::string& name, const std::string& where) {
    if (!names.insert(name).second) invalid(where + ": name '" + name + "' is already in use");
  };

  if (doc.contains("states")) {
    require_object(doc["states"], "states");
    for (const auto& [name, spec] : doc["states"].items()) {
      const std::string where = "states." + name;
      require_object(spec, where);
      allow_keys(spec, {"vector", "density"}, where);
      if (spec.contains("vector") == spec.contains("density")) {
        parse_fail(where + ": give exactly one of 'vector' or 'density'");
      }
      if (spec.contains("vector")) {
        const ComplexVector v = vector_from_json(spec["vector"], where + ".vector");
        require_dim(v.size(), s.dim, "state '" + name + "'");
        StateVector psi = named("state '" + name + "'",
                                [&] { return StateVector::from(v, s.tolerances.linalg); });
        s.states.push_back({name, DensityOperator::pure(psi), psi});
      } else {
        const ComplexMatrix m = matrix_from_json(spec["density"], where + ".density");
        require_dim(m.rows(), s.dim, "state '" + name + "'");
        s.states.push_back({name,
                            named("state '" + name + "'",
                                  [&] { return DensityOperator::from(m, s.tolerances.linalg); }),
                            std::nullopt});
      }
    }
  }

  if (doc.contains("observables")) {
    require_object(doc["observables"], "observables");
    for (const auto& [name, spec] : doc["observables"].items()) {
      const std::string where = "observables." + name;
      const ComplexMatrix m = matrix_from_json(spec, where);
      require_dim(m.rows(), s.dim, "observable '" + name + "'");
      s.observables.push_back(
          {name, named("observable '" + name + "'",
                       [&] { return SelfAdjointOperator::from(m, s.tolerances.linalg); })});
    }
  }

  if (doc.contains("instruments")) {
    require_object(doc["instruments"], "instruments");
    for (const auto& [name, spec] : doc["instruments"].items()) {
      s.definitions.push_back({name, spec});
      for (auto& [inst_name, inst] : materialise(s, s.definitions.back())) {
        const std::string what = "instrument '" + inst_name + "'";
        claim(inst_name, "instruments." + name);
        require_dim(inst.dim(), s.dim, what);
        const InstrumentDiagnostics diag = validate(inst, s.tolerances.linalg.trace);
        if (!diag.passed) {
          std::ostringstream os;
          os << what << ": total map is not trace preserving or not completely positive"
             << " (trace residual " << diag.trace_residual << ")";
          invalid(os.str());
        }
        s.instruments.emplace_back(inst_name, std::move(inst));
      }
    }
  }

  if (doc.contains("analyses")) {
    if (!doc["analyses"].is_array()) parse_fail("analyses: expected an array");
    for (std::size_t i = 0; i < doc["analyses"].size(); ++i) {
      const Json& a = doc["analyses"][i];
      check_analysis(s, a, "analyses[" + std::to_string(i) + "]");
      s.analyses.push_back(a);
    }
  }
  return s;
}

Json scenario_to_json(const Scenario& s) {
  Json doc;
  doc["dim"] = s.dim;
  doc["seed"] = s.seed;
  doc["tolerances"] = tolerances_to_json(s.tolerances);
  Json states = Json::object();
  for (const auto& st : s.states) {
    Json spec;
    if (st.vector) {
      spec["vector"] = vector_to_json(st.vector->amplitudes());
    } else {
      spec["density"] = matrix_to_json(st.rho.matrix());
    }
    states[st.name] = std::move(spec);
  }
  doc["states"] = std::move(states);
  Json observables = Json::object();
  for (const auto& o : s.observables) observables[o.name] = matrix_to_json(o.op.matrix());
  doc["observables"] = std::move(observables);
  Json instruments = Json::object();
  for (const auto& d : s.definitions) instruments[d.name] = d.spec;
  doc["instruments"] = std::move(instruments);
  doc["analyses"] = Json(s.analyses);
  return doc;
}

std::string serialize_scenario(const Scenario& s) { return scenario_to_json(s).dump(2) + "\n"; }

bool operator==(const Scenario& a, const Scenario& b) {
  if (a.dim != b.dim || a.seed != b.seed) return false;
  if (tolerances_to_json(a.tolerances) != tolerances_to_json(b.tolerances)) return false;
  if (a.states.size() != b.states.size() || a.observables.size() != b.observables.size() ||
      a.definitions.size() != b.definitions.size() ||
      a.instruments.size() != b.instruments.size() || a.analyses != b.analyses) {
    return false;
  }
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    const auto& x = a.states[i];
    const auto& y = b.states[i];
    if (x.name != y.name || !same(x.rho.matrix(), y.rho.matrix())) return false;
    if (x.vector.has_value() != y.vector.has_value()) return false;
    if (x.vector && x.vector->amplitudes() != y.vector->amplitudes()) return false;
  }
  for (std::size_t i = 0; i < a.observables.size(); ++i) {
    if (a.observables[i].name != b.observables[i].name ||
        !same(a.observables[i].op.matrix(), b.observables[i].op.matrix())) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.definitions.size(); ++i) {
    if (a.definitions[i].name != b.definitions[i].name ||
        a.definitions[i].spec != b.definitions[i].spec) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.instruments.size(); ++i) {
    const auto& [na, ia] = a.instruments[i];
    const auto& [nb, ib] = b.instruments[i];
    if (na != nb || ia.outcomes() != ib.outcomes() || ia.kraus().size() != ib.kraus().size()) {
      return false;
    }
    for (std::size_t x = 0; x < ia.size(); ++x) {
      if (ia.kraus(x).size() != ib.kraus(x).size()) return false;
      for (std::size_t k = 0; k < ia.kraus(x).size(); ++k) {
        if (!same(ia.kraus(x)[k], ib.kraus(x)[k])) return false;
      }
    }
  }
  return true;
}

std::pair<CountTable, CountTable> ingest_contingency(std::string_view csv) {
  CountTable ab{};
  CountTable ba{};
  std::istringstream in{std::string(csv)};
  std::string line;
  std::size_t row = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++row;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (!header) {
      if (t != "order,a_answer,b_answer,count") {
        parse_fail("row " + std::to_string(row) +
                   ": expected header 'order,a_answer,b_answer,count'");
      }
      header = true;
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream fields(t);
    std::string cell;
    while (std::getline(fields, cell, ',')) cells.push_back(trim(cell));
    if (!t.empty() && t.back() == ',') cells.push_back({});
    const std::string at = "row " + std::to_string(row);
    if (cells.size() != 4) parse_fail(at + ": expected 4 fields, got " + std::to_string(cells.size()));

    CountTable* table = nullptr;
    if (cells[0] == "AB") {
      table = &ab;
    } else if (cells[0] == "BA") {
      table = &ba;
    } else {
      parse_fail(at + ": order must be AB or BA, got '" + cells[0] + "'");
    }
    const auto answer = [&](const std::string& v, const char* column) {
      if (v == "y") return kYes;
      if (v == "n") return kNo;
      parse_fail(at + ": " + column + " must be y or n, got '" + v + "'");
    };
    const int a = answer(cells[1], "a_answer");
    const int b = answer(cells[2], "b_answer");

    std::int64_t count = 0;
    const char* first = cells[3].data();
    const char* last = first + cells[3].size();
    const auto [ptr, ec] = std::from_chars(first, last, count);
    if (ec != std::errc() || ptr != last) {
      parse_fail(at + ": count must be an integer, got '" + cells[3] + "'");
    }
    if (count < 0) {
      throw Error(ErrorCode::NegativeCount, kModule, at + ": negative count " + cells[3]);
    }
    (*table)[a][b] += static_cast<std::uint64_t>(count);
  }
  if (!header) parse_fail("row 1: expected header 'order,a_answer,b_answer,count'");
  return {ab, ba};
}

}  // namespace qmt
