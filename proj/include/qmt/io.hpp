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

#pragma once

// Documents read and written by the command line: scenarios, persisted
// instruments and split-ballot contingency tables.
//
// Complex numbers are two-element arrays [re, im] and matrices are arrays of
// rows. Numbers are written in the shortest decimal form that reads back to
// the same double, so persisted Kraus entries survive a round trip exactly.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qmt/instrument.hpp"
#include "qmt/montecarlo.hpp"

namespace qmt {

using Json = nlohmann::ordered_json;

Json matrix_to_json(const ComplexMatrix& m);
Json vector_to_json(const ComplexVector& v);
/// `where` names the offending key in ParseError messages.
ComplexMatrix matrix_from_json(const Json& j, const std::string& where);
ComplexVector vector_from_json(const Json& j, const std::string& where);

Json instrument_to_json(const Instrument& inst);
Instrument instrument_from_json(const Json& j, const std::string& where = "instrument");

/// Instrument document text. load_instrument throws ParseError on malformed
/// text and ValidationError when the instrument fails validation.
std::string persist_instrument(const Instrument& inst);
Instrument load_instrument(std::string_view text);

struct ScenarioTolerances {
  Tolerances linalg;
  double classify = 1e-8;
  double qoe = kDefaultTol;
};

struct NamedState {
  std::string name;
  DensityOperator rho;
  std::optional<StateVector> vector;  // set when given as a pure vector
};

struct NamedObservable {
  std::string name;
  SelfAdjointOperator op;
};

/// One entry of the "instruments" object. Pair constructors materialise two
/// instruments named `<name>.A` and `<name>.B`.
struct InstrumentDefinition {
  std::string name;
  Json spec;
};

struct Scenario {
  Index dim = 0;
  std::uint64_t seed = 0;
  ScenarioTolerances tolerances;
  std::vector<NamedState> states;
  std::vector<NamedObservable> observables;
  std::vector<InstrumentDefinition> definitions;
  std::vector<std::pair<std::string, Instrument>> instruments;
  std::vector<Json> analyses;

  const NamedState& state(const std::string& name) const;
  const SelfAdjointOperator& observable(const std::string& name) const;
  const Instrument& instrument(const std::string& name) const;
};

/// Throws ParseError (with line or key) and ValidationError (naming the
/// object and the invariant).
Scenario parse_scenario(std::string_view text);
Json scenario_to_json(const Scenario& s);
std::string serialize_scenario(const Scenario& s);

/// Field-by-field equality, matrices compared exactly.
bool operator==(const Scenario& a, const Scenario& b);

/// CSV with header `order,a_answer,b_answer,count`, order in {AB, BA},
/// answers in {y, n}. Duplicate cells are summed. Returns (AB, BA) tables.
std::pair<CountTable, CountTable> ingest_contingency(std::string_view csv);

}  // namespace qmt
