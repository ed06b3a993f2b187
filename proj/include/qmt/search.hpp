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

// Constraint-driven search over instrument parameter manifolds.
//
// A family maps a real parameter vector to an ordered instrument pair. The
// search minimises the hinge penalty
//   sum_c max(0, violation_c)^2
// with random restarts and a Nelder-Mead descent per restart. Restart r
// starts at the origin when r == 0 and otherwise at a point drawn uniformly
// from [-pi, pi]^n with the generator seeded by seed + r. A point is
// feasible iff every constraint holds at its re-evaluated diagnostics, so a
// failed search only means that no feasible point was found within budget.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qmt/effects.hpp"
#include "qmt/models.hpp"
#include "qmt/unitary_chart.hpp"

namespace qmt {

enum class Family {
  Proj2,  // projective binary qubit pairs
  Proj4,  // projective binary pairs on dim 4, rank-2 projections
  Ok4,    // ok_commuting_pair
  Srp4,   // srp_binary_pair
};

std::string_view to_string(Family f);
/// Throws UnknownFamily.
Family parse_family(std::string_view name);
std::size_t param_count(Family f);
Index family_dim(Family f);
InstrumentPair instantiate(Family f, std::span<const double> params);

enum class Comparator { LessEqual, GreaterEqual };

struct Constraint {
  Diagnostic diagnostic;
  Comparator comparator;
  double threshold;
};

/// Parses "qoe>=0.05,aba<=1e-9". Throws ParseError.
std::vector<Constraint> parse_constraints(std::string_view text);
std::string to_string(const Constraint& c);

struct OptimizeOverState {};

struct EffectConstraintSet {
  std::vector<Constraint> targets;
  std::variant<OptimizeOverState, DensityOperator> state = OptimizeOverState{};
};

struct SearchBudget {
  int restarts = 20;
  int max_iters = 2000;
  std::uint64_t seed = 0;
};

struct SearchResult {
  Family family;
  std::vector<double> params;
  std::vector<double> state_params;  // empty when the state was fixed
  DensityOperator state;
  std::vector<std::pair<Diagnostic, double>> diagnostics;
  double objective = 0.0;
  bool feasible = false;
  long iterations = 0;
  int restart = -1;  // index of the restart that produced the result
  std::uint64_t seed = 0;
};

double hinge_violation(const Constraint& c, double value);
bool satisfied(const Constraint& c, double value);

/// All diagnostics of `pair` at `rho`, in Diagnostic declaration order.
std::vector<std::pair<Diagnostic, double>> all_diagnostics(
    const InstrumentPair& pair, const DensityOperator& rho);

SearchResult search_effects(Family family, const EffectConstraintSet& constraints,
                            const SearchBudget& budget);

}  // namespace qmt
