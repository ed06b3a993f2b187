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

#include <optional>
#include <string_view>

#include "qmt/instrument.hpp"

namespace qmt {

inline constexpr double kClassifyTol = 1e-8;

enum class Taxon {
  Projective,              // P
  SharpRepeatableNonProj,  // SRP-bar
  SharpNonRepeatable,      // SR-bar
  Unsharp,
};

std::string_view to_string(Taxon t);

struct ClassLabel {
  bool sharp = false;
  bool repeatable = false;
  bool projective = false;
  bool invasive = true;
  Taxon taxon = Taxon::Unsharp;
};

/// Effects are mutually orthogonal projections.
bool is_sharp(const Instrument& inst, double tol = kClassifyTol);

/// Sharp, and every update superoperator equals that of rho -> E rho E.
bool is_projective(const Instrument& inst, double tol = kClassifyTol);

/// I(x)^* Pi(x) = Pi(x) for every outcome. Testing the dual identity is the
/// same as testing Tr[I(x) I(x) rho] = Tr[I(x) rho] on every matrix unit.
bool is_repeatable(const Instrument& inst, double tol = kClassifyTol);

/// max_x ||I(x)^* Pi(x) - Pi(x)||_F
double repeatability_defect(const Instrument& inst);

/// Largest |P(A=x, A=x) - P(A=x)| over a tomographically complete family of
/// pure states (basis vectors and the (e_i + e_j)/sqrt2, (e_i + i e_j)/sqrt2
/// superpositions).
double repeatability_residual_on_basis_states(const Instrument& inst);

struct Invasiveness {
  bool global_noninvasive = false;
  std::optional<bool> state_noninvasive;
};

Invasiveness invasiveness(const Instrument& inst,
                          const DensityOperator* rho = nullptr,
                          double tol = kClassifyTol);

ClassLabel classify_label(const Instrument& inst, double tol = kClassifyTol);

}  // namespace qmt
