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

// Diagnostics for pairs of instruments measured in sequence: question order
// effect (QOE), response replicability (RRE), the QQ-equality, violation of
// the formula of total probability (FTP), observable- and
// update-noncommutativity, joint distributions of commuting families, and
// the Robertson standard-deviation bound.
//
// Notation: p_AB(x, y) = Tr[I_B(y) I_A(x) rho] is the probability of
// answering x to A and then y to B.

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "qmt/instrument.hpp"

namespace qmt {

/// p[x][y] = p_AB(x, y), indices follow the instruments' outcome order.
using JointTable = std::vector<std::vector<double>>;

JointTable joint_table(const Instrument& first, const Instrument& second,
                       const DensityOperator& rho);

struct QoeEntry {
  double x = 0.0;
  double y = 0.0;
  double p_ab = 0.0;              // p(A=x, B=y)
  double p_ba = 0.0;              // p(B=y, A=x)
  double deviation = 0.0;         // |p_ab - p_ba|
  double trace_commutator = 0.0;  // |Tr[[I_A(x), I_B(y)] rho]|
};

struct QoeReport {
  double max_abs_deviation = 0.0;
  std::vector<QoeEntry> entries;
  bool shows_qoe = false;
};

QoeReport qoe_report(const Instrument& a, const Instrument& b,
                     const DensityOperator& rho, double tol = kDefaultTol);

/// max_{x,y} |p_AB(x, y) - p_BA(y, x)|, without the superoperator channel.
double qoe_deviation(const Instrument& a, const Instrument& b,
                     const DensityOperator& rho);

/// ||M_A(x) M_B(y) - M_B(y) M_A(x)||_F on superoperator matrices.
double u_commutator_norm(const Instrument& a, double x, const Instrument& b,
                         double y);
double max_u_commutator_norm(const Instrument& a, const Instrument& b);

/// max_{x,y} ||[Pi_A(x), Pi_B(y)]||_F on the effects.
double o_commutator_norm(const Instrument& a, const Instrument& b);

struct RreReport {
  double aa_residual = 0.0;
  double aba_residual = 0.0;
  double bab_residual = 0.0;
};

RreReport rre_report(const Instrument& a, const Instrument& b,
                     const DensityOperator& rho);

/// Per-branch residuals behind RreReport: aa[x], aba[x * |B| + y] and
/// bab[y * |A| + x]. Each report field is the maximum of its branch list.
struct RreBranches {
  std::vector<double> aa;
  std::vector<double> aba;
  std::vector<double> bab;
};

RreBranches rre_branches(const Instrument& a, const Instrument& b,
                         const DensityOperator& rho);

/// For binary instruments "yes" is the larger outcome value, "no" the
/// smaller one. p(ByAn) is B answered first with yes, then A with no.
///   q     = p(ByAy) + p(BnAn) - [p(AyBy) + p(AnBn)]
///   q_alt = p(ByAn) + p(BnAy) - [p(AyBn) + p(AnBy)]
/// Each order's four joints sum to one, hence q + q_alt = 0.
struct QqReport {
  double q = 0.0;
  double q_alt = 0.0;
  double q_y = 0.0;  // p(ByAy) - p(AyBy)
  double q_n = 0.0;  // p(BnAn) - p(AnBn)
};

QqReport qq_value(const Instrument& a, const Instrument& b,
                  const DensityOperator& rho);

/// p(B=y) - sum_x p(A=x) p(B=y | A=x). Branches with p(A=x) at or below
/// kProbabilityFloor contribute their joint probability directly.
double ftp_residual(const Instrument& a, const Instrument& b, double y,
                    const DensityOperator& rho);

/// max_y |ftp_residual(a, b, y, rho)|
double max_ftp_residual(const Instrument& a, const Instrument& b,
                        const DensityOperator& rho);

struct JointOutcome {
  std::vector<double> outcomes;
  double probability = 0.0;
};

struct JointExistence {
  bool exists = false;
  /// Largest spread between the ordered-product and meet expressions over
  /// all outcome tuples.
  double max_discrepancy = 0.0;
  std::optional<std::vector<JointOutcome>> joint;
};

JointExistence joint_existence(std::span<const SpectralDecomposition> observables,
                               const StateVector& psi, double tol = 1e-10);

struct StateDependentCommutation {
  double observable_commutator = 0.0;  // |Tr[rho [a1, a2]]|
  double update_commutator = 0.0;      // max ||[I1(x), I2(y)] rho||_F
  double projection_commutator = 0.0;  // max ||[E1(x), E2(y)] psi||
};

StateDependentCommutation state_dependent_commutation(
    const SelfAdjointOperator& a1, const SelfAdjointOperator& a2,
    const Instrument& i1, const Instrument& i2,
    const std::variant<StateVector, DensityOperator>& state);

struct RobertsonCheck {
  double lhs = 0.0;  // sigma(a) sigma(b)
  double rhs = 0.0;  // |Tr[rho (ab - ba)]| / 2, hbar = 1
  bool holds = false;
};

RobertsonCheck robertson_check(const SelfAdjointOperator& a,
                               const SelfAdjointOperator& b,
                               const DensityOperator& rho);

/// Named scalar diagnostics of an ordered instrument pair at a state.
enum class Diagnostic {
  QoeDeviation,
  AbaResidual,
  BabResidual,
  AaResidual,
  QqAbs,
  FtpAbs,
  UCommNorm,
  OCommNorm,
};

std::string_view to_string(Diagnostic d);
std::optional<Diagnostic> parse_diagnostic(std::string_view name);

double evaluate(Diagnostic d, const Instrument& a, const Instrument& b,
                const DensityOperator& rho);

}  // namespace qmt
