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

// Quantum instruments in Kraus form. Outcome x acts on states as
//   I(x) rho = sum_k K_{x,k} rho K_{x,k}^dagger
// which is completely positive by construction. Trace preservation of the
// total map is what `validate` checks.
//
// Superoperator matrices use column stacking: vec(rho) stacks the columns
// of rho left to right, and vec(K rho K^dagger) = (conj(K) kron K) vec(rho).

#include <span>
#include <vector>

#include "qmt/linalg.hpp"

namespace qmt {

inline constexpr double kProbabilityFloor = 1e-12;

class Instrument {
 public:
  /// kraus[i] holds the Kraus operators of outcomes[i]. Only structure is
  /// checked here (nonempty, distinct finite outcomes, square operators of
  /// one dimension); trace preservation is left to `validate`.
  Instrument(std::vector<double> outcomes,
             std::vector<std::vector<ComplexMatrix>> kraus);

  Index dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return outcomes_.size(); }
  const std::vector<double>& outcomes() const noexcept { return outcomes_; }
  const std::vector<ComplexMatrix>& kraus(std::size_t index) const {
    return kraus_.at(index);
  }
  const std::vector<std::vector<ComplexMatrix>>& kraus() const noexcept {
    return kraus_;
  }

  /// Position of outcome `x`; throws UnknownOutcome.
  std::size_t index_of(double x) const;

  /// sum_k K^dagger K for the outcome at `index`.
  const ComplexMatrix& effect(std::size_t index) const {
    return effects_.at(index);
  }
  const ComplexMatrix& superoperator(std::size_t index) const {
    return superops_.at(index);
  }

  /// Unnormalised I(x) rho for the outcome at `index`.
  ComplexMatrix apply(std::size_t index, const ComplexMatrix& rho) const;

 private:
  Index dim_ = 0;
  std::vector<double> outcomes_;
  std::vector<std::vector<ComplexMatrix>> kraus_;
  std::vector<ComplexMatrix> effects_;
  std::vector<ComplexMatrix> superops_;
};

struct InstrumentDiagnostics {
  double trace_residual = 0.0;                  // ||sum K^dagger K - I||_F
  std::vector<double> choi_min_eigenvalues;     // one per outcome
  bool passed = false;
};

InstrumentDiagnostics validate(const Instrument& inst, double tol = kDefaultTol);

/// Throws InvalidInstrument if `inst` fails validation at `tol`.
void require_valid(const Instrument& inst, double tol = kDefaultTol);

struct Povm {
  std::vector<double> outcomes;
  std::vector<SelfAdjointOperator> effects;
};

Povm povm(const Instrument& inst);

ComplexMatrix apply_outcome(const Instrument& inst, double x,
                            const DensityOperator& rho);
double outcome_probability(const Instrument& inst, double x,
                           const DensityOperator& rho);
DensityOperator state_update(const Instrument& inst, double x,
                             const DensityOperator& rho);

struct MeasurementStep {
  const Instrument* instrument;
  double outcome;
};

/// Tr[I_n(x_n) ... I_1(x_1) rho], steps applied in sequence order.
double sequential_joint(std::span<const MeasurementStep> steps,
                        const DensityOperator& rho);

/// P(B=y | A=x || rho). Throws ZeroProbabilityConditioning when
/// P(A=x) <= kProbabilityFloor.
double conditional_probability(const Instrument& a, double x,
                               const Instrument& b, double y,
                               const DensityOperator& rho);

const ComplexMatrix& superoperator_matrix(const Instrument& inst, double x);

/// Choi matrix sum_k vec(K) vec(K)^dagger of one outcome.
ComplexMatrix choi_matrix(const Instrument& inst, std::size_t index);

/// Minimal Kraus sets from the eigendecomposition of each outcome's Choi
/// matrix, dropping eigenvalues below 1e-12.
Instrument canonicalize(const Instrument& inst);

}  // namespace qmt
