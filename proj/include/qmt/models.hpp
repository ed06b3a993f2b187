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

// Constructors for the canonical instrument families. Unless stated
// otherwise every constructor uses a single Kraus operator per outcome.

#include <cstdint>
#include <map>
#include <span>
#include <utility>

#include "qmt/instrument.hpp"

namespace qmt {

/// Outcome x -> unitary W_x that maps range E(x) into itself. Outcomes
/// without an entry use the identity.
using IntraEigenspaceUnitaries = std::map<double, ComplexMatrix>;

/// Lueders instrument: Kraus {E(x)}.
Instrument projective_instrument(const SpectralDecomposition& spec);

/// Kraus {W_x E(x)}. Throws IncompatibleUnitaries when a W_x is not unitary
/// or does not preserve range E(x).
Instrument srp_instrument(const SpectralDecomposition& spec,
                          const IntraEigenspaceUnitaries& w,
                          double tol = kDefaultTol);

/// Unitary acting as `block` on the span of the orthonormal columns of
/// `basis` and as the identity on its orthogonal complement.
ComplexMatrix embed_on_range(const ComplexMatrix& basis,
                             const ComplexMatrix& block);

/// I(x) = k_x id with Kraus {sqrt(k_x) I}; outcomes are 0..n-1.
/// Throws BadWeights.
Instrument trivial_noninvasive(Index dim, std::span<const double> weights);

/// Gaussian Kraus operators (two per outcome) right-normalised by
/// (sum K^dagger K)^(-1/2). Re-sampled while any effect lies within 1e-6 of
/// a projection. Outcomes are 0..n-1.
Instrument random_unsharp(Index dim, int n_outcomes, std::uint64_t seed);

/// Lueders instrument of a Haar-random basis split into `n_outcomes`
/// nonempty groups. Outcomes are 0..n-1.
Instrument random_projective(Index dim, int n_outcomes, std::uint64_t seed);

struct InstrumentPair {
  Instrument a;
  Instrument b;
};

/// Binary Lueders qubit pair, outcomes {0 = no, 1 = yes}. A measures the
/// computational basis; B's "yes" vector is cos(theta) e0 + sin(theta) e1.
InstrumentPair wang_busemeyer_pair(double theta);

struct CommutingPair {
  Instrument a;
  Instrument b;
  SpectralDecomposition observable_a;
  SpectralDecomposition observable_b;
};

inline constexpr std::size_t kOkParamCount = 16;

/// Dimension 4 with A = diag(1,1,0,0) and B = diag(1,0,1,0). Each of the
/// four two-dimensional eigenspaces carries a U(2) block from
/// unitary_from_params(2, .); params are grouped as
/// [A yes | A no | B yes | B no], four per block. Throws BadParameters.
CommutingPair ok_commuting_pair(std::span<const double> params);

/// Binary Lueders pair on `dim` with rank-`rank` "yes" projections
/// U diag(1..1, 0..0) U^dagger. params = [U_A (dim^2) | U_B (dim^2)].
InstrumentPair projective_pair(Index dim, Index rank,
                               std::span<const double> params);

inline constexpr std::size_t kSrpPairParamCount = 32;

/// Sharp binary pair on dimension 4: A has eigenspaces span{e0,e1} (yes)
/// and span{e2,e3} (no); B has the same split after a rotation R. Every
/// eigenspace carries its own U(2) block.
/// params = [A yes | A no | B yes | B no | R (16)].
InstrumentPair srp_binary_pair(std::span<const double> params);

}  // namespace qmt
