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

// Portable seeded randomness. The engine is std::mt19937_64, whose output
// sequence is fixed by the C++ standard. Standard distributions are not
// portable across library implementations, so uniforms and normals are
// derived here:
//   uniform() = (next() >> 11) * 2^-53, in [0, 1)
//   normal()  = Box-Muller on two uniforms (cosine branch only)

#include <cstdint>
#include <random>

#include "qmt/linalg.hpp"

namespace qmt {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 mix of (seed, stream); used to derive independent sub-seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Complex Ginibre matrix with standard normal real and imaginary parts.
ComplexMatrix random_gaussian(Index rows, Index cols, Rng& rng);

/// Haar-distributed unitary (QR of a Ginibre matrix, phase-corrected).
ComplexMatrix random_unitary(Index dim, Rng& rng);

StateVector random_state_vector(Index dim, Rng& rng);

/// Mixed state G G^dagger / Tr, G Ginibre.
DensityOperator random_density(Index dim, Rng& rng);

/// Random Hermitian matrix with Gaussian entries.
SelfAdjointOperator random_observable(Index dim, Rng& rng);

}  // namespace qmt
