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

#include <span>

#include "qmt/linalg.hpp"

namespace qmt {

/// Smooth chart on U(dim): U = exp(iH), H Hermitian assembled from
/// `params` (length dim^2). params[0..dim) is the diagonal of H; the rest
/// are (re, im) pairs for the upper off-diagonal entries, row by row.
/// Throws BadParameterLength.
ComplexMatrix unitary_from_params(Index dim, std::span<const double> params);

/// First column of unitary_from_params(dim, params), a unit vector.
StateVector pure_state_from_params(Index dim, std::span<const double> params);

}  // namespace qmt
